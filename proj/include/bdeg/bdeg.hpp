#pragma once

// Umbrella header for the bdeg toolkit: solvers and checkers for Beltrami
// equations whose ellipticity degenerates on part of the unit disk.

#include "bdeg/beltrami.hpp"
#include "bdeg/calculus.hpp"
#include "bdeg/conditions.hpp"
#include "bdeg/config.hpp"
#include "bdeg/example.hpp"
#include "bdeg/grid.hpp"
#include "bdeg/operators.hpp"
#include "bdeg/quadrature.hpp"
#include "bdeg/radial.hpp"
#include "bdeg/solver.hpp"
#include "bdeg/sweep.hpp"
#include "bdeg/version.hpp"
