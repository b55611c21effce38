#include <catch2/catch_amalgamated.hpp>
#include "bdeg/bdeg.hpp"
