#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "bdeg/calculus.hpp"
#include "oracles.hpp"

using namespace bdeg;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("centered_fd is exact for affine fields everywhere") {
    GridSpec s = make_grid(2.0, 32);
    SECTION("F = z") {
        auto d = wirtinger_derivatives(ComplexField::sample(s, [](cplx z) { return z; }),
                                       DerivMethod::centered_fd);
        for (std::size_t m = 0; m < s.size(); ++m) {
            CHECK(std::abs(d.dz.values[m] - 1.0) < 1e-13);
            CHECK(std::abs(d.dzbar.values[m]) < 1e-13);
        }
    }
    SECTION("F = conj(z)") {
        auto d = wirtinger_derivatives(ComplexField::sample(s, [](cplx z) { return std::conj(z); }),
                                       DerivMethod::centered_fd);
        for (std::size_t m = 0; m < s.size(); ++m) {
            CHECK(std::abs(d.dz.values[m]) < 1e-13);
            CHECK(std::abs(d.dzbar.values[m] - 1.0) < 1e-13);
        }
    }
    SECTION("F = z + 0.3 conj(z) has constant ratio dzbar/dz") {
        auto d = wirtinger_derivatives(
            ComplexField::sample(s, [](cplx z) { return z + 0.3 * std::conj(z); }),
            DerivMethod::centered_fd);
        for (std::size_t m = 0; m < s.size(); ++m)
            CHECK(std::abs(d.dzbar.values[m] / d.dz.values[m] - 0.3) < 1e-12);
    }
}

TEST_CASE("spectral derivatives are exact for periodic fields") {
    GridSpec s = make_grid(2.0, 64);
    // band-limited field: exp(i pi x) * cos(pi y/ ... ) pick modes that fit the torus
    const double kx = pi / s.half_width * 3, ky = pi / s.half_width * 2;
    ComplexField f = ComplexField::sample(s, [&](cplx z) {
        return std::exp(cplx(0, kx * z.real() + ky * z.imag()));
    });
    auto d = wirtinger_derivatives(f, DerivMethod::spectral);
    const cplx kappa(kx, ky);
    for (std::size_t m = 0; m < s.size(); ++m) {
        const cplx expected_dz = cplx(0, 0.5) * std::conj(kappa) * f.values[m];
        const cplx expected_dzb = cplx(0, 0.5) * kappa * f.values[m];
        CHECK(std::abs(d.dz.values[m] - expected_dz) < 1e-10);
        CHECK(std::abs(d.dzbar.values[m] - expected_dzb) < 1e-10);
    }
}

TEST_CASE("spectral matches analytic and centered_fd on the Gaussian bump") {
    oracles::Gaussian g{0.3};
    GridSpec s256 = make_grid(2.0, 256);
    ComplexField f256 = ComplexField::sample(s256, [&](cplx z) { return g.value(z); });
    auto sp = wirtinger_derivatives(f256, DerivMethod::spectral);
    double sup_spectral = 0.0;
    for (int i = 0; i < s256.n; ++i)
        for (int j = 0; j < s256.n; ++j)
            sup_spectral = std::max(sup_spectral, std::abs(sp.dz.at(i, j) - g.dz(s256.node(i, j))));
    CHECK(sup_spectral < 1e-8);  // spectrally exact up to the periodization tail

    // centered_fd carries its h^2 truncation floor: measured ~1.5e-3 at
    // n=256 for this bump, shrinking by ~4x per refinement.
    auto fd = wirtinger_derivatives(f256, DerivMethod::centered_fd);
    double sup256 = 0.0;
    for (std::size_t m = 0; m < s256.size(); ++m)
        sup256 = std::max(sup256, std::abs(sp.dz.values[m] - fd.dz.values[m]));
    CHECK(sup256 < 5e-3);

    GridSpec s512 = make_grid(2.0, 512);
    ComplexField f512 = ComplexField::sample(s512, [&](cplx z) { return g.value(z); });
    auto sp512 = wirtinger_derivatives(f512, DerivMethod::spectral);
    auto fd512 = wirtinger_derivatives(f512, DerivMethod::centered_fd);
    double sup512 = 0.0;
    for (std::size_t m = 0; m < s512.size(); ++m)
        sup512 = std::max(sup512, std::abs(sp512.dz.values[m] - fd512.dz.values[m]));
    CHECK(sup512 < sup256 / 3.0);  // second-order decay
}

TEST_CASE("integrate: midpoint rule on disks and annuli") {
    GridSpec s = make_grid(2.0, 256);
    RealField one(s, 1.0);
    const double area = integrate(one, Region::disk(cplx{}, 1.0));
    CHECK(std::abs(area - pi) < 2.0 * s.spacing * 2.0 * pi);

    RealField zero(s, 0.0);
    CHECK(integrate(zero, Region::disk(cplx{}, 1.0)) == 0.0);

    CHECK_THROWS_AS(integrate(one, Region::disk(cplx{1.5, 0.0}, 1.0)), std::invalid_argument);
}

TEST_CASE("integrate: example majorant, strict and singular-aware routes") {
    GridSpec s = make_grid(2.0, 256);
    auto q = [](cplx y) {
        const double a = std::abs(y);
        return a == 0.0 ? inf : (a + 1.0) / a;
    };
    RealField qf = RealField(s);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) qf.at(i, j) = q(s.node(i, j));

    // the origin is an exact node, so strict midpoint propagates the infinity
    CHECK(std::isinf(integrate(qf, Region::disk(cplx{}, 1.0))));

    // the singular-aware route recovers the integrable value 3*pi
    FiniteIntegral fi = integrate_finite(qf, Region::disk(cplx{}, 1.0));
    CHECK(fi.infinite_nodes == 1);
    const double oracle = oracles::polar_integral(q, 1.0);
    CHECK(oracle == Approx(3.0 * pi).epsilon(1e-4));
    CHECK(fi.value == Approx(3.0 * pi).epsilon(0.01));
}

TEST_CASE("integrate is additive over a disk/annulus partition") {
    GridSpec s = make_grid(2.0, 128);
    RealField f = RealField(s);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) f.at(i, j) = std::cos(s.node(i, j).real());
    const double whole = integrate(f, Region::disk(cplx{}, 1.0));
    const double inner = integrate(f, Region::disk(cplx{}, 0.6));
    const double outer = integrate(f, Region::annulus(cplx{}, 0.6, 1.0));
    CHECK(whole == Approx(inner + outer).margin(1e-13));
}

TEST_CASE("field_norms") {
    GridSpec s = make_grid(2.0, 256);
    ComplexField idf = ComplexField::sample(s, [](cplx z) { return z; });
    FieldNorms n1 = field_norms(idf, Region::disk(cplx{}, 1.0));
    CHECK(n1.sup == Approx(1.0).margin(2.0 * s.spacing));

    ComplexField cf = ComplexField::sample(s, [](cplx) { return cplx{0.3, -0.4}; });
    FieldNorms n2 = field_norms(cf, Region::disk(cplx{}, 1.0));
    CHECK(n2.l1 == Approx(0.5 * pi).epsilon(0.02));

    ComplexField unit = ComplexField::sample(s, [](cplx z) {
        return std::abs(z) > 0 ? z / std::abs(z) : cplx{1.0, 0.0};
    });
    FieldNorms n3 = field_norms(unit, Region::annulus(cplx{}, 0.5, 1.0));
    CHECK(n3.l2 * n3.l2 == Approx(0.75 * pi).epsilon(0.02));

    // a region trapping no node at all is an error
    CHECK_THROWS_AS(field_norms(idf, Region::disk(cplx{1.0 + s.spacing / 3, 1.0}, 1e-9)),
                    std::invalid_argument);
}

TEST_CASE("bilinear interpolation") {
    GridSpec s = make_grid(2.0, 64);
    ComplexField sq = ComplexField::sample(s, [](cplx z) { return z * z; });

    // node values are exact
    CHECK(interpolate(sq, s.node(10, 20)) == sq.at(10, 20));

    // affine fields are reproduced exactly everywhere
    ComplexField aff = ComplexField::sample(s, [](cplx z) { return 2.0 * z - cplx{0.5, 1.0}; });
    for (cplx z : {cplx{0.13, -0.77}, cplx{1.49, 0.02}, cplx{-1.2, 1.1}})
        CHECK(std::abs(interpolate(aff, z) - (2.0 * z - cplx{0.5, 1.0})) < 1e-13);

    // quadratic field: O(spacing^2) at a cell midpoint
    const cplx mid = s.node(30, 30) + cplx{s.spacing / 2, s.spacing / 2};
    CHECK(std::abs(interpolate(sq, mid) - mid * mid) < s.spacing * s.spacing);

    CHECK_THROWS_AS(interpolate(sq, cplx{2.0, 0.0}), std::domain_error);
}
