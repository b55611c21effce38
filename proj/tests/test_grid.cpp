#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "bdeg/grid.hpp"

using namespace bdeg;

TEST_CASE("make_grid basics") {
    GridSpec s = make_grid(2.0, 16);
    CHECK(s.spacing == 0.25);

    GridSpec u = make_grid(1.0, 16);
    CHECK(u.coord(8) == 0.0);  // z = 0 is an exact node

    GridSpec fine = make_grid(2.0, 512);
    CHECK(fine.spacing == 0.0078125);

    CHECK_THROWS_AS(make_grid(2.0, 100), std::invalid_argument);  // not a power of two
    CHECK_THROWS_AS(make_grid(0.5, 16), std::invalid_argument);   // disk would not fit
    CHECK_THROWS_AS(make_grid(2.0, 8), std::invalid_argument);    // below minimum size
}

TEST_CASE("node coordinates reproducible from indices") {
    GridSpec s = make_grid(2.0, 64);
    for (int i : {0, 1, 31, 32, 63})
        for (int j : {0, 17, 63}) {
            cplx z = s.node(i, j);
            CHECK(z.real() == -s.half_width + j * s.spacing);
            CHECK(z.imag() == -s.half_width + i * s.spacing);
        }
}

TEST_CASE("csv dump round trip with infinities") {
    GridSpec s = make_grid(2.0, 16);
    ComplexField f = ComplexField::sample(s, [](cplx z) { return z * z - cplx{0.25, 1.0}; });
    auto path = std::filesystem::temp_directory_path() / "bdeg_test_field.csv";
    dump_csv(f, path.string());
    ComplexField g = load_complex_csv(path.string());
    REQUIRE(g.spec == s);
    for (std::size_t m = 0; m < f.values.size(); ++m) {
        CHECK(g.values[m].real() == Catch::Approx(f.values[m].real()).margin(0));
        CHECK(g.values[m].imag() == Catch::Approx(f.values[m].imag()).margin(0));
    }
    std::filesystem::remove(path);

    // real dump serializes +inf as the literal "inf"
    RealField r(s, 1.0);
    r.at(3, 5) = inf;
    auto rpath = std::filesystem::temp_directory_path() / "bdeg_test_real.csv";
    dump_csv(r, rpath.string());
    std::ifstream in(rpath);
    std::string line;
    bool saw_inf = false;
    while (std::getline(in, line))
        if (line.find(",inf") != std::string::npos) saw_inf = true;
    CHECK(saw_inf);
    std::filesystem::remove(rpath);
}
