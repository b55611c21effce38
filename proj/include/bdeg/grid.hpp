#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdeg {

using cplx = std::complex<double>;

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Uniform n x n sampling of the square [-L, L)^2, row index = imaginary
/// axis, column index = real axis. n is a power of two so the grid is
/// FFT-ready, and L >= 1 so the closed unit disk always fits.
struct GridSpec {
    double half_width = 2.0;
    int n = 256;
    double spacing = 0.015625;

    /// Coordinate of axis index idx; the same expression is used everywhere
    /// so node positions are reproducible bit-exactly from (i, j).
    double coord(int idx) const { return -half_width + idx * spacing; }

    cplx node(int row, int col) const { return {coord(col), coord(row)}; }

    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * n + col;
    }

    std::size_t size() const { return static_cast<std::size_t>(n) * n; }

    bool operator==(const GridSpec&) const = default;
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline GridSpec make_grid(double half_width, int n) {
    if (!is_power_of_two(n) || n < 16)
        throw std::invalid_argument("make_grid: n must be a power of two >= 16");
    if (half_width < 1.0)
        throw std::invalid_argument("make_grid: half_width must be >= 1 (unit disk must fit)");
    GridSpec spec;
    spec.half_width = half_width;
    spec.n = n;
    spec.spacing = 2.0 * half_width / n;
    return spec;
}

/// Grid-sampled function, row-major. T is double (extended-real fields may
/// hold +inf) or cplx.
template <class T>
struct Field {
    GridSpec spec;
    std::vector<T> values;

    Field() = default;
    explicit Field(const GridSpec& s, T fill = T{}) : spec(s), values(s.size(), fill) {}

    T& at(int row, int col) { return values[spec.index(row, col)]; }
    const T& at(int row, int col) const { return values[spec.index(row, col)]; }

    template <class Fn>
    static Field sample(const GridSpec& s, Fn&& fn) {
        Field f(s);
        for (int i = 0; i < s.n; ++i)
            for (int j = 0; j < s.n; ++j)
                f.at(i, j) = fn(s.node(i, j));
        return f;
    }
};

using ComplexField = Field<cplx>;
using RealField = Field<double>;

/// Integration / masking region. Disk boundaries are closed; the annulus is
/// inner-open so that disk(c, r) and annulus(c, r, R) partition disk(c, R)
/// without double counting.
struct Region {
    enum class Kind { disk, annulus, whole_grid };
    Kind kind = Kind::whole_grid;
    cplx center;
    double r0 = 0.0;
    double r1 = 0.0;

    static Region disk(cplx center, double radius) {
        if (radius <= 0.0) throw std::invalid_argument("Region::disk: radius must be positive");
        return {Kind::disk, center, 0.0, radius};
    }
    static Region annulus(cplx center, double inner, double outer) {
        if (!(0.0 <= inner && inner < outer))
            throw std::invalid_argument("Region::annulus: need 0 <= inner < outer");
        return {Kind::annulus, center, inner, outer};
    }
    static Region whole() { return {}; }

    bool contains(cplx z) const {
        switch (kind) {
            case Kind::disk: return std::abs(z - center) <= r1;
            case Kind::annulus: {
                double d = std::abs(z - center);
                return d > r0 && d <= r1;
            }
            default: return true;
        }
    }

    /// Outer reach along each axis, used to validate region-in-grid.
    double outer_radius() const { return kind == Kind::whole_grid ? 0.0 : r1; }

    void require_inside(const GridSpec& spec) const {
        if (kind == Kind::whole_grid) return;
        const double L = spec.half_width;
        if (std::abs(center.real()) + r1 > L + 1e-12 ||
            std::abs(center.imag()) + r1 > L + 1e-12)
            throw std::invalid_argument("region escapes the grid square");
    }
};

namespace detail {

inline std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline double parse_real(const std::string& s) {
    if (s == "inf") return inf;
    if (s == "-inf") return -inf;
    return std::stod(s);
}

} // namespace detail

/// CSV dump, one line per node in row-major order, header
/// `re,im,val_re,val_im` (complex) or `re,im,val` (real); infinities are
/// serialized as the literal `inf`.
inline void dump_csv(const RealField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_csv: cannot open " + path);
    out << "re,im,val\n";
    for (int i = 0; i < f.spec.n; ++i)
        for (int j = 0; j < f.spec.n; ++j) {
            cplx z = f.spec.node(i, j);
            out << detail::format_real(z.real()) << ',' << detail::format_real(z.imag())
                << ',' << detail::format_real(f.at(i, j)) << '\n';
        }
}

inline void dump_csv(const ComplexField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_csv: cannot open " + path);
    out << "re,im,val_re,val_im\n";
    for (int i = 0; i < f.spec.n; ++i)
        for (int j = 0; j < f.spec.n; ++j) {
            cplx z = f.spec.node(i, j);
            cplx v = f.at(i, j);
            out << detail::format_real(z.real()) << ',' << detail::format_real(z.imag())
                << ',' << detail::format_real(v.real()) << ',' << detail::format_real(v.imag())
                << '\n';
        }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

} // namespace detail

/// Reads a field dumped by dump_csv. The grid geometry is reconstructed from
/// the node count and the first two coordinates.
inline ComplexField load_complex_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_complex_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("re,im,val_re,val_im", 0) != 0)
        throw std::runtime_error("load_complex_csv: bad header in " + path);
    std::vector<double> xs, ys;
    std::vector<cplx> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tok = detail::split_csv_line(line);
        if (tok.size() != 4) throw std::runtime_error("load_complex_csv: bad row in " + path);
        xs.push_back(detail::parse_real(tok[0]));
        ys.push_back(detail::parse_real(tok[1]));
        vals.push_back({detail::parse_real(tok[2]), detail::parse_real(tok[3])});
    }
    const auto count = vals.size();
    int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
    if (static_cast<std::size_t>(n) * n != count || !is_power_of_two(n))
        throw std::runtime_error("load_complex_csv: node count is not a square power of two");
    GridSpec spec = make_grid(-xs.front(), n);
    ComplexField f(spec);
    f.values = std::move(vals);
    return f;
}

} // namespace bdeg
