#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "bdeg/beltrami.hpp"
#include "bdeg/conditions.hpp"
#include "bdeg/example.hpp"
#include "bdeg/sweep.hpp"
#include "bdeg/version.hpp"

namespace bdeg {

using json = nlohmann::ordered_json;

/// Serializable coefficient descriptor:
///   {"kind":"example","alpha":A[,"k":K]}    closed-form family, optionally truncated
///   {"kind":"radial","nu_const":C}          mu = C e^{2 i theta} on the disk
///   {"kind":"grid","path":"mu.csv"}         bilinear interpolation of a dumped field
struct CoefficientDescriptor {
    std::string kind = "example";
    double alpha = 1.0;
    std::optional<double> k;
    double nu_const = 0.0;
    std::string path;

    json to_json() const {
        json j;
        j["kind"] = kind;
        if (kind == "example") {
            j["alpha"] = alpha;
            if (k) j["k"] = *k;
        } else if (kind == "radial") {
            j["nu_const"] = nu_const;
        } else if (kind == "grid") {
            j["path"] = path;
        }
        return j;
    }
};

namespace detail {

inline void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.contains(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

} // namespace detail

inline CoefficientDescriptor parse_coefficient(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("config: coefficient must be an object with a 'kind'");
    CoefficientDescriptor d;
    d.kind = j.at("kind").get<std::string>();
    if (d.kind == "example") {
        detail::reject_unknown_keys(j, {"kind", "alpha", "k"}, "coefficient");
        d.alpha = j.value("alpha", 1.0);
        if (j.contains("k")) d.k = j.at("k").get<double>();
    } else if (d.kind == "radial") {
        detail::reject_unknown_keys(j, {"kind", "nu_const"}, "coefficient");
        d.nu_const = j.at("nu_const").get<double>();
        if (std::abs(d.nu_const) >= 1.0)
            throw std::invalid_argument("config: radial nu_const must satisfy |c| < 1");
    } else if (d.kind == "grid") {
        detail::reject_unknown_keys(j, {"kind", "path"}, "coefficient");
        d.path = j.at("path").get<std::string>();
    } else {
        throw std::invalid_argument("config: coefficient kind must be example|radial|grid");
    }
    return d;
}

inline BeltramiCoefficient build_coefficient(const CoefficientDescriptor& d) {
    if (d.kind == "example") {
        example::Params pr;
        pr.alpha = d.alpha;
        BeltramiCoefficient mu = example::coefficient(pr);
        if (d.k) return truncate(mu, *d.k);
        return mu;
    }
    if (d.kind == "radial") {
        const double c = d.nu_const;
        return radial_coefficient([c](double) { return c; }, std::abs(c),
                                  "radial nu=" + std::to_string(c));
    }
    // grid: sampled field, bilinear between nodes, zero outside the disk
    auto field = std::make_shared<ComplexField>(load_complex_csv(d.path));
    double sup = 0.0;
    for (const cplx& v : field->values) sup = std::max(sup, std::abs(v));
    BeltramiCoefficient mu;
    mu.eval = [field](cplx z) -> cplx {
        if (std::abs(z) > 1.0 || !interpolable(field->spec, z)) return {};
        return interpolate(*field, z);
    };
    mu.ess_sup_hint = sup < 1.0 ? sup : 1.0;
    mu.description = "grid coefficient from " + d.path;
    return mu;
}

/// Majorant descriptor: {"kind":"example","alpha":A} or {"kind":"constant","value":C}.
struct MajorantDescriptor {
    std::string kind = "example";
    double alpha = 1.0;
    double value = 1.0;

    json to_json() const {
        json j;
        j["kind"] = kind;
        if (kind == "example")
            j["alpha"] = alpha;
        else
            j["value"] = value;
        return j;
    }
};

inline MajorantDescriptor parse_majorant(const json& j) {
    MajorantDescriptor d;
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("config: q must be an object with a 'kind'");
    d.kind = j.at("kind").get<std::string>();
    if (d.kind == "example") {
        detail::reject_unknown_keys(j, {"kind", "alpha"}, "q");
        d.alpha = j.value("alpha", 1.0);
    } else if (d.kind == "constant") {
        detail::reject_unknown_keys(j, {"kind", "value"}, "q");
        d.value = j.at("value").get<double>();
    } else {
        throw std::invalid_argument("config: q kind must be example|constant");
    }
    return d;
}

inline MajorantQ build_majorant(const MajorantDescriptor& d) {
    if (d.kind == "example") {
        example::Params pr;
        pr.alpha = d.alpha;
        pr.validate();
        return {[pr](cplx w) { return example::majorant(pr, w); },
                "example majorant alpha=" + std::to_string(d.alpha)};
    }
    return constant_majorant(d.value);
}

/// Batch-run configuration. Schema-validated: unknown keys are rejected,
/// defaults are what you see in the member initializers.
struct RunConfig {
    CoefficientDescriptor coefficient;
    double alpha = 1.0;
    double p = 1.0;
    std::vector<double> k_list = {2.0, 4.0, 8.0, 16.0};
    int grid_n = 256;
    double half_width = 2.0;
    double tol = 1e-6;
    int max_iter = 200;
    std::string extension = "reflect";
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    std::vector<std::string> checks = {"l1", "divergence", "fmo"};
    bool dump_fields = false;
    std::optional<MajorantDescriptor> q;
    std::optional<double> delta;
    std::vector<double> fmo_epsilons = {0.1, 0.05, 0.025, 0.0125};
    struct Continuity {
        cplx z0{0.75, 0.0};
        double r0 = 0.1;
        int samples = 1000;
    } continuity;
    struct Ring {
        double r = 0.5;
        double R = 0.9;
    } ring;

    GridSpec grid() const { return make_grid(half_width, grid_n); }

    SolveOptions solve_options() const {
        SolveOptions opt;
        opt.tol = tol;
        opt.max_iter = max_iter;
        if (extension == "reflect")
            opt.extension = SolveOptions::Extension::reflect;
        else if (extension == "zero")
            opt.extension = SolveOptions::Extension::zero;
        else
            throw std::invalid_argument("config: extension must be reflect|zero");
        return opt;
    }

    json to_json() const {
        json j;
        j["coefficient"] = coefficient.to_json();
        j["alpha"] = alpha;
        j["p"] = p;
        j["k_list"] = k_list;
        j["grid_n"] = grid_n;
        j["half_width"] = half_width;
        j["tol"] = tol;
        j["max_iter"] = max_iter;
        j["extension"] = extension;
        j["seed"] = seed;
        j["output_dir"] = output_dir;
        j["checks"] = checks;
        j["dump_fields"] = dump_fields;
        if (q) j["q"] = q->to_json();
        if (delta) j["delta"] = *delta;
        j["fmo_epsilons"] = fmo_epsilons;
        j["continuity"] = {{"z0_re", continuity.z0.real()},
                           {"z0_im", continuity.z0.imag()},
                           {"r0", continuity.r0},
                           {"samples", continuity.samples}};
        j["ring"] = {{"r", ring.r}, {"R", ring.R}};
        return j;
    }
};

inline RunConfig parse_config(const json& j) {
    detail::reject_unknown_keys(
        j,
        {"coefficient", "alpha", "p", "k_list", "grid_n", "half_width", "tol", "max_iter",
         "extension", "seed", "output_dir", "checks", "dump_fields", "q", "delta",
         "fmo_epsilons", "continuity", "ring"},
        "top level");
    RunConfig c;
    if (j.contains("coefficient")) c.coefficient = parse_coefficient(j.at("coefficient"));
    c.alpha = j.value("alpha", c.alpha);
    c.p = j.value("p", c.p);
    if (j.contains("k_list")) c.k_list = j.at("k_list").get<std::vector<double>>();
    c.grid_n = j.value("grid_n", c.grid_n);
    c.half_width = j.value("half_width", c.half_width);
    c.tol = j.value("tol", c.tol);
    c.max_iter = j.value("max_iter", c.max_iter);
    c.extension = j.value("extension", c.extension);
    c.seed = j.value("seed", c.seed);
    c.output_dir = j.value("output_dir", c.output_dir);
    if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
    c.dump_fields = j.value("dump_fields", c.dump_fields);
    if (j.contains("q")) c.q = parse_majorant(j.at("q"));
    if (j.contains("delta")) c.delta = j.at("delta").get<double>();
    if (j.contains("fmo_epsilons"))
        c.fmo_epsilons = j.at("fmo_epsilons").get<std::vector<double>>();
    if (j.contains("continuity")) {
        const json& cj = j.at("continuity");
        detail::reject_unknown_keys(cj, {"z0_re", "z0_im", "r0", "samples"}, "continuity");
        c.continuity.z0 = {cj.value("z0_re", 0.75), cj.value("z0_im", 0.0)};
        c.continuity.r0 = cj.value("r0", 0.1);
        c.continuity.samples = cj.value("samples", 1000);
    }
    if (j.contains("ring")) {
        const json& rj = j.at("ring");
        detail::reject_unknown_keys(rj, {"r", "R"}, "ring");
        c.ring.r = rj.value("r", 0.5);
        c.ring.R = rj.value("R", 0.9);
    }
    const std::set<std::string> known_checks = {"l1",        "divergence", "fmo",
                                                "continuity", "ring_modulus"};
    for (const std::string& name : c.checks)
        if (!known_checks.contains(name))
            throw std::invalid_argument("config: unknown check '" + name + "'");
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    json j = json::parse(in);
    return parse_config(j);
}

// ---- report serialization ------------------------------------------------

inline json sweep_report_json(const SweepResult& sweep) {
    json per_k = json::array();
    for (std::size_t i = 0; i < sweep.per_k.size(); ++i) {
        const PerTruncation& e = sweep.per_k[i];
        json rec;
        rec["k"] = e.k;
        rec["residual"] = e.residual;
        rec["energy_lhs"] = e.energy_lhs;
        rec["energy_rhs"] = e.energy_rhs;
        rec["majorant_pass"] = e.majorant.pass;
        rec["worst_violation"] = e.majorant.worst_violation;
        if (i == 0)
            rec["cauchy_sup"] = nullptr;  // increment from the previous level
        else
            rec["cauchy_sup"] = sweep.diagnostics.cauchy_sup[i - 1];
        rec["inner_sup"] = e.inner_sup;
        rec["converged"] = e.map.provenance.converged;
        rec["iterations"] = e.map.provenance.iterations;
        rec["boundary_defect"] = e.map.boundary_defect;
        per_k.push_back(std::move(rec));
    }
    json j;
    j["q_source"] = sweep.q_source;
    j["per_k"] = std::move(per_k);
    j["I1"] = sweep.diagnostics.I1;
    j["I2"] = sweep.diagnostics.I2;
    j["zeta_mean"] = sweep.diagnostics.zeta_mean;
    j["slope_I1"] = sweep.diagnostics.slope_I1;
    j["slope_I2"] = sweep.diagnostics.slope_I2;
    return j;
}

inline json fmo_report_json(const FmoReport& r) {
    json j;
    j["point"] = {r.point.real(), r.point.imag()};
    j["epsilons"] = r.epsilons;
    j["mean_osc"] = r.mean_osc;
    j["means"] = r.means;
    j["slope"] = r.slope;
    switch (r.verdict) {
        case FmoReport::Verdict::fmo_consistent: j["verdict"] = "fmo_consistent"; break;
        case FmoReport::Verdict::diverging: j["verdict"] = "diverging"; break;
        default: j["verdict"] = "inconclusive";
    }
    return j;
}

inline json divergence_report_json(const DivergenceReport& r) {
    json j;
    j["point"] = {r.point.real(), r.point.imag()};
    j["delta"] = r.delta;
    j["cutoffs"] = r.cutoffs;
    j["partial_integrals"] = r.partial_integrals;
    switch (r.verdict) {
        case DivergenceReport::Verdict::divergent: j["verdict"] = "divergent"; break;
        case DivergenceReport::Verdict::convergent:
            j["verdict"] = "convergent";
            j["limit"] = r.limit;
            break;
        default: j["verdict"] = "inconclusive";
    }
    return j;
}

inline void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

/// Exclusive output-directory lock; concurrent writers are a config error.
struct OutputLock {
    std::filesystem::path lock_path;
    explicit OutputLock(const std::filesystem::path& dir) : lock_path(dir / ".bdeg.lock") {
        std::filesystem::create_directories(dir);
        if (std::filesystem::exists(lock_path))
            throw std::runtime_error("output_dir is locked by another run: " + lock_path.string());
        std::ofstream(lock_path) << "locked\n";
    }
    ~OutputLock() {
        std::error_code ec;
        std::filesystem::remove(lock_path, ec);
    }
};

} // namespace bdeg
