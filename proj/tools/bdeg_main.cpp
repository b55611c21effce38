// bdeg: batch driver for the degenerate-Beltrami toolkit.
//
// Subcommands:
//   solve    single non-degenerate solve, map dumps + residual manifest
//   sweep    truncation sweep with majorant/energy/convergence diagnostics
//   check    regularity battery for a majorant (L1, divergence, FMO, ...)
//   example  closed-form fields + numeric-vs-analytic cross-validation
//
// All inputs come from a JSON config (see README for the schema); a few
// common fields can be overridden from the command line. Reports are
// deterministic given (config, seed); timings live in the manifest only.

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "bdeg/bdeg.hpp"

namespace {

using namespace bdeg;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    int grid_n = 0;
    double alpha = 0.0;
    std::string k_list;
};

RunConfig load_with_overrides(const CliOverrides& cli) {
    RunConfig cfg = load_config(cli.config_path);
    if (!cli.out_dir.empty()) cfg.output_dir = cli.out_dir;
    if (cli.grid_n > 0) cfg.grid_n = cli.grid_n;
    if (cli.alpha > 0.0) {
        cfg.alpha = cli.alpha;
        if (cfg.coefficient.kind == "example") cfg.coefficient.alpha = cli.alpha;
    }
    if (!cli.k_list.empty()) {
        cfg.k_list.clear();
        std::stringstream ss(cli.k_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.k_list.push_back(std::stod(tok));
    }
    return cfg;
}

json manifest_base(const RunConfig& cfg) {
    json m;
    m["version"] = version;
    m["config"] = cfg.to_json();
    m["timings"] = json::object();
    return m;
}

int cmd_solve(const CliOverrides& cli) {
    RunConfig cfg = load_with_overrides(cli);
    OutputLock lock(cfg.output_dir);
    json manifest = manifest_base(cfg);
    const auto t0 = Clock::now();

    BeltramiCoefficient mu = build_coefficient(cfg.coefficient);
    if (mu.degenerate()) {
        std::cerr << "solve: coefficient is degenerate (" << mu.description
                  << "); pass a truncated one (e.g. example with k)\n";
        return 2;
    }
    GridSpec spec = cfg.grid();
    QCMap map = disk_normalized_solution(mu, spec, cfg.solve_options());
    invert_map(map);
    const std::filesystem::path dir(cfg.output_dir);
    dump_csv(map.forward, (dir / "forward.csv").string());
    if (map.inverse) dump_csv(*map.inverse, (dir / "inverse.csv").string());

    manifest["solve"] = {{"residual", map.provenance.residual_l2},
                         {"iterations", map.provenance.iterations},
                         {"converged", map.provenance.converged},
                         {"normalization_ok", map.normalization_ok},
                         {"f0_abs", std::abs(map.normalization.f0)},
                         {"f1_err", std::abs(map.normalization.f1 - cplx{1.0, 0.0})},
                         {"boundary_defect", map.boundary_defect},
                         {"inverse_reliable", map.inverse_stats->reliable},
                         {"composition_sup", map.inverse_stats->composition_sup}};
    manifest["timings"]["solve_s"] = seconds_since(t0);
    write_json(manifest, dir / "manifest.json");
    const bool ok = map.provenance.converged && map.normalization_ok;
    std::cout << (ok ? "solve: ok" : "solve: FAILED") << " residual="
              << map.provenance.residual_l2 << "\n";
    return ok ? 0 : 1;
}

int cmd_sweep(const CliOverrides& cli) {
    RunConfig cfg = load_with_overrides(cli);
    OutputLock lock(cfg.output_dir);
    json manifest = manifest_base(cfg);
    const auto t0 = Clock::now();

    SweepConfig sc;
    sc.mu = build_coefficient(cfg.coefficient);
    sc.k_list = cfg.k_list;
    sc.spec = cfg.grid();
    sc.solve = cfg.solve_options();
    if (cfg.q)
        sc.majorant = build_majorant(*cfg.q);
    else if (cfg.coefficient.kind == "example") {
        MajorantDescriptor d;
        d.kind = "example";
        d.alpha = cfg.coefficient.alpha;
        sc.majorant = build_majorant(d);
    }
    SweepResult sweep = run_sweep(sc);

    const std::filesystem::path dir(cfg.output_dir);
    write_json(sweep_report_json(sweep), dir / "sweep_report.json");
    if (cfg.dump_fields) {
        for (const PerTruncation& e : sweep.per_k) {
            std::ostringstream name;
            name << "map_k" << e.k;
            dump_csv(e.map.forward, (dir / (name.str() + "_forward.csv")).string());
            if (e.map.inverse)
                dump_csv(*e.map.inverse, (dir / (name.str() + "_inverse.csv")).string());
            dump_csv(e.K_inv, (dir / (name.str() + "_kinv.csv")).string());
        }
    }
    manifest["timings"]["sweep_s"] = seconds_since(t0);
    write_json(manifest, dir / "manifest.json");

    bool ok = sweep.all_converged;
    for (const PerTruncation& e : sweep.per_k) ok = ok && e.majorant.pass;
    std::cout << (ok ? "sweep: ok" : "sweep: FAILED") << " levels=" << sweep.per_k.size()
              << " q_source=" << sweep.q_source << "\n";
    return ok ? 0 : 1;
}

int cmd_check(const CliOverrides& cli) {
    RunConfig cfg = load_with_overrides(cli);
    OutputLock lock(cfg.output_dir);
    json manifest = manifest_base(cfg);
    const auto t0 = Clock::now();

    MajorantDescriptor qd;
    if (cfg.q)
        qd = *cfg.q;
    else {
        qd.kind = "example";
        qd.alpha = cfg.alpha;
    }
    MajorantQ q = build_majorant(qd);
    GridSpec spec = cfg.grid();

    json report;
    bool ok = true;
    auto requested = [&](const std::string& name) {
        return std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end();
    };

    if (requested("l1")) {
        L1Report r = l1_norm(q, spec);
        report["l1_norm"] = r.integrable ? json(r.value) : json("inf");
        report["l1_infinite_nodes"] = r.infinite_nodes;
        ok = ok && r.integrable;
    }
    if (requested("divergence")) {
        const cplx w0{};
        const double delta = cfg.delta.value_or(std::min(0.5, (1.0 - std::abs(w0)) / 2.0));
        DivergenceReport r = divergence_integral_check(q, w0, delta);
        report["divergence"] = json::array({divergence_report_json(r)});
        ok = ok && r.verdict != DivergenceReport::Verdict::inconclusive;
    }
    if (requested("fmo")) {
        FmoReport r = fmo_estimate([&q](cplx w) { return q(w); }, cplx{}, cfg.fmo_epsilons);
        report["fmo"] = json::array({fmo_report_json(r)});
        ok = ok && r.verdict != FmoReport::Verdict::inconclusive;
    }
    if (requested("continuity")) {
        if (cfg.coefficient.kind == "example") {
            example::Params pr;
            pr.alpha = cfg.coefficient.alpha;
            const double ql1 = example::majorant_l1(pr).l1;
            ContinuityReport r = continuity_estimate(
                [&pr](cplx z) { return example::solution_f(pr, z); }, cfg.continuity.z0,
                cfg.continuity.r0, ql1, cfg.continuity.samples, cfg.seed);
            report["continuity"] = {{"z0", {r.z0.real(), r.z0.imag()}},
                                    {"r0", r.r0},
                                    {"empirical_C", r.empirical_C}};
        } else {
            report["continuity"] = "skipped: closed-form map only available for the example coefficient";
        }
    }
    if (requested("ring_modulus")) {
        if (cfg.coefficient.kind == "example") {
            example::Params pr;
            pr.alpha = cfg.coefficient.alpha;
            pr.k = cfg.coefficient.k.value_or(cfg.k_list.front());
            pr.validate_truncated();
            // image family of the inverse map: its radius profile
            auto sigma_g = [&pr](double t) { return std::abs(example::inverse_g(pr, cplx{t, 0.0})); };
            RingModulusReport r =
                ring_modulus_check(sigma_g, q, cfg.ring.r, cfg.ring.R, 1e-6);
            report["ring_modulus"] =
                json::array({{{"r", r.r}, {"R", r.R}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"pass", r.pass}}});
            ok = ok && r.pass;
        } else {
            report["ring_modulus"] = "skipped: needs the example coefficient or a radial profile";
        }
    }

    const std::filesystem::path dir(cfg.output_dir);
    write_json(report, dir / "conditions_report.json");
    manifest["timings"]["check_s"] = seconds_since(t0);
    write_json(manifest, dir / "manifest.json");
    std::cout << (ok ? "check: ok" : "check: FAILED") << "\n";
    return ok ? 0 : 1;
}

int cmd_example(const CliOverrides& cli) {
    RunConfig cfg = load_with_overrides(cli);
    OutputLock lock(cfg.output_dir);
    json manifest = manifest_base(cfg);
    const auto t0 = Clock::now();

    example::Params pr;
    pr.alpha = cfg.alpha;
    pr.p = cfg.p;
    pr.validate();
    GridSpec spec = cfg.grid();
    const std::filesystem::path dir(cfg.output_dir);

    if (cfg.dump_fields) {
        dump_csv(ComplexField::sample(spec, [&](cplx z) { return example::mu(pr, z); }),
                 (dir / "mu.csv").string());
        dump_csv(ComplexField::sample(spec, [&](cplx z) { return example::solution_f(pr, z); }),
                 (dir / "f.csv").string());
        RealField K(spec);
        for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.n; ++j) K.at(i, j) = example::dilatation_K(pr, spec.node(i, j));
        dump_csv(K, (dir / "K.csv").string());
    }

    json table = json::array();
    bool ok = true;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (const double k : cfg.k_list) {
        example::Params pk = pr;
        pk.k = k;
        if (pk.k * pk.alpha <= 1.0) continue;
        BeltramiCoefficient mu_k = truncate(example::coefficient(pr), k);
        QCMap numeric = disk_normalized_solution(mu_k, spec, cfg.solve_options());
        double sup_err = 0.0;
        for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.n; ++j) {
                const cplx z = spec.node(i, j);
                if (std::abs(z) > 1.0) continue;
                sup_err = std::max(sup_err,
                                   std::abs(numeric.forward.at(i, j) - example::truncated_f(pk, z)));
            }
        double comp_err = 0.0;
        for (int t = 0; t < 100; ++t) {
            const cplx z = std::polar(uni(rng), 2.0 * std::numbers::pi * uni(rng));
            comp_err = std::max(comp_err,
                                std::abs(example::inverse_g(pk, example::truncated_f(pk, z)) - z));
        }
        json row;
        row["k"] = k;
        row["sup_map_error"] = sup_err;
        row["composition_error"] = comp_err;
        row["residual"] = numeric.provenance.residual_l2;
        row["f0"] = std::abs(example::truncated_f(pk, cplx{}));
        row["f1_err"] = std::abs(example::truncated_f(pk, cplx{1.0, 0.0}) - cplx{1.0, 0.0});
        table.push_back(std::move(row));
        ok = ok && numeric.provenance.converged && sup_err <= 5e-2 && comp_err <= 1e-12;
        if (cfg.dump_fields) {
            std::ostringstream name;
            name << "analytic_fk_k" << k << ".csv";
            dump_csv(ComplexField::sample(spec, [&](cplx z) { return example::truncated_f(pk, z); }),
                     (dir / name.str()).string());
        }
    }
    json report;
    report["alpha"] = pr.alpha;
    report["p"] = pr.p;
    report["q_l1_closed_form"] = example::majorant_l1(pr).l1;
    report["p_integrable"] = example::majorant_l1(pr).p_integrable;
    report["cross_validation"] = std::move(table);
    write_json(report, dir / "example_report.json");
    manifest["timings"]["example_s"] = seconds_since(t0);
    write_json(manifest, dir / "manifest.json");
    std::cout << (ok ? "example: ok" : "example: FAILED") << "\n";
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bdeg: solvers and checkers for Beltrami equations with degenerating ellipticity"};
    app.require_subcommand(1);

    CliOverrides cli;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", cli.config_path, "JSON config path")->required();
        sub->add_option("--out", cli.out_dir, "output directory override");
        sub->add_option("--grid-n", cli.grid_n, "grid resolution override");
        sub->add_option("--alpha", cli.alpha, "example-family alpha override");
        sub->add_option("--k-list", cli.k_list, "comma-separated truncation levels");
    };
    CLI::App* solve = app.add_subcommand("solve", "single non-degenerate solve");
    CLI::App* sweep = app.add_subcommand("sweep", "truncation sweep with diagnostics");
    CLI::App* check = app.add_subcommand("check", "majorant regularity battery");
    CLI::App* example_cmd = app.add_subcommand("example", "closed-form cross-validation");
    for (CLI::App* sub : {solve, sweep, check, example_cmd}) add_common(sub);

    CLI11_PARSE(app, argc, argv);
    try {
        if (solve->parsed()) return cmd_solve(cli);
        if (sweep->parsed()) return cmd_sweep(cli);
        if (check->parsed()) return cmd_check(cli);
        if (example_cmd->parsed()) return cmd_example(cli);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
