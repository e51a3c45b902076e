#include "cli_lib.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "bandsign/extremal.hpp"
#include "bandsign/kernelbuild.hpp"
#include "bandsign/lifts.hpp"

namespace bandsign::cli {

namespace {

using nlohmann::ordered_json;

struct RunConfig {
    std::string command;
    std::string measure_spec;
    double delta = 0.0;
    double delta_from_support = 0.0;
    double r = 0.0;
    int max_degree = 40;
    int N = 40;
    double window_hi = 20.0;
    double tol = 1e-8;
    std::string output_path;
    std::string format = "json";
    std::uint64_t seed = 1;
    int trials = 5;
    bool flip_hb = false;  // test hook: deliberately break the inequality
};

double resolve_delta(const RunConfig& cfg) {
    if (cfg.delta_from_support > 0.0) return 2.0 * pi * cfg.delta_from_support;
    return cfg.delta;
}

bool closed_form_measure(const Measure& m) {
    return m.label == "lebesgue" || m.kind == Measure::Kind::Power;
}

HermiteBiehler closed_form_structure(const Measure& m, double delta) {
    if (m.label == "lebesgue") return paley_wiener_structure(delta);
    return homogeneous_structure(*m.nu, delta);
}

HermiteBiehler flipped(const HermiteBiehler& hb) {
    HermiteBiehler out = hb;
    out.B = [B = hb.B](cplx z) { return -B(z); };
    out.B_real = [B = hb.B_real](double x) { return -B(x); };
    out.B_prime = [Bp = hb.B_prime](cplx z) { return -Bp(z); };
    out.B_prime_real = [Bp = hb.B_prime_real](double x) { return -Bp(x); };
    out.label = hb.label + " (flipped)";
    return out;
}

int cmd_constant(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Measure mu = parse_measure(cfg.measure_spec);
    const double delta = resolve_delta(cfg);
    if (!(delta > 0.0)) throw DomainError("constant: needs --delta or --delta-from-support");
    ordered_json j;
    j["schema"] = 1;
    j["command"] = "constant";
    j["measure"] = ordered_json::parse(measure_to_json(mu));
    j["delta"] = delta;
    if (closed_form_measure(mu)) {
        const HermiteBiehler hb = closed_form_structure(mu, delta);
        j["xi1"] = sharp_constant(hb);
        j["method"] = "closed-form";
        j["diagnostics"] = {{"structure", hb.label}};
    } else if (mu.sinc_coeff.has_value()) {
        const PipelineResult res = kernel_pipeline_xi1(mu, 0.5 * delta, cfg.N, 1e-10);
        j["xi1"] = res.xi1;
        j["method"] = "kernel-pipeline";
        ordered_json table = ordered_json::array();
        for (auto [n, v] : res.table) table.push_back({{"N", n}, {"xi1_raw", v}});
        j["diagnostics"] = {{"convergence", table},
                           {"condition_number", res.diagnostics.condition_number},
                           {"reproducing_residual", res.diagnostics.reproducing_residual}};
    } else {
        throw DomainError("constant: measure has no closed form and no kernel route");
    }
    out << j.dump(2) << "\n";
    err << "constant: done\n";
    return 0;
}

int cmd_extremizer(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Measure mu = parse_measure(cfg.measure_spec);
    const double delta = resolve_delta(cfg);
    if (!(delta > 0.0)) throw DomainError("extremizer: needs --delta or --delta-from-support");

    HermiteBiehler hb;
    std::string method;
    if (closed_form_measure(mu)) {
        hb = closed_form_structure(mu, delta);
        method = "closed-form";
    } else if (mu.sinc_coeff.has_value()) {
        hb = kernel_pipeline_xi1(mu, 0.5 * delta, cfg.N, 1e-10).hb;
        method = "kernel-pipeline";
    } else {
        throw DomainError("extremizer: unsupported measure");
    }
    const double xi1 = sharp_constant(hb);
    const real_fn F = extremizer(hb, xi1);
    const double tol = method == "closed-form" ? cfg.tol : std::max(cfg.tol, 1e-4);
    const Certificate cert = certify(F, mu, xi1, delta, tol);

    // Independent route: node sum over the alpha = 0 rule.
    const double X = cfg.window_hi > 0 ? std::max(256.0, cfg.window_hi) : 1024.0;
    const QuadratureRule rule = quadrature_rule(hb, 0.0, Interval(-X, X));
    const double node_sum = node_sum_extrapolated(rule, F);

    if (!cfg.output_path.empty()) {
        std::ofstream csv(cfg.output_path);
        csv << "x,F\n";
        const double hi = 4.0 * xi1;
        for (int k = 0; k <= 800; ++k) {
            const double x = -hi + 2.0 * hi * k / 800.0;
            csv << x << "," << F(x) << "\n";
        }
    }

    ordered_json j;
    j["schema"] = 1;
    j["command"] = "extremizer";
    j["measure"] = ordered_json::parse(measure_to_json(mu));
    j["delta"] = delta;
    j["xi1"] = xi1;
    j["method"] = method;
    j["certificate"] = ordered_json::parse(certificate_to_json(cert));
    j["quadrature_integral"] = node_sum;
    if (!cfg.output_path.empty()) j["samples_csv"] = cfg.output_path;
    out << j.dump(2) << "\n";
    err << "extremizer: certificate " << (cert.pass ? "pass" : "fail") << "\n";
    return cert.pass ? 0 : 6;
}

int cmd_counterexample(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Measure mu = parse_measure(cfg.measure_spec);
    if (mu.decay.kind == DecayClass::Kind::Polynomial)
        throw DomainError("counterexample: measure lacks an exponential moment tag");
    if (!(cfg.r > 0.0)) throw DomainError("counterexample: needs --r > 0");
    const CounterexampleResult res = counterexample(mu, cfg.r, cfg.max_degree);
    ordered_json j;
    j["schema"] = 1;
    j["command"] = "counterexample";
    j["measure"] = ordered_json::parse(measure_to_json(mu));
    j["result"] = ordered_json::parse(counterexample_to_json(res));
    out << j.dump(2) << "\n";
    err << "counterexample: degree " << res.degree << " objective " << res.objective << "\n";
    return 0;
}

int cmd_quadcheck(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Measure mu = parse_measure(cfg.measure_spec);
    const double delta = resolve_delta(cfg);
    if (!(delta > 0.0)) throw DomainError("quadcheck: needs --delta or --delta-from-support");
    if (!closed_form_measure(mu)) throw DomainError("quadcheck: needs a closed-form structure");
    HermiteBiehler hb = closed_form_structure(mu, delta);
    if (cfg.flip_hb) hb = flipped(hb);

    ordered_json checks = ordered_json::array();
    bool all_pass = true;
    auto record = [&](const std::string& name, bool pass, double value) {
        checks.push_back({{"check", name}, {"pass", pass}, {"value", value}});
        all_pass = all_pass && pass;
    };

    const HBReport hbrep = verify_hb(hb, 200, cfg.seed);
    record("HB inequality", hbrep.pass, hbrep.min_margin);

    if (hbrep.pass) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> uw(-5.0, 5.0), ua(-1.0, 1.0);
        const double X = 1024.0;
        const QuadratureRule rule = quadrature_rule(hb, 0.5 * pi, Interval(-X, X));

        double worst_gap = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            std::vector<double> wpts(5), amps(5);
            for (int k = 0; k < 5; ++k) {
                wpts[k] = uw(rng);
                amps[k] = ua(rng);
            }
            auto U = [&](double x) {
                double acc = 0.0;
                for (int k = 0; k < 5; ++k) acc += amps[k] * kernel(hb, wpts[k], x);
                return acc;
            };
            auto F = [&](double x) {
                const double u = U(x);
                return u * u;
            };
            const double nodes_val = node_sum_extrapolated(rule, F);
            auto invw = [&](double x) { return 1.0 / hb.abs2_E(x); };
            const double int_val =
                integrate_weighted(F, invw, DecayClass::polynomial(2.0), 1e-9).value;
            const double gap =
                std::abs(nodes_val - int_val) / std::max({std::abs(int_val), 1e-12});
            worst_gap = std::max(worst_gap, gap);
        }
        record("quadrature exactness", worst_gap < 1e-6, worst_gap);

        // Parseval on nodes for a fixed kernel combination.
        auto U0 = [&](double x) {
            return kernel(hb, 0.3, x) - 0.5 * kernel(hb, 1.1, x);
        };
        const double parseval_nodes =
            node_sum_extrapolated(rule, [&](double x) { const double u = U0(x); return u * u; });
        const double parseval_int =
            integrate_weighted([&](double x) { const double u = U0(x); return u * u; },
                               [&](double x) { return 1.0 / hb.abs2_E(x); },
                               DecayClass::polynomial(2.0), 1e-9)
                .value;
        const double pgap = std::abs(parseval_nodes - parseval_int) /
                            std::max(std::abs(parseval_int), 1e-12);
        record("parseval", pgap < 1e-6, pgap);

        // Interlacing of the alpha = 0 and alpha = pi/2 zero sets.
        const Interval win(-12.0, 12.0);
        const auto za = t_alpha_zeros(hb, 0.5 * pi, win);
        const auto zb = t_alpha_zeros(hb, 0.0, win);
        bool interlaced = true;
        std::vector<std::pair<double, int>> merged;
        for (double v : za) merged.emplace_back(v, 0);
        for (double v : zb) merged.emplace_back(v, 1);
        std::sort(merged.begin(), merged.end());
        for (std::size_t k = 1; k + 1 < merged.size(); ++k)
            if (merged[k].second == merged[k - 1].second) interlaced = false;
        record("interlacing", interlaced, static_cast<double>(merged.size()));

        double min_diag = std::numeric_limits<double>::infinity();
        for (double x = -10.0; x <= 10.0; x += 0.37) min_diag = std::min(min_diag, hb.kernel_diag(x));
        record("kernel diagonal positive", min_diag > 0.0, min_diag);
    } else {
        checks.push_back({{"check", "remaining checks"}, {"pass", false},
                          {"reason", "HB inequality violated"}});
        all_pass = false;
    }

    ordered_json j;
    j["schema"] = 1;
    j["command"] = "quadcheck";
    j["measure"] = ordered_json::parse(measure_to_json(mu));
    j["delta"] = delta;
    j["seed"] = cfg.seed;
    j["checks"] = checks;
    j["pass"] = all_pass;
    out << j.dump(2) << "\n";
    err << "quadcheck: " << (all_pass ? "all pass" : "failures present") << "\n";
    return all_pass ? 0 : 6;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    if (const char* env_tol = std::getenv("BANDSIGN_TOL")) cfg.tol = std::atof(env_tol);

    CLI::App app{"sign-uncertainty constants for band-limited functions"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* cmd, bool needs_delta) {
        cmd->add_option("--measure", cfg.measure_spec,
                        "lebesgue | power:<nu> | ks:<U|Sp|O|SOeven|SOodd> | expdecay:<eps>")
            ->required();
        if (needs_delta) {
            cmd->add_option("--delta", cfg.delta, "exponential type bound");
            cmd->add_option("--delta-from-support", cfg.delta_from_support,
                            "support radius Delta; sets delta = 2 pi Delta");
        }
        cmd->add_option("--tol", cfg.tol, "tolerance (default 1e-8 or BANDSIGN_TOL)");
        cmd->add_option("--seed", cfg.seed, "random seed");
        cmd->add_option("--output", cfg.output_path, "output file path");
        cmd->add_option("--format", cfg.format, "json|csv");
    };

    auto* c1 = app.add_subcommand("constant", "sharp constant for a measure");
    add_common(c1, true);
    c1->add_option("--N", cfg.N, "kernel-pipeline basis size");

    auto* c2 = app.add_subcommand("extremizer", "optimal function, samples and certificate");
    add_common(c2, true);
    c2->add_option("--N", cfg.N, "kernel-pipeline basis size");
    c2->add_option("--window", cfg.window_hi, "node window half-width for the cross check");

    auto* c3 = app.add_subcommand("counterexample", "constructive refutation for decaying measures");
    add_common(c3, false);
    c3->add_option("--r", cfg.r, "target last-sign-change radius")->required();
    c3->add_option("--max-degree", cfg.max_degree, "polynomial degree budget");

    auto* c4 = app.add_subcommand("quadcheck", "structure-function property checks");
    add_common(c4, true);
    c4->add_option("--trials", cfg.trials, "number of random exactness trials");
    c4->add_flag("--flip-hb", cfg.flip_hb, "test hook: flip the inequality and expect failure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "argument error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand("constant")) {
            cfg.command = "constant";
            return cmd_constant(cfg, out, err);
        }
        if (app.got_subcommand("extremizer")) {
            cfg.command = "extremizer";
            return cmd_extremizer(cfg, out, err);
        }
        if (app.got_subcommand("counterexample")) {
            cfg.command = "counterexample";
            return cmd_counterexample(cfg, out, err);
        }
        cfg.command = "quadcheck";
        return cmd_quadcheck(cfg, out, err);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConstructionFailed& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const BudgetExhausted& e) {
        err << "error: " << e.what() << "\n";
        return 5;
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace bandsign::cli
