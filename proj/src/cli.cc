#include "scrambled/cli.h"

#include <CLI11.hpp>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <locale>
#include <sstream>

#include "scrambled/detector.h"
#include "scrambled/errors.h"
#include "scrambled/io.h"
#include "scrambled/parallel.h"

namespace scrambled::cli {

namespace {

using nlohmann::json;

struct Config {
    std::string in;
    std::string out;
    double q = 2.0;
    double qtilde = 2.0;
    std::string entropy = "tsallis";
    std::string method = "all";
    int64_t samples = 1000;
    uint64_t seed = 0;
    bool scrambled = false;
    int resolution = 0;
    double tol_feas = 1e-7;
    double tol_infeas = 1e-6;
    double beta = 0.0;
    bool boundary = false;
    std::string q_text = "inf";
    int threads = 0;
};

class UsageError : public Error {
   public:
    using Error::Error;
};

std::string perm_text(const Permutation4 &p) {
    return std::to_string(p[0]) + std::to_string(p[1]) + std::to_string(p[2]) + std::to_string(p[3]);
}

void emit(const Config &cfg, std::ostream &out, const std::string &text) {
    if (cfg.out.empty()) {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    } else {
        io::write_file(cfg.out, text);
    }
}

EntropySpec spec_for(const Config &cfg, double parameter) {
    try {
        return EntropySpec::make(parse_entropy_kind(cfg.entropy), parameter);
    } catch (const Error &e) {
        throw UsageError(std::string("--q/--qtilde/--entropy: ") + e.what());
    }
}

FeasibilityOptions feasibility_for(const Config &cfg) {
    if (!(cfg.tol_feas > 0.0) || !(cfg.tol_infeas > cfg.tol_feas)) {
        throw UsageError("--tol-feas and --tol-infeas need 0 < tol-feas < tol-infeas");
    }
    FeasibilityOptions opt;
    opt.feasible_tol = cfg.tol_feas;
    opt.infeasible_tol = cfg.tol_infeas;
    opt.seed = cfg.seed ^ opt.seed;
    return opt;
}

void add_entropy_flags(CLI::App *cmd, Config &cfg) {
    cmd->add_option("--q", cfg.q, "Entropy parameter for ZZ");
    cmd->add_option("--qtilde", cfg.qtilde, "Entropy parameter for XX");
    cmd->add_option("--entropy", cfg.entropy, "Entropy kind")
        ->check(CLI::IsMember({"shannon", "tsallis", "renyi"}));
}

void add_tolerance_flags(CLI::App *cmd, Config &cfg) {
    cmd->add_option("--tol-feas", cfg.tol_feas, "Feasibility acceptance residual");
    cmd->add_option("--tol-infeas", cfg.tol_infeas, "Infeasibility declaration residual");
}

json report_json(const DetectionReport &r) {
    json j;
    j["overall"] = verdict_name(r.overall);
    for (auto [name, m] : {std::pair{"sdp", &r.sdp}, std::pair{"witness", &r.witness},
                           std::pair{"entropy", &r.entropy}}) {
        json mj{{"verdict", verdict_name(m->verdict)}};
        if (!m->error.empty()) mj["error"] = m->error;
        j["methods"][name] = mj;
    }
    if (r.sdp_detail) {
        const auto &perms = canonical_permutations();
        json list = json::array();
        for (size_t i = 0; i < r.sdp_detail->results.size(); ++i) {
            const auto &res = r.sdp_detail->results[i];
            json e{{"index", i}, {"xx", perm_text(perms[i].x)}, {"zz", perm_text(perms[i].z)}};
            if (res) {
                e["status"] = feasibility_status_name(res->status);
                e["residual"] = res->residual;
                e["iterations"] = res->iterations;
            } else {
                e["status"] = "not-run";
            }
            list.push_back(e);
        }
        j["sdp"]["permutations"] = list;
        if (r.sdp_detail->evidence_index) {
            int k = *r.sdp_detail->evidence_index;
            j["sdp"]["evidence_index"] = k;
            j["sdp"]["certificate"] = json::parse(io::format_state(*r.sdp_detail->results[k]->witness_state));
        }
    }
    if (r.witness_detail) {
        const auto &w = *r.witness_detail;
        j["witness"] = {{"alpha", w.params.alpha},
                        {"beta", w.params.beta},
                        {"gamma", w.params.gamma},
                        {"value", w.minimum.value},
                        {"pick_xx", w.minimum.picks[0]},
                        {"pick_zz", w.minimum.picks[2]}};
    }
    if (r.entropy_detail) {
        const auto &e = *r.entropy_detail;
        j["entropy"] = {{"s_xx", e.point.s_xx},
                        {"s_zz", e.point.s_zz},
                        {"swapped_s_xx", e.swapped_point.s_xx},
                        {"swapped_s_zz", e.swapped_point.s_zz}};
        if (e.detected) {
            j["entropy"]["separable_bound"] = e.separable_bound;
            j["entropy"]["swapped_separable_bound"] = e.swapped_separable_bound;
        }
    }
    return j;
}

std::string report_text(const DetectionReport &r) {
    std::ostringstream o;
    o.imbue(std::locale::classic());
    o << "method   verdict\n";
    o << "sdp      " << verdict_name(r.sdp.verdict) << "\n";
    o << "witness  " << verdict_name(r.witness.verdict) << "\n";
    o << "entropy  " << verdict_name(r.entropy.verdict) << "\n";
    o << "overall  " << verdict_name(r.overall) << "\n";
    for (auto [name, m] : {std::pair{"sdp", &r.sdp}, std::pair{"witness", &r.witness},
                           std::pair{"entropy", &r.entropy}}) {
        if (!m->error.empty()) o << name << " error: " << m->error << "\n";
    }
    if (r.sdp_detail) {
        const auto &perms = canonical_permutations();
        o << "\nsdp assignments (index, xx, zz, status, residual)\n";
        for (size_t i = 0; i < r.sdp_detail->results.size(); ++i) {
            const auto &res = r.sdp_detail->results[i];
            o << "  " << i << "  " << perm_text(perms[i].x) << "  " << perm_text(perms[i].z) << "  ";
            if (res) {
                o << feasibility_status_name(res->status) << "  " << format_number(res->residual) << "\n";
            } else {
                o << "not-run\n";
            }
        }
        if (r.sdp_detail->evidence_index) {
            int k = *r.sdp_detail->evidence_index;
            o << "certificate for assignment " << k << ":\n"
              << io::format_state(*r.sdp_detail->results[k]->witness_state) << "\n";
        }
    }
    if (r.witness_detail) {
        const auto &w = *r.witness_detail;
        o << "\nwitness alpha=" << format_number(w.params.alpha) << " beta=" << format_number(w.params.beta)
          << " gamma=" << format_number(w.params.gamma) << " value=" << format_number(w.minimum.value)
          << " (xx entry " << w.minimum.picks[0] << ", zz entry " << w.minimum.picks[2] << ")\n";
    }
    if (r.entropy_detail) {
        const auto &e = *r.entropy_detail;
        o << "\nentropy s_xx=" << format_number(e.point.s_xx) << " s_zz=" << format_number(e.point.s_zz);
        if (e.detected) o << " separable_bound=" << format_number(e.separable_bound);
        o << "\n";
    }
    return o.str();
}

int cmd_detect(const Config &cfg, std::ostream &out) {
    DetectOptions opt;
    opt.methods = MethodSet::parse(cfg.method);
    opt.spec_x = spec_for(cfg, cfg.qtilde);
    opt.spec_z = spec_for(cfg, cfg.q);
    opt.feasibility = feasibility_for(cfg);

    std::string text = io::read_file(cfg.in);
    ScrambledData d = io::classify_input(text) == io::InputKind::State
                          ? scrambled_data(io::parse_state(text))
                          : io::parse_probabilities(text).data();
    DetectionReport report = detect(d, opt);
    out << report_text(report);
    if (!cfg.out.empty()) io::write_file(cfg.out, report_json(report).dump(2));
    return kExitOk;
}

int cmd_measure(const Config &cfg, std::ostream &out) {
    DensityMatrix rho = io::parse_state(io::read_file(cfg.in));
    io::ProbabilityFile file;
    for (Setting s : kAllSettings) file.distributions.push_back(probabilities(rho, s));
    file.scrambled = cfg.scrambled;
    if (cfg.scrambled) {
        for (auto &d : file.distributions) {
            auto p = d.p();
            std::sort(p.begin(), p.end(), std::greater<>());
            d = OutcomeDistribution(d.setting(), p);
        }
    }
    emit(cfg, out, io::format_probabilities(file));
    return kExitOk;
}

int cmd_scan(const Config &cfg, std::ostream &out) {
    if (cfg.samples < 1) throw UsageError("--samples must be at least 1");
    ScanOptions opt;
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    opt.scrambled = cfg.scrambled;
    opt.spec_x = spec_for(cfg, cfg.qtilde);
    opt.spec_z = spec_for(cfg, cfg.q);
    opt.feasibility = feasibility_for(cfg);
    ScanStats s = scan(opt);
    json j{{"samples", s.samples},
           {"seed", s.seed},
           {"scrambled", s.scrambled},
           {"detected_unscrambled", s.detected_unscrambled},
           {"detected_scrambled", s.detected_scrambled},
           {"inconclusive", s.inconclusive},
           {"witness_detected", s.witness_detected},
           {"entropy_detected", s.entropy_detected},
           {"hierarchy_violations", s.hierarchy_violations},
           {"detected_fraction", s.detected_fraction()}};
    emit(cfg, out, j.dump(2));
    return kExitOk;
}

int cmd_entropy_curve(const Config &cfg, std::ostream &out) {
    int n = cfg.resolution > 0 ? cfg.resolution : 50;
    EntropySpec sx = spec_for(cfg, cfg.qtilde);
    EntropySpec sz = spec_for(cfg, cfg.q);
    double smax = max_entropy(sx);
    std::ostringstream o;
    o.imbue(std::locale::classic());
    o << "s_xx,bound_all,bound_sep,q,qtilde,entropy_kind\n";
    for (int i = 0; i <= n; ++i) {
        double s = smax * i / n;
        double all = std::numeric_limits<double>::quiet_NaN();
        if (sx.in_bound_regime() && sz.in_bound_regime()) all = all_states_bound(s, sx, sz);
        double sep = separable_bound(s, sx, sz);
        o << format_number(s) << "," << format_number(all) << "," << format_number(sep) << ","
          << format_number(sz.parameter) << "," << format_number(sx.parameter) << ","
          << entropy_kind_name(sx.kind) << "\n";
    }
    emit(cfg, out, o.str());
    return kExitOk;
}

int cmd_witness_curve(const Config &cfg, std::ostream &out) {
    int n = cfg.resolution > 0 ? cfg.resolution : 64;
    if (!(cfg.beta > -1.0)) throw UsageError("--beta must be greater than -1");
    auto curve = optimize_params(cfg.beta, n);
    std::ostringstream o;
    o << "beta,alpha,gamma\n";
    for (const auto &p : curve) {
        o << format_number(p.beta) << "," << format_number(p.alpha) << "," << format_number(p.gamma) << "\n";
    }
    emit(cfg, out, o.str());
    return kExitOk;
}

int cmd_slice(const Config &cfg, std::ostream &out) {
    int n = cfg.resolution > 0 ? cfg.resolution : 16;
    if (n < 8) throw UsageError("--resolution must be at least 8");
    auto slice = nonconvex_slice(n, feasibility_for(cfg));
    std::ostringstream o;
    o << "p_pp,p_pm,possibly_separable\n";
    for (const auto &p : cfg.boundary ? slice.boundary : slice.grid) {
        o << format_number(p.p_pp) << "," << format_number(p.p_pm) << "," << (p.possibly_separable ? "true" : "false")
          << "\n";
    }
    emit(cfg, out, o.str());
    return kExitOk;
}

int cmd_robustness(const Config &cfg, std::ostream &out) {
    double q = 0.0;
    if (cfg.q_text == "inf" || cfg.q_text == "infinity") {
        q = kInfiniteQ;
    } else {
        size_t used = 0;
        try {
            q = std::stod(cfg.q_text, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != cfg.q_text.size()) throw UsageError("--q: expected a number or 'inf', got '" + cfg.q_text + "'");
    }
    if (!(q >= 2.0)) throw UsageError("--q must be at least 2");
    out << format_number(robustness(q)) << "\n";
    return kExitOk;
}

int cmd_verify(const Config &cfg, std::ostream &out) {
    auto checks = verify_counterexample(feasibility_for(cfg));
    bool ok = true;
    for (const auto &c : checks) {
        out << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  [" << c.detail << "]\n";
        ok &= c.passed;
    }
    out << (ok ? "all checks passed\n" : "verification failed\n");
    return ok ? kExitOk : kExitVerification;
}

int cmd_table1(std::ostream &out) {
    DensityMatrix singlet = DensityMatrix::from_pure(states::singlet());
    DensityMatrix plus0 = DensityMatrix::from_pure(states::product(states::ket_plus(), states::ket0()));
    out << "state    setting  p1, p2, p3, p4\n";
    for (auto [name, rho] : {std::pair{"singlet", &singlet}, std::pair{"|+0>", &plus0}}) {
        for (Setting s : {Setting::XX, Setting::ZZ}) {
            const auto labels = MeasurementSetting::get(s).outcome_labels();
            out << std::left << std::setw(9) << name << std::setw(9) << setting_name(s);
            auto p = probabilities(*rho, s);
            for (int i = 0; i < 4; ++i) {
                out << (i ? "  " : "") << "p" << labels[i] << "=" << format_number(p[i]);
            }
            out << "\n";
        }
    }
    bool same = scramble_equivalent(scrambled_data(singlet), scrambled_data(plus0), 1e-12);
    out << "scrambled data equal: " << (same ? "yes" : "no") << "\n";
    return same ? kExitOk : kExitVerification;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream o;
    o.imbue(std::locale::classic());
    o << std::setprecision(12) << v;
    return o.str();
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Config cfg;
    CLI::App app{"Entanglement detection from scrambled two-qubit measurement data", "scrambled"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

    auto *detect_cmd = app.add_subcommand("detect", "Run detection methods on a state or probability file");
    detect_cmd->add_option("--in", cfg.in, "State or probability JSON file")->required();
    detect_cmd->add_option("--out", cfg.out, "Write the report as JSON");
    detect_cmd->add_option("--method", cfg.method, "sdp, witness, entropy or all")
        ->check(CLI::IsMember({"sdp", "witness", "entropy", "all"}));
    detect_cmd->add_option("--seed", cfg.seed, "Seed for solver restarts");
    add_entropy_flags(detect_cmd, cfg);
    add_tolerance_flags(detect_cmd, cfg);

    auto *measure_cmd = app.add_subcommand("measure", "Write the probability file of a state");
    measure_cmd->add_option("--in", cfg.in, "State JSON file")->required();
    measure_cmd->add_option("--out", cfg.out, "Output file (default stdout)");
    measure_cmd->add_option("--scrambled", cfg.scrambled, "Forget outcome labels (true|false)");

    auto *scan_cmd = app.add_subcommand("scan", "Monte-Carlo detection rates over random states");
    scan_cmd->add_option("--samples", cfg.samples, "Number of random states");
    scan_cmd->add_option("--seed", cfg.seed, "Random seed");
    scan_cmd->add_option("--scrambled", cfg.scrambled, "Count detections over all assignments (true|false)");
    scan_cmd->add_option("--out", cfg.out, "Output file (default stdout)");
    add_entropy_flags(scan_cmd, cfg);
    add_tolerance_flags(scan_cmd, cfg);

    auto *entropy_cmd = app.add_subcommand("entropy-curve", "All-states and separable entropy bounds as CSV");
    entropy_cmd->add_option("--resolution", cfg.resolution, "Number of grid intervals (default 50)");
    entropy_cmd->add_option("--out", cfg.out, "Output file (default stdout)");
    add_entropy_flags(entropy_cmd, cfg);

    auto *witness_cmd = app.add_subcommand("witness-curve", "Tangent witness parameters as CSV");
    witness_cmd->add_option("--beta", cfg.beta, "Fixed beta coefficient (default 0)");
    witness_cmd->add_option("--resolution", cfg.resolution, "Number of directions (default 64)");
    witness_cmd->add_option("--out", cfg.out, "Output file (default stdout)");

    auto *slice_cmd = app.add_subcommand("nonconvex-slice", "Classify the symmetric probability slice as CSV");
    slice_cmd->add_option("--resolution", cfg.resolution, "Grid resolution, at least 8 (default 16)");
    slice_cmd->add_flag("--boundary", cfg.boundary, "Emit the ray-traced boundary instead of the grid");
    slice_cmd->add_option("--out", cfg.out, "Output file (default stdout)");
    add_tolerance_flags(slice_cmd, cfg);

    auto *robust_cmd = app.add_subcommand("robustness", "Maximal white-noise weight for psi_3");
    robust_cmd->add_option("--q", cfg.q_text, "Tsallis parameter >= 2 or 'inf' (default inf)");

    auto *verify_cmd = app.add_subcommand("verify", "Check the non-convexity counterexample");
    add_tolerance_flags(verify_cmd, cfg);

    auto *table_cmd = app.add_subcommand("table1", "Probabilities of the singlet and |+0>");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (cfg.threads < 0) {
        err << "error: --threads must be nonnegative\n";
        return kExitUsage;
    }
    set_default_threads(cfg.threads);

    try {
        if (*detect_cmd) return cmd_detect(cfg, out);
        if (*measure_cmd) return cmd_measure(cfg, out);
        if (*scan_cmd) return cmd_scan(cfg, out);
        if (*entropy_cmd) return cmd_entropy_curve(cfg, out);
        if (*witness_cmd) return cmd_witness_curve(cfg, out);
        if (*slice_cmd) return cmd_slice(cfg, out);
        if (*robust_cmd) return cmd_robustness(cfg, out);
        if (*verify_cmd) return cmd_verify(cfg, out);
        if (*table_cmd) return cmd_table1(out);
    } catch (const ConvergenceFailure &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

int run(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace scrambled::cli
