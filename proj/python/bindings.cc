#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scrambled/detector.h"
#include "scrambled/errors.h"
#include "scrambled/io.h"

namespace py = pybind11;
using namespace scrambled;

namespace {

Setting setting_arg(const std::string &name) {
    return parse_setting(name);
}

ScrambledData data_from_dict(const std::map<std::string, std::array<double, 4>> &d) {
    std::vector<OutcomeDistribution> dists;
    for (const auto &[name, p] : d) dists.emplace_back(parse_setting(name), p);
    return scramble(dists);
}

py::dict data_to_dict(const ScrambledData &d) {
    py::dict out;
    for (Setting s : d.settings()) out[py::str(std::string(setting_name(s)))] = d.multiset(s);
    return out;
}

EntropySpec spec_arg(const std::string &kind, double parameter) {
    return EntropySpec::make(parse_entropy_kind(kind), parameter);
}

py::dict feasibility_dict(const FeasibilityResult &r) {
    py::dict out;
    out["status"] = std::string(feasibility_status_name(r.status));
    out["residual"] = r.residual;
    out["iterations"] = r.iterations;
    if (r.witness_state) {
        out["state"] = r.witness_state->matrix();
    } else {
        out["state"] = py::none();
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Entanglement detection from scrambled two-qubit measurement data.";

    py::register_exception<Error>(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", m.attr("Error"));
    py::register_exception<InvalidState>(m, "InvalidState", m.attr("Error"));
    py::register_exception<InvalidDistribution>(m, "InvalidDistribution", m.attr("Error"));
    py::register_exception<NotHermitian>(m, "NotHermitian", m.attr("Error"));
    py::register_exception<MissingSetting>(m, "MissingSetting", m.attr("Error"));
    py::register_exception<DuplicateSetting>(m, "DuplicateSetting", m.attr("Error"));
    py::register_exception<SettingMismatch>(m, "SettingMismatch", m.attr("Error"));
    py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", m.attr("Error"));
    py::register_exception<ParseError>(m, "ParseError", m.attr("Error"));

    // quantum core
    m.def("validate_state", [](const ComplexMatrix4 &rho) { return DensityMatrix::from_matrix(rho).matrix(); },
          "Checks the density-matrix invariants and returns the Hermitian part.", py::arg("rho"));
    m.def("random_hs_state", [](uint64_t seed) { return random_hs_state(seed).matrix(); }, py::arg("seed"));
    m.def("psi_t", [](double t) { return psi_t(t).amplitudes(); }, py::arg("t"));
    m.def("eig_hermitian", [](const ComplexMatrix4 &h) {
        auto e = eig_hermitian(h);
        ComplexMatrix4 v;
        for (int k = 0; k < 4; ++k) v.col(k) = e.vectors[k];
        return py::make_tuple(e.values, v);
    }, py::arg("h"));
    m.def("partial_transpose", [](const ComplexMatrix4 &rho) { return partial_transpose(rho); }, py::arg("rho"));
    m.def("is_ppt", [](const ComplexMatrix4 &rho) { return is_ppt(DensityMatrix::from_matrix(rho)); }, py::arg("rho"));
    m.def("singlet", [] { return DensityMatrix::from_pure(states::singlet()).matrix(); });
    m.def("phi_plus", [] { return DensityMatrix::from_pure(states::phi_plus()).matrix(); });

    // measurement
    m.def("probabilities", [](const ComplexMatrix4 &rho, const std::string &setting) {
        return probabilities(DensityMatrix::from_matrix(rho), setting_arg(setting)).p();
    }, "Labeled outcome probabilities of setting 'xx', 'yy' or 'zz'.", py::arg("rho"), py::arg("setting"));
    m.def("scramble", [](const std::map<std::string, std::array<double, 4>> &d) {
        return data_to_dict(data_from_dict(d));
    }, "Sorted-descending multisets per setting.", py::arg("distributions"));
    m.def("scrambled_data", [](const ComplexMatrix4 &rho) {
        return data_to_dict(scrambled_data(DensityMatrix::from_matrix(rho)));
    }, py::arg("rho"));
    m.def("canonical_permutations", [] {
        std::vector<std::pair<Permutation4, Permutation4>> out;
        for (const auto &p : canonical_permutations()) out.emplace_back(p.x, p.z);
        return out;
    });

    // entropy
    m.def("entropy", [](const std::array<double, 4> &p, const std::string &kind, double parameter) {
        return entropy(p, spec_arg(kind, parameter));
    }, py::arg("p"), py::arg("kind") = "tsallis", py::arg("parameter") = 2.0);
    m.def("all_states_bound", [](double s, const std::string &kind, double q, double qtilde) {
        return all_states_bound(s, spec_arg(kind, qtilde), spec_arg(kind, q));
    }, py::arg("s_xx"), py::arg("kind") = "tsallis", py::arg("q") = 2.0, py::arg("qtilde") = 2.0);
    m.def("separable_bound", [](double s, const std::string &kind, double q, double qtilde) {
        py::gil_scoped_release release;
        return separable_bound(s, spec_arg(kind, qtilde), spec_arg(kind, q));
    }, py::arg("s_xx"), py::arg("kind") = "tsallis", py::arg("q") = 2.0, py::arg("qtilde") = 2.0);
    m.def("robustness", &robustness, "Use float('inf') for the limit.", py::arg("q"));

    // witness
    m.def("scrambled_witness_min", [](const std::map<std::string, std::array<double, 4>> &d, double a, double b,
                                      double g) { return scrambled_witness_min(data_from_dict(d), a, b, g); },
          py::arg("data"), py::arg("alpha"), py::arg("beta"), py::arg("gamma"));
    m.def("min_over_separable", &min_over_separable, py::arg("alpha"), py::arg("beta"), py::arg("gamma"));
    m.def("optimize_params", [](double beta, int directions) {
        std::vector<std::tuple<double, double, double>> out;
        py::gil_scoped_release release;
        for (const auto &p : optimize_params(beta, directions)) out.emplace_back(p.beta, p.alpha, p.gamma);
        return out;
    }, py::arg("beta") = 0.0, py::arg("directions") = 64);
    m.def("witness_min_eigvec", [](double a, double g) {
        auto r = witness_min_eigvec(a, g);
        return py::make_tuple(r.t, r.state.amplitudes());
    }, py::arg("alpha"), py::arg("gamma"));

    // feasibility and detection
    m.def("feasible_for_probabilities", [](const std::array<double, 4> &xx, const std::array<double, 4> &zz) {
        FeasibilityProblem p{OutcomeDistribution(Setting::XX, xx), OutcomeDistribution(Setting::ZZ, zz)};
        FeasibilityResult r;
        {
            py::gil_scoped_release release;
            r = feasible_for_probabilities(p);
        }
        return feasibility_dict(r);
    }, py::arg("xx"), py::arg("zz"));
    m.def("scrambled_possibly_separable", [](const std::map<std::string, std::array<double, 4>> &d) {
        ScrambledData data = data_from_dict(d);
        ScrambledFeasibility r;
        {
            py::gil_scoped_release release;
            r = scrambled_possibly_separable(data);
        }
        py::dict out;
        out["verdict"] = std::string(sdp_verdict_name(r.verdict));
        out["evidence_index"] = r.evidence_index ? py::int_(*r.evidence_index) : py::object(py::none());
        return out;
    }, py::arg("data"));
    m.def("detect", [](const ComplexMatrix4 &rho, const std::string &method) {
        DetectOptions opt;
        opt.methods = MethodSet::parse(method);
        DensityMatrix state = DensityMatrix::from_matrix(rho);
        DetectionReport r;
        {
            py::gil_scoped_release release;
            r = detect(state, opt);
        }
        py::dict out;
        out["overall"] = std::string(verdict_name(r.overall));
        out["sdp"] = std::string(verdict_name(r.sdp.verdict));
        out["witness"] = std::string(verdict_name(r.witness.verdict));
        out["entropy"] = std::string(verdict_name(r.entropy.verdict));
        return out;
    }, py::arg("rho"), py::arg("method") = "all");
    m.def("scan", [](int64_t samples, uint64_t seed, bool scrambled) {
        ScanOptions opt;
        opt.samples = samples;
        opt.seed = seed;
        opt.scrambled = scrambled;
        ScanStats s;
        {
            py::gil_scoped_release release;
            s = scan(opt);
        }
        py::dict out;
        out["samples"] = s.samples;
        out["seed"] = s.seed;
        out["scrambled"] = s.scrambled;
        out["detected_unscrambled"] = s.detected_unscrambled;
        out["detected_scrambled"] = s.detected_scrambled;
        out["inconclusive"] = s.inconclusive;
        out["witness_detected"] = s.witness_detected;
        out["entropy_detected"] = s.entropy_detected;
        out["hierarchy_violations"] = s.hierarchy_violations;
        return out;
    }, py::arg("samples"), py::arg("seed") = 0, py::arg("scrambled") = false);
    m.def("verify_counterexample", [] {
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const auto &c : verify_counterexample()) out.emplace_back(c.name, c.passed, c.detail);
        return out;
    });
    m.def("counterexample_mixture", [] { return counterexample_mixture().matrix(); });

    // files
    m.def("parse_state", [](const std::string &text) { return io::parse_state(text).matrix(); }, py::arg("text"));
    m.def("format_state", [](const ComplexMatrix4 &rho) { return io::format_state(DensityMatrix::from_matrix(rho)); },
          py::arg("rho"));
}
