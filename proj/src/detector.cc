#include "scrambled/detector.h"

#include <cmath>
#include <locale>
#include <numbers>
#include <sstream>

#include "scrambled/errors.h"
#include "scrambled/parallel.h"
#include "scrambled/rng.h"

namespace scrambled {

namespace {

constexpr int kTangentDirections = 256;
constexpr int kBoundaryRays = 64;

Verdict from_sdp(SdpVerdict v) {
    switch (v) {
        case SdpVerdict::PossiblySeparable:
            return Verdict::PossiblySeparable;
        case SdpVerdict::Detected:
            return Verdict::Detected;
        case SdpVerdict::Inconclusive:
            return Verdict::Inconclusive;
    }
    return Verdict::Inconclusive;
}

std::string format_number(double v) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(12);
    out << v;
    return out.str();
}

std::string format_array(const std::array<double, 4> &p) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(12);
    out << "(" << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << ")";
    return out.str();
}

bool close(const std::array<double, 4> &a, const std::array<double, 4> &b, double tol) {
    for (int i = 0; i < 4; ++i) {
        if (std::abs(a[i] - b[i]) > tol) return false;
    }
    return true;
}

struct SampleOutcome {
    bool unscrambled_detected = false;
    bool unscrambled_inconclusive = false;
    bool scrambled_detected = false;
    bool scrambled_inconclusive = false;
    bool witness = false;
    bool entropy = false;
    bool violation = false;
};

}  // namespace

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Detected:
            return "detected";
        case Verdict::NotDetected:
            return "not-detected";
        case Verdict::PossiblySeparable:
            return "possibly-separable";
        case Verdict::Inconclusive:
            return "inconclusive";
        case Verdict::NotRun:
            return "not-run";
    }
    return "?";
}

MethodSet MethodSet::parse(std::string_view name) {
    if (name == "all") return all();
    MethodSet m = none();
    if (name == "sdp") {
        m.sdp = true;
    } else if (name == "witness") {
        m.witness = true;
    } else if (name == "entropy") {
        m.entropy = true;
    } else {
        throw ParseError("unknown method '" + std::string(name) + "'");
    }
    return m;
}

const std::vector<WitnessCurvePoint> &tangent_witnesses() {
    // Same directions as optimize_params, scaled by the one-parameter branch minimum.
    static const std::vector<WitnessCurvePoint> curve = [] {
        std::vector<WitnessCurvePoint> out;
        for (int k = 0; k < kTangentDirections; ++k) {
            double angle = 0.5 * std::numbers::pi + 1.5 * std::numbers::pi * (k + 0.5) / kTangentDirections;
            out.push_back(analytic_tangent(angle));
        }
        return out;
    }();
    return curve;
}

WitnessEvidence best_tangent_witness(const ScrambledData &d) {
    WitnessEvidence best;
    best.minimum.value = std::numeric_limits<double>::infinity();
    for (const auto &w : tangent_witnesses()) {
        auto m = scrambled_witness_min_detail(d, w.alpha, w.beta, w.gamma);
        if (m.value < best.minimum.value) best = {w, m};
    }
    return best;
}

DetectionReport detect(const ScrambledData &d, const DetectOptions &options) {
    DetectionReport report;
    if (options.methods.sdp) {
        try {
            report.sdp_detail = scrambled_possibly_separable(d, options.feasibility);
            report.sdp.verdict = from_sdp(report.sdp_detail->verdict);
        } catch (const Error &e) {
            report.sdp = {Verdict::Inconclusive, e.what()};
        }
    }
    if (options.methods.witness) {
        try {
            report.witness_detail = best_tangent_witness(d);
            report.witness.verdict = report.witness_detail->minimum.value < -options.witness_tol
                                         ? Verdict::Detected
                                         : Verdict::NotDetected;
        } catch (const Error &e) {
            report.witness = {Verdict::Inconclusive, e.what()};
        }
    }
    if (options.methods.entropy) {
        try {
            report.entropy_detail = entropy_detect(d, options.spec_x, options.spec_z);
            report.entropy.verdict = report.entropy_detail->detected ? Verdict::Detected : Verdict::NotDetected;
        } catch (const Error &e) {
            report.entropy = {Verdict::Inconclusive, e.what()};
        }
    }

    const std::array<const MethodReport *, 3> all{&report.sdp, &report.witness, &report.entropy};
    bool any_detected = false;
    bool any_inconclusive = false;
    for (const auto *m : all) {
        any_detected |= m->verdict == Verdict::Detected;
        any_inconclusive |= m->verdict == Verdict::Inconclusive;
    }
    if (any_detected) {
        report.overall = Verdict::Detected;
    } else if (report.sdp.verdict != Verdict::NotRun) {
        report.overall = report.sdp.verdict;
    } else {
        report.overall = any_inconclusive ? Verdict::Inconclusive : Verdict::NotDetected;
    }
    return report;
}

DetectionReport detect(const DensityMatrix &rho, const DetectOptions &options) {
    return detect(scrambled_data(rho), options);
}

double ScanStats::detected_fraction() const {
    if (samples == 0) return 0.0;
    return static_cast<double>(scrambled ? detected_scrambled : detected_unscrambled) / samples;
}

ScanStats scan(const ScanOptions &options) {
    if (options.samples < 1) {
        throw DomainError("scan needs at least one sample");
    }
    // Build the shared caches before the workers start.
    tangent_witnesses();
    std::vector<SampleOutcome> outcomes(static_cast<size_t>(options.samples));

    parallel_for(outcomes.size(), [&](size_t i) {
        DensityMatrix rho = random_hs_state(CounterRng::derive_key(options.seed, i));
        ScrambledData d = scrambled_data(rho);
        SampleOutcome &o = outcomes[i];

        FeasibilityResult u = unscrambled_feasibility(rho, options.feasibility);
        o.unscrambled_detected = u.status == FeasibilityStatus::Infeasible;
        o.unscrambled_inconclusive = u.status == FeasibilityStatus::Inconclusive;
        o.witness = best_tangent_witness(d).minimum.value < -1e-8;
        o.entropy = entropy_detect(d, options.spec_x, options.spec_z).detected;

        // A feasible identity assignment already makes the scrambled data possibly separable.
        bool need_scrambled = o.witness || o.entropy ||
                              (options.scrambled && u.status != FeasibilityStatus::Feasible);
        if (need_scrambled) {
            auto s = scrambled_possibly_separable(d, options.feasibility);
            o.scrambled_detected = s.verdict == SdpVerdict::Detected;
            o.scrambled_inconclusive = s.verdict == SdpVerdict::Inconclusive;
        }
        o.violation = (o.witness || o.entropy) && !o.scrambled_detected;
    });

    ScanStats stats;
    stats.samples = options.samples;
    stats.seed = options.seed;
    stats.scrambled = options.scrambled;
    for (const auto &o : outcomes) {
        stats.detected_unscrambled += o.unscrambled_detected;
        if (options.scrambled) {
            stats.detected_scrambled += o.scrambled_detected;
            stats.inconclusive += o.scrambled_inconclusive;
        } else {
            stats.inconclusive += o.unscrambled_inconclusive;
        }
        stats.witness_detected += o.witness;
        stats.entropy_detected += o.entropy;
        stats.hierarchy_violations += o.violation;
    }
    return stats;
}

ScrambledData slice_data(double p_pp, double p_pm) {
    std::array<double, 4> p{p_pp, p_pm, p_pm, 1.0 - p_pp - 2.0 * p_pm};
    ScrambledData d;
    d.set(Setting::XX, p);
    d.set(Setting::ZZ, p);
    return d;
}

SlicePoint classify_slice_point(double p_pp, double p_pm, const FeasibilityOptions &options) {
    auto s = scrambled_possibly_separable(slice_data(p_pp, p_pm), options);
    return {p_pp, p_pm, s.verdict != SdpVerdict::Detected};
}

SliceResult nonconvex_slice(int resolution, const FeasibilityOptions &options) {
    if (resolution < 8) {
        throw DomainError("nonconvex_slice: resolution must be at least 8");
    }
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i <= resolution; ++i) {
        for (int j = 0; i + 2 * j <= resolution; ++j) cells.emplace_back(i, j);
    }
    SliceResult out;
    out.grid.resize(cells.size());
    parallel_for(cells.size(), [&](size_t k) {
        double r = resolution;
        out.grid[k] = classify_slice_point(cells[k].first / r, cells[k].second / r, options);
    });

    out.boundary.resize(kBoundaryRays);
    const double step = std::ldexp(1.0, -static_cast<int>(std::ceil(std::log2(static_cast<double>(resolution)))));
    parallel_for(kBoundaryRays, [&](size_t k) {
        double a = 2.0 * std::numbers::pi * static_cast<double>(k) / kBoundaryRays;
        double dx = std::cos(a), dy = std::sin(a);
        // Largest t keeping p_pp, p_pm and p_mm = 1 - p_pp - 2 p_pm nonnegative.
        double t = std::numeric_limits<double>::infinity();
        if (dx < 0) t = std::min(t, -0.25 / dx);
        if (dy < 0) t = std::min(t, -0.25 / dy);
        double dm = -dx - 2.0 * dy;
        if (dm < 0) t = std::min(t, -0.25 / dm);
        double ex = std::max(0.0, 0.25 + t * dx);
        double ey = std::max(0.0, 0.25 + t * dy);
        double lambda = star_convexity_ray(slice_data(ex, ey), resolution, options);
        double keep = lambda >= 1.0 ? 1.0 : std::max(0.0, lambda - step);
        out.boundary[k] = {0.25 + keep * (ex - 0.25), 0.25 + keep * (ey - 0.25), true};
    });
    return out;
}

DensityMatrix counterexample_rho1() {
    std::array<std::array<double, 4>, 4> t{};
    t[0][0] = 1.0;
    // Pauli indices: 1 = x, 3 = z.
    for (int k : {1, 3}) {
        t[0][k] = -0.7;
        t[k][0] = -0.7;
    }
    for (int i : {1, 3}) {
        for (int j : {1, 3}) t[i][j] = 0.5;
    }
    return DensityMatrix::from_matrix(states::from_bloch(t));
}

DensityMatrix counterexample_mixture() {
    return mix(counterexample_rho1(), DensityMatrix::from_pure(states::phi_plus()), 1.0 / 6.0);
}

std::vector<CheckResult> verify_counterexample(const FeasibilityOptions &options) {
    std::vector<CheckResult> checks;
    auto add = [&](std::string name, bool passed, std::string detail) {
        checks.push_back({std::move(name), passed, std::move(detail)});
    };
    auto run = [&](std::string name, const std::function<std::pair<bool, std::string>()> &fn) {
        try {
            auto [ok, detail] = fn();
            add(std::move(name), ok, std::move(detail));
        } catch (const std::exception &e) {
            add(std::move(name), false, std::string("error: ") + e.what());
        }
    };

    run("rho1 is a PPT state", [] {
        DensityMatrix rho1 = counterexample_rho1();
        double m = min_eigenvalue(partial_transpose(rho1));
        return std::pair{is_ppt(rho1), "min eigenvalue of partial transpose " + format_number(m)};
    });
    run("rho1 ZZ distribution", [] {
        auto p = raw_probabilities(counterexample_rho1().matrix(), Setting::ZZ);
        return std::pair{close(p, {0.025, 0.125, 0.125, 0.725}, 1e-12), format_array(p)};
    });
    run("rho2 scrambled data equals that of |+0>", [] {
        auto phi = scrambled_data(DensityMatrix::from_pure(states::phi_plus()));
        auto plus0 = scrambled_data(DensityMatrix::from_pure(states::product(states::ket_plus(), states::ket0())));
        return std::pair{scramble_equivalent(phi, plus0, 1e-12), std::string("xx and zz multisets compared")};
    });
    run("mixture probabilities are 5/48 x3 and 33/48", [] {
        auto mixture = counterexample_mixture();
        auto px = raw_probabilities(mixture.matrix(), Setting::XX);
        auto pz = raw_probabilities(mixture.matrix(), Setting::ZZ);
        std::array<double, 4> want{5.0 / 48, 5.0 / 48, 5.0 / 48, 33.0 / 48};
        return std::pair{close(px, want, 1e-12) && close(pz, want, 1e-12),
                         "xx " + format_array(px) + " zz " + format_array(pz)};
    });
    run("mixture is entangled", [] {
        return std::pair{!is_ppt(counterexample_mixture()), std::string("partial transpose has a negative eigenvalue")};
    });
    run("mixture detected by scrambled feasibility", [&] {
        auto s = scrambled_possibly_separable(scrambled_data(counterexample_mixture()), options);
        return std::pair{s.verdict == SdpVerdict::Detected, std::string(sdp_verdict_name(s.verdict))};
    });
    run("correlation witness refutes every canonical assignment", [] {
        auto d = scrambled_data(counterexample_mixture());
        int refuted = 0;
        for (const auto &perm : canonical_permutations()) {
            auto values = correlation_witness_values(apply_permutation(d, perm));
            if (*std::min_element(values.begin(), values.end()) < 0.0) ++refuted;
        }
        int total = static_cast<int>(canonical_permutations().size());
        return std::pair{refuted == total, std::to_string(refuted) + " of " + std::to_string(total)};
    });
    run("rho1 possibly separable", [&] {
        auto s = scrambled_possibly_separable(scrambled_data(counterexample_rho1()), options);
        return std::pair{s.verdict == SdpVerdict::PossiblySeparable, std::string(sdp_verdict_name(s.verdict))};
    });
    run("rho2 possibly separable", [&] {
        auto s = scrambled_possibly_separable(scrambled_data(DensityMatrix::from_pure(states::phi_plus())), options);
        return std::pair{s.verdict == SdpVerdict::PossiblySeparable, std::string(sdp_verdict_name(s.verdict))};
    });
    return checks;
}

}  // namespace scrambled
