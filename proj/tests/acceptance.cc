// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria. Every tolerance used below is pinned in this file.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include "oracles.h"
#include "scrambled/detector.h"
#include "scrambled/rng.h"

using namespace scrambled;

namespace {

constexpr double kTableTol = 1e-12;
constexpr int kEurSamples = 100000;
constexpr double kEurTol = 1e-9;
constexpr double kSaturationTol = 1e-9;
constexpr int kClosedFormPoints = 100;
constexpr double kClosedFormTol = 1e-9;
constexpr int kSeparableGridPoints = 20;
constexpr double kSeparableGridTol = 1e-4;
constexpr int kSeparableStates = 10000;
constexpr double kSeparableStateTol = 1e-6;
constexpr double kRobustnessFormulaTol = 1e-9;
constexpr double kRobustnessLargeQTol = 1e-3;
constexpr double kRobustnessOracleTol = 1e-9;
constexpr double kWitnessZeroTol = 1e-6;
constexpr int kEigvecSamples = 100;
constexpr double kOverlapTol = 1e-9;
constexpr double kTangentTol = 1e-8;
constexpr int kPermutationStates = 20;
constexpr int kScanSamples = 100000;
constexpr double kRateLow = 0.009;
constexpr double kRateHigh = 0.015;
constexpr int kSoundnessSamples = 1000;
constexpr double kOracleMargin = 1e-5;
constexpr double kMaxInconclusiveRate = 0.01;

int failures = 0;

void report(const char *id, const char *name, bool ok, const std::string &detail, double seconds) {
    std::printf("criterion %-3s %s  %s  (%s; %.1fs)\n", id, ok ? "PASS" : "FAIL", name, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

void criterion(const char *id, const char *name, const std::function<bool(std::string &)> &body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception &e) {
        detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, name, ok, detail, dt);
}

std::string fmt(const char *f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double max_diff(const std::array<double, 4> &a, const std::array<double, 4> &b) {
    double m = 0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Closed form of the Tsallis-2 all-states bound, written out independently.
double closed_form_tsallis2(double s) {
    double t = std::sqrt(std::max(0.0, 9 - 12 * s));
    double q = 3 + t + std::sqrt(3.0) * std::sqrt(std::max(0.0, (1 + t) * (3 - t)));
    return (3 * q * t * t - t * t * t * t) / (3 * q * q);
}

double separable_formula(double s) {
    return -2.25 + 3 * std::sqrt(1 - s) + s;
}

// Root of the closed-form noise equation for psi_3, by plain bisection on the
// difference of the two sides.
double robustness_oracle(double q) {
    const double t = 3, s = 1 + std::numbers::sqrt2;
    const double n = std::sqrt(3 + t * t);
    const double rhs = std::pow(s * s / (1 + s * s), 2 * q) + 2 * std::pow(s / (1 + s * s), 2 * q) +
                       std::pow(1 / (1 + s * s), 2 * q);
    auto f = [&](double l) {
        return std::pow((1 - l) * t / n + l / 4, 2 * q) + 3 * std::pow((1 - l) / n + l / 4, 2 * q) - rhs;
    };
    double lo = 0, hi = 1;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::array<double, 4> oracle_dist(const oracle::M4 &rho, int axis) {
    return oracle::measure(rho, axis);
}

}  // namespace

int main() {
    criterion("1", "singlet and |+0> probabilities and scrambled equivalence", [](std::string &d) {
        auto singlet = DensityMatrix::from_pure(states::singlet());
        auto plus0 = DensityMatrix::from_pure(states::product(states::ket_plus(), states::ket0()));
        double err = std::max({max_diff(probabilities(singlet, Setting::XX).p(), {0, 0.5, 0.5, 0}),
                               max_diff(probabilities(singlet, Setting::ZZ).p(), {0, 0.5, 0.5, 0}),
                               max_diff(probabilities(plus0, Setting::XX).p(), {0.5, 0.5, 0, 0}),
                               max_diff(probabilities(plus0, Setting::ZZ).p(), {0.5, 0, 0.5, 0})});
        bool same = scramble_equivalent(scrambled_data(singlet), scrambled_data(plus0), kTableTol);
        d = "max error " + fmt("%.1e", err) + (same ? ", scrambled data equal" : ", scrambled data differ");
        return err <= kTableTol && same;
    });

    criterion("2", "entropic uncertainty relation validity and saturation", [](std::string &d) {
        const std::vector<std::pair<double, double>> pairs{{2, 2}, {2, 3}, {3, 2}, {3, 3}};
        double worst = 1e300;
        for (int s = 0; s < kEurSamples; ++s) {
            auto rho = random_hs_state(CounterRng::derive_key(2, s));
            auto px = raw_probabilities(rho.matrix(), Setting::XX);
            auto pz = raw_probabilities(rho.matrix(), Setting::ZZ);
            for (auto [q, qt] : pairs) {
                auto sx = EntropySpec::tsallis(qt), sz = EntropySpec::tsallis(q);
                worst = std::min(worst, entropy(pz, sz) - all_states_bound(entropy(px, sx), sx, sz));
            }
        }
        double sat = 0;
        for (double t : {1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 100.0}) {
            oracle::M4 rho = oracle::psi_t(t) * oracle::psi_t(t).adjoint();
            auto px = oracle_dist(rho, 1), pz = oracle_dist(rho, 3);
            for (auto [q, qt] : pairs) {
                auto sx = EntropySpec::tsallis(qt), sz = EntropySpec::tsallis(q);
                double gap = oracle::tsallis(pz, q) - all_states_bound(oracle::tsallis(px, qt), sx, sz);
                sat = std::max(sat, std::abs(gap));
            }
        }
        d = "min F " + fmt("%.2e", worst) + " over 1e5 states x 4 pairs, max saturation gap " + fmt("%.1e", sat);
        return worst >= -kEurTol && sat <= kSaturationTol;
    });

    criterion("3", "closed-form Tsallis-2 bound equals the parametric bound", [](std::string &d) {
        const EntropySpec t2 = EntropySpec::tsallis(2);
        double err = 0;
        for (int i = 0; i < kClosedFormPoints; ++i) {
            double s = 0.75 * i / (kClosedFormPoints - 1);
            err = std::max(err, std::abs(all_states_bound(s, t2, t2) - closed_form_tsallis2(s)));
        }
        d = "max difference " + fmt("%.1e", err) + " at 100 points";
        return err <= kClosedFormTol;
    });

    criterion("4", "separable boundary", [](std::string &d) {
        const EntropySpec t2 = EntropySpec::tsallis(2);
        double grid_err = 0;
        for (int i = 0; i < kSeparableGridPoints; ++i) {
            double s = 0.75 * i / kSeparableGridPoints;
            grid_err = std::max(grid_err, std::abs(separable_bound(s, t2, t2) - separable_formula(s)));
        }
        double worst = 1e300;
        int kept = 0, detected = 0;
        for (uint64_t k = 0; kept < kSeparableStates; ++k) {
            auto rho = random_hs_state(CounterRng::derive_key(4, k));
            if (oracle::min_eig(oracle::partial_transpose(rho.matrix())) < 0) continue;
            ++kept;
            double sx = oracle::tsallis(oracle_dist(rho.matrix(), 1), 2);
            double sz = oracle::tsallis(oracle_dist(rho.matrix(), 3), 2);
            worst = std::min({worst, sz - separable_formula(sx), sx - separable_formula(sz)});
            detected += entropy_detect(scrambled_data(rho), t2, t2).detected;
        }
        d = "grid error " + fmt("%.1e", grid_err) + ", min gap over 1e4 PPT states " + fmt("%.2e", worst) +
            ", detected " + std::to_string(detected);
        return grid_err <= kSeparableGridTol && worst >= -kSeparableStateTol && detected == 0;
    });

    criterion("5", "white-noise robustness", [](std::string &d) {
        double limit = (10 - std::sqrt(2.0) - std::sqrt(12.0) - std::sqrt(24.0)) / 11;
        double inf_err = std::abs(robustness(kInfiniteQ) - limit);
        double large_err = std::abs(robustness(1000) - limit);
        bool monotone = true;
        double prev = 0, oracle_err = 0;
        for (double q : {2.0, 3.0, 5.0, 10.0, 50.0}) {
            double l = robustness(q);
            monotone &= l >= prev;
            prev = l;
            oracle_err = std::max(oracle_err, std::abs(l - robustness_oracle(q)));
        }
        oracle_err = std::max(oracle_err, std::abs(robustness(1000) - robustness_oracle(1000)));
        d = "lambda(inf) " + fmt("%.12f", robustness(kInfiniteQ)) + ", |lambda(1000) - limit| " + fmt("%.1e", large_err) +
            ", oracle difference " + fmt("%.1e", oracle_err) + (monotone ? ", nondecreasing" : ", NOT monotone");
        return inf_err <= kRobustnessFormulaTol && large_err <= kRobustnessLargeQTol &&
               oracle_err <= kRobustnessOracleTol && monotone;
    });

    criterion("6", "witness optimality", [](std::string &d) {
        const double a = 8 * std::numbers::sqrt2 - 12;
        double zero = std::abs(min_over_separable(a, 0, a));
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(-2.0, -0.01);
        double overlap_err = 0;
        for (int k = 0; k < kEigvecSamples; ++k) {
            double al = u(rng), ga = u(rng);
            auto r = witness_min_eigvec(al, ga);
            oracle::M4 w = oracle::M4::Identity();
            oracle::V4 pp = oracle::V4::Constant(0.5), zz(1, 0, 0, 0);
            w += al * pp * pp.adjoint() + ga * zz * zz.adjoint();
            Eigen::SelfAdjointEigenSolver<oracle::M4> es(w);
            double ov = std::abs(es.eigenvectors().col(0).dot(r.state.amplitudes()));
            overlap_err = std::max(overlap_err, std::abs(ov - 1));
        }
        auto curve = optimize_params(0, 64);
        double tangent = 0;
        for (const auto &p : curve) {
            tangent = std::max(tangent, std::abs(p.separable_min));
            tangent = std::max(tangent, std::abs(oracle::witness_product_min(p.alpha, 0, p.gamma)));
        }
        d = "|min at alpha*| " + fmt("%.1e", zero) + ", max overlap error " + fmt("%.1e", overlap_err) +
            ", max |separable min| on 64-point curve " + fmt("%.1e", tangent);
        return zero <= kWitnessZeroTol && overlap_err <= kOverlapTol && tangent <= kTangentTol;
    });

    criterion("7", "permutation machinery", [](std::string &d) {
        bool size_ok = canonical_permutations().size() == 18 && oracle::orbit_count() == 18;
        std::map<int, int> rep_of;
        for (size_t k = 0; k < canonical_permutations().size(); ++k)
            for (const auto &m : relabeling_orbit(canonical_permutations()[k])) rep_of[m.code()] = static_cast<int>(k);
        int conflicts = 0, inconclusive = 0, data_changes = 0, verdict_changes = 0;
        std::vector<DensityMatrix> states;
        for (int s = 0; s < kPermutationStates; ++s) states.push_back(random_hs_state(CounterRng::derive_key(7, s)));
        for (const auto &rho : states) {
            auto data = scrambled_data(rho);
            auto verdict = scrambled_possibly_separable(data).verdict;
            std::vector<std::optional<FeasibilityStatus>> orbit_status(18);
            for (int c = 0; c < 576; ++c) {
                auto labeled = apply_permutation(data, PermutationPair::from_code(c));
                auto rescrambled = scramble(labeled);
                if (!(rescrambled == data)) {
                    ++data_changes;
                    if (scrambled_possibly_separable(rescrambled).verdict != verdict) ++verdict_changes;
                }
                auto r = feasible_for_probabilities({labeled[0], labeled[1]});
                if (r.status == FeasibilityStatus::Inconclusive) {
                    ++inconclusive;
                    continue;
                }
                auto &slot = orbit_status[rep_of.at(c)];
                if (slot && *slot != r.status) ++conflicts;
                if (!slot) slot = r.status;
            }
        }
        d = std::string(size_ok ? "18 canonical pairs" : "wrong canonical count") +
            ", relabeled data changes " + std::to_string(data_changes) + ", verdict changes " +
            std::to_string(verdict_changes) + ", per-assignment orbit conflicts " + std::to_string(conflicts) +
            " (inconclusive " + std::to_string(inconclusive) + " of " + std::to_string(576 * kPermutationStates) + ")";
        return size_ok && data_changes == 0 && verdict_changes == 0 && conflicts == 0;
    });

    criterion("8", "non-convexity counterexample", [](std::string &d) {
        auto mixture = counterexample_mixture();
        oracle::M4 phi = oracle::M4::Zero();
        phi(0, 0) = phi(0, 3) = phi(3, 0) = phi(3, 3) = 0.5;
        oracle::M4 direct = 5.0 / 6 * counterexample_rho1().matrix() + 1.0 / 6 * phi;
        double build_err = (direct - mixture.matrix()).cwiseAbs().maxCoeff();
        auto data = scrambled_data(mixture);
        std::array<double, 4> pattern{33. / 48, 5. / 48, 5. / 48, 5. / 48};
        double pattern_err = std::max(max_diff(data.multiset(Setting::XX), pattern),
                                      max_diff(data.multiset(Setting::ZZ), pattern));
        bool detected = scrambled_possibly_separable(data).verdict == SdpVerdict::Detected;
        int refuted = 0;
        for (const auto &perm : canonical_permutations()) {
            auto v = correlation_witness_values(apply_permutation(data, perm));
            refuted += *std::min_element(v.begin(), v.end()) < 0;
        }
        bool rho1_ppt = oracle::min_eig(oracle::partial_transpose(counterexample_rho1().matrix())) >= -1e-12;
        bool ends = scrambled_possibly_separable(scrambled_data(counterexample_rho1())).verdict ==
                        SdpVerdict::PossiblySeparable &&
                    scrambled_possibly_separable(scrambled_data(DensityMatrix::from_pure(states::phi_plus()))).verdict ==
                        SdpVerdict::PossiblySeparable;
        bool checks = true;
        for (const auto &c : verify_counterexample()) checks &= c.passed;
        d = "pattern error " + fmt("%.1e", pattern_err) + ", mixture " + (detected ? "detected" : "NOT detected") +
            ", refuted assignments " + std::to_string(refuted) + "/18" + (ends ? ", endpoints possibly separable" : ", endpoint detected") +
            (checks ? ", verify all pass" : ", verify failures");
        return build_err <= 1e-15 && pattern_err <= kTableTol && detected && refuted == 18 && rho1_ppt && ends && checks;
    });

    criterion("9", "detection rate over 1e5 random states", [](std::string &d) {
        ScanOptions opt;
        opt.samples = kScanSamples;
        opt.seed = 9;
        ScanStats s = scan(opt);
        double rate = s.detected_fraction();
        d = "detected " + std::to_string(s.detected_unscrambled) + " (" + fmt("%.4f", rate) + "), inconclusive " +
            std::to_string(s.inconclusive) + ", witness " + std::to_string(s.witness_detected) + ", entropy " +
            std::to_string(s.entropy_detected) + ", hierarchy violations " + std::to_string(s.hierarchy_violations);
        return rate >= kRateLow && rate <= kRateHigh && s.hierarchy_violations == 0 && s.entropy_detected == 0;
    });

    criterion("10", "feasibility solver agrees with the violation oracle", [](std::string &d) {
        int agree = 0, disagree = 0, marginal = 0, inconclusive = 0;
        for (int k = 0; k < kSoundnessSamples; ++k) {
            auto rho = random_hs_state(CounterRng::derive_key(10, k));
            auto xx = raw_probabilities(rho.matrix(), Setting::XX);
            auto zz = raw_probabilities(rho.matrix(), Setting::ZZ);
            auto r = unscrambled_feasibility(rho);
            if (r.status == FeasibilityStatus::Inconclusive) {
                ++inconclusive;
                continue;
            }
            auto o = oracle::feasibility_oracle(xx, zz, kOracleMargin);
            if (o == oracle::OracleVerdict::Marginal) {
                ++marginal;
                continue;
            }
            bool same = (o == oracle::OracleVerdict::Feasible) == (r.status == FeasibilityStatus::Feasible);
            (same ? agree : disagree)++;
        }
        double inc_rate = double(inconclusive) / kSoundnessSamples;
        d = "agree " + std::to_string(agree) + ", disagree " + std::to_string(disagree) + ", oracle-marginal " +
            std::to_string(marginal) + ", inconclusive " + std::to_string(inconclusive);
        return disagree == 0 && inc_rate < kMaxInconclusiveRate;
    });

    std::printf("%d criteria failed\n", failures);
    return failures;
}
