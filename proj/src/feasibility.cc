#include "scrambled/feasibility.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

#include "scrambled/errors.h"
#include "scrambled/parallel.h"
#include "scrambled/rng.h"

namespace scrambled {

namespace {

constexpr int kCheckEvery = 4;
constexpr int kStallWindow = 1000;
constexpr double kStallRatio = 1e-3;

double hs_inner(const ComplexMatrix4 &a, const ComplexMatrix4 &b) {
    return (a.conjugate().cwiseProduct(b)).sum().real();
}

// Orthonormal frame of span{I, Pi^xx_i, Pi^zz_i} with the coefficients
// expressing each frame element in the constraint matrices.
struct ConstraintFrame {
    std::vector<ComplexMatrix4> frame;
    std::vector<std::array<double, 9>> coeffs;

    static const ConstraintFrame &get() {
        static const ConstraintFrame f = build();
        return f;
    }

   private:
    static ConstraintFrame build() {
        std::vector<ComplexMatrix4> c{ComplexMatrix4::Identity()};
        for (Setting s : {Setting::XX, Setting::ZZ}) {
            for (const auto &p : MeasurementSetting::get(s).projectors) c.push_back(p);
        }
        ConstraintFrame out;
        for (size_t j = 0; j < c.size(); ++j) {
            ComplexMatrix4 v = c[j];
            std::array<double, 9> a{};
            a[j] = 1.0;
            for (size_t k = 0; k < out.frame.size(); ++k) {
                double proj = hs_inner(out.frame[k], c[j]);
                v -= proj * out.frame[k];
                for (int i = 0; i < 9; ++i) a[i] -= proj * out.coeffs[k][i];
            }
            double norm = std::sqrt(hs_inner(v, v));
            if (norm < 1e-10) continue;
            v /= norm;
            for (double &x : a) x /= norm;
            out.frame.push_back(v);
            out.coeffs.push_back(a);
        }
        return out;
    }
};

struct Spectrum {
    double min_value;
    double negative_norm;
};

ComplexMatrix4 hermitian_part(const ComplexMatrix4 &m) {
    return 0.5 * (m + m.adjoint());
}

ComplexMatrix4 clip_psd(const ComplexMatrix4 &m) {
    auto e = eig_hermitian(hermitian_part(m));
    ComplexMatrix4 out = ComplexMatrix4::Zero();
    for (int k = 0; k < 4; ++k) {
        if (e.values[k] > 0.0) out += e.values[k] * e.vectors[k] * e.vectors[k].adjoint();
    }
    return out;
}

Spectrum spectrum(const ComplexMatrix4 &m) {
    auto e = eig_hermitian(hermitian_part(m));
    double neg = 0.0;
    for (double v : e.values) {
        if (v < 0.0) neg += v * v;
    }
    return {e.values[3], std::sqrt(neg)};
}

bool still_falling(const std::map<int, double> &history, int it) {
    auto now = history.find(it);
    auto before = history.find(it - kStallWindow);
    if (now == history.end() || before == history.end()) return false;
    return now->second <= (1.0 - kStallRatio) * before->second;
}

class Solver {
   public:
    explicit Solver(const FeasibilityProblem &problem) : problem_(problem), frame_(ConstraintFrame::get()) {
        std::array<double, 9> b{1.0};
        for (int i = 0; i < 4; ++i) {
            b[1 + i] = problem.xx[i];
            b[5 + i] = problem.zz[i];
        }
        for (const auto &a : frame_.coeffs) {
            double c = 0.0;
            for (int i = 0; i < 9; ++i) c += a[i] * b[i];
            targets_.push_back(c);
        }
    }

    ComplexMatrix4 project_affine(const ComplexMatrix4 &x) const {
        ComplexMatrix4 out = x;
        for (size_t k = 0; k < frame_.frame.size(); ++k) {
            out -= (hs_inner(frame_.frame[k], x) - targets_[k]) * frame_.frame[k];
        }
        return out;
    }

    FeasibilityResult run(const ComplexMatrix4 &start) const {
        const auto &opt = problem_.options;
        ComplexMatrix4 x = start;
        ComplexMatrix4 y_psd = ComplexMatrix4::Zero();
        ComplexMatrix4 y_ppt = ComplexMatrix4::Zero();
        std::map<int, double> history;
        FeasibilityResult result;
        for (int it = 1; it <= opt.max_iterations; ++it) {
            x = project_affine(x);
            ComplexMatrix4 z = x + y_psd;
            x = clip_psd(z);
            y_psd = z - x;
            z = x + y_ppt;
            x = partial_transpose(clip_psd(partial_transpose(z)));
            y_ppt = z - x;

            if (it % kCheckEvery != 0 && it != 1) continue;
            ComplexMatrix4 cand = project_affine(x);
            Spectrum s1 = spectrum(cand);
            Spectrum s2 = spectrum(partial_transpose(cand));
            result.residual = std::max(s1.negative_norm, s2.negative_norm);
            result.iterations = it;
            double lowest = std::min(s1.min_value, s2.min_value);
            if (lowest >= -opt.eig_tol) {
                if (auto cert = certify(cand, lowest)) {
                    result.status = FeasibilityStatus::Feasible;
                    result.witness_state = std::move(cert);
                    return result;
                }
            }
            if (it % (kStallWindow / 2) == 0) {
                history[it] = result.residual;
                if (opt.stagnation_exit && it >= 2 * kStallWindow && result.residual > opt.infeasible_tol &&
                    !still_falling(history, it)) {
                    result.status = FeasibilityStatus::Infeasible;
                    return result;
                }
            }
        }
        // A residual that is still shrinking at the end of the budget is slow
        // convergence into a thin feasible region, not evidence of infeasibility.
        bool infeasible = result.residual > opt.infeasible_tol && !still_falling(history, result.iterations);
        result.status = infeasible ? FeasibilityStatus::Infeasible : FeasibilityStatus::Inconclusive;
        return result;
    }

   private:
    // Mixes in just enough white noise to make the candidate exactly PSD and PPT.
    std::optional<DensityMatrix> certify(const ComplexMatrix4 &cand, double lowest) const {
        ComplexMatrix4 m = hermitian_part(cand);
        if (lowest < 0.0) {
            double w = -lowest / (0.25 - lowest);
            m = (1.0 - w) * m + w * 0.25 * ComplexMatrix4::Identity();
        }
        m /= m.trace().real();
        std::optional<DensityMatrix> rho;
        try {
            rho = DensityMatrix::from_matrix(m);
        } catch (const InvalidState &) {
            return std::nullopt;
        }
        if (min_eigenvalue(rho->matrix()) < -1e-12 || min_eigenvalue(partial_transpose(*rho)) < -1e-12) {
            return std::nullopt;
        }
        auto px = raw_probabilities(rho->matrix(), Setting::XX);
        auto pz = raw_probabilities(rho->matrix(), Setting::ZZ);
        for (int i = 0; i < 4; ++i) {
            if (std::abs(px[i] - problem_.xx[i]) > problem_.options.feasible_tol ||
                std::abs(pz[i] - problem_.zz[i]) > problem_.options.feasible_tol) {
                return std::nullopt;
            }
        }
        return rho;
    }

    const FeasibilityProblem &problem_;
    const ConstraintFrame &frame_;
    std::vector<double> targets_;
};

ComplexMatrix4 perturbed_start(uint64_t seed, int restart) {
    CounterRng rng(CounterRng::derive_key(seed, static_cast<uint64_t>(restart)));
    ComplexMatrix4 g;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    }
    ComplexMatrix4 h = hermitian_part(g);
    h /= std::sqrt(hs_inner(h, h));
    return 0.25 * ComplexMatrix4::Identity() + 0.2 * h;
}

}  // namespace

std::string_view feasibility_status_name(FeasibilityStatus s) {
    switch (s) {
        case FeasibilityStatus::Feasible:
            return "feasible";
        case FeasibilityStatus::Infeasible:
            return "infeasible";
        case FeasibilityStatus::Inconclusive:
            return "inconclusive";
    }
    return "?";
}

std::string_view sdp_verdict_name(SdpVerdict v) {
    switch (v) {
        case SdpVerdict::PossiblySeparable:
            return "possibly-separable";
        case SdpVerdict::Detected:
            return "detected";
        case SdpVerdict::Inconclusive:
            return "inconclusive";
    }
    return "?";
}

FeasibilityResult feasible_for_probabilities(const FeasibilityProblem &problem) {
    if (problem.xx.setting() != Setting::XX || problem.zz.setting() != Setting::ZZ) {
        throw SettingMismatch("feasibility problem needs an XX and a ZZ distribution");
    }
    Solver solver(problem);
    FeasibilityResult result = solver.run(0.25 * ComplexMatrix4::Identity());
    int total = result.iterations;
    for (int r = 0; r < problem.options.restarts && result.status == FeasibilityStatus::Inconclusive; ++r) {
        FeasibilityResult retry = solver.run(perturbed_start(problem.options.seed, r));
        total += retry.iterations;
        if (retry.status != FeasibilityStatus::Inconclusive || retry.residual < result.residual) {
            result = std::move(retry);
        }
    }
    result.iterations = total;
    return result;
}

ScrambledFeasibility scrambled_possibly_separable(const ScrambledData &d, const FeasibilityOptions &options) {
    const auto &perms = canonical_permutations();
    const int n = static_cast<int>(perms.size());
    std::vector<std::optional<FeasibilityResult>> results(n);
    std::atomic<int> first_feasible{n};

    parallel_for(perms.size(), [&](size_t i) {
        if (static_cast<int>(i) > first_feasible.load()) return;
        auto dists = apply_permutation(d, perms[i]);
        FeasibilityResult r = feasible_for_probabilities({dists[0], dists[1], options});
        if (r.status == FeasibilityStatus::Feasible) {
            int cur = first_feasible.load();
            while (static_cast<int>(i) < cur && !first_feasible.compare_exchange_weak(cur, static_cast<int>(i))) {
            }
        }
        results[i] = std::move(r);
    });

    ScrambledFeasibility out;
    int found = first_feasible.load();
    if (found < n) {
        for (int i = found + 1; i < n; ++i) results[i].reset();
        out.verdict = SdpVerdict::PossiblySeparable;
        out.evidence_index = found;
    } else {
        bool all_infeasible = std::all_of(results.begin(), results.end(), [](const auto &r) {
            return r && r->status == FeasibilityStatus::Infeasible;
        });
        out.verdict = all_infeasible ? SdpVerdict::Detected : SdpVerdict::Inconclusive;
    }
    out.results = std::move(results);
    return out;
}

FeasibilityResult unscrambled_feasibility(const DensityMatrix &rho, const FeasibilityOptions &options) {
    return feasible_for_probabilities({probabilities(rho, Setting::XX), probabilities(rho, Setting::ZZ), options});
}

ScrambledData mix_with_uniform(const ScrambledData &d, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError("mixing weight must lie in [0, 1]");
    }
    ScrambledData out;
    for (Setting s : d.settings()) {
        auto m = d.multiset(s);
        for (double &p : m) p = (1.0 - lambda) * 0.25 + lambda * p;
        out.set(s, m);
    }
    return out;
}

double star_convexity_ray(const ScrambledData &d, int resolution, const FeasibilityOptions &options) {
    if (resolution < 1) {
        throw DomainError("star_convexity_ray: resolution must be positive");
    }
    auto detected = [&](double lambda) {
        return scrambled_possibly_separable(mix_with_uniform(d, lambda), options).verdict == SdpVerdict::Detected;
    };
    if (!detected(1.0)) return 1.0;
    int depth = static_cast<int>(std::ceil(std::log2(static_cast<double>(resolution))));
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < depth; ++k) {
        double mid = 0.5 * (lo + hi);
        if (detected(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double star_convexity_ray(const DensityMatrix &rho, int resolution, const FeasibilityOptions &options) {
    return star_convexity_ray(scrambled_data(rho), resolution, options);
}

}  // namespace scrambled
