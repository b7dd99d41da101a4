#pragma once

// Entropies of outcome distributions and the entropic entanglement criterion
// in the (S_xx, S_zz) plane.
//
// Throughout, `spec_x` is the entropy applied to the XX distribution (the
// abscissa) and `spec_z` the one applied to ZZ (the ordinate).

#include <array>
#include <limits>
#include <string_view>

#include "scrambled/measurement.h"

namespace scrambled {

enum class EntropyKind { Shannon, Tsallis, Renyi };

std::string_view entropy_kind_name(EntropyKind kind);
EntropyKind parse_entropy_kind(std::string_view name);

/// Shannon and Renyi use base-2 logarithms; Tsallis uses plain power sums.
struct EntropySpec {
    EntropyKind kind = EntropyKind::Tsallis;
    /// q for Tsallis, alpha for Renyi (may be +inf), ignored for Shannon.
    double parameter = 2.0;

    /// Validates parameter > 0 and maps parameter == 1 to Shannon.
    static EntropySpec make(EntropyKind kind, double parameter);
    static EntropySpec shannon() { return {EntropyKind::Shannon, 1.0}; }
    static EntropySpec tsallis(double q) { return make(EntropyKind::Tsallis, q); }
    static EntropySpec renyi(double alpha) { return make(EntropyKind::Renyi, alpha); }

    /// Tsallis or Renyi with parameter >= 2, where the psi_t family bounds all states.
    bool in_bound_regime() const;

    bool operator==(const EntropySpec &) const = default;
    auto operator<=>(const EntropySpec &) const = default;
};

double entropy(const std::array<double, 4> &p, const EntropySpec &spec);
double entropy(const OutcomeDistribution &p, const EntropySpec &spec);
/// Entropy of the uniform distribution over four outcomes.
double max_entropy(const EntropySpec &spec);
/// -log2 max_j p_j.
double min_entropy(const std::array<double, 4> &p);

struct EntropyPoint {
    double s_xx = 0.0;
    double s_zz = 0.0;
};

inline constexpr double kTMax = 1e8;

struct PsiTDistributions {
    std::array<double, 4> xx;
    std::array<double, 4> zz;
};

/// Exact XX and ZZ distributions of psi_t; t = +inf gives the |00> limit.
PsiTDistributions psi_t_distributions(double t);
EntropyPoint psi_t_entropies(double t, const EntropySpec &spec_x, const EntropySpec &spec_z);

/// Unique t >= 1 with S_xx(psi_t) = s, by bisection. Returns kTMax at the
/// maximal entropy. Throws DomainError outside [0, S_xx(psi_inf)] or outside
/// the bound regime.
double t_from_sxx(double s, const EntropySpec &spec_x);

/// Minimal S_zz over all two-qubit states with S_xx = s_xx, attained by psi_t.
double all_states_bound(double s_xx, const EntropySpec &spec_x, const EntropySpec &spec_z);
/// Closed form of the same bound for Tsallis-2 on both axes.
double tsallis2_bound_closed_form(double s_xx);
/// Numerical separable boundary for Tsallis-2 on both axes: -9/4 + 3 sqrt(1 - s) + s.
double tsallis2_separable_formula(double s_xx);

struct SeparableBoundOptions {
    int starts = 64;
    double step_tol = 1e-10;
    /// Best value must be matched by at least two starts within this spread.
    double spread_tol = 1e-6;
    uint64_t seed = 0x5eb0;
};

/// Minimizer of S_zz over (1 - p)|ab><ab| + p|cd><cd| with real product states.
struct SeparableBoundResult {
    double value = 0.0;
    double p = 0.0;
    /// theta_a, theta_b, theta_c, theta_d of cos(theta/2)|0> + sin(theta/2)|1>.
    std::array<double, 4> thetas{};
    int agreeing_starts = 0;
};

/// Minimal S_zz over separable states with S_xx = s_xx (multi-start search).
/// Throws ConvergenceFailure when the best value is not reproduced by two starts.
SeparableBoundResult separable_bound_detail(double s_xx, const EntropySpec &spec_x,
                                            const EntropySpec &spec_z,
                                            const SeparableBoundOptions &options = {});
double separable_bound(double s_xx, const EntropySpec &spec_x, const EntropySpec &spec_z);

inline constexpr double kEntropyDetectionMargin = 1e-9;

struct EntropyDetection {
    bool detected = false;
    EntropyPoint point;
    /// Separable bound at point.s_xx.
    double separable_bound = 0.0;
    /// Same test with the roles of XX and ZZ exchanged.
    EntropyPoint swapped_point;
    double swapped_separable_bound = 0.0;
};

/// Detected iff the point lies below the separable boundary by more than the
/// margin, in either axis orientation.
EntropyDetection entropy_detect(const ScrambledData &d, const EntropySpec &spec_x, const EntropySpec &spec_z);

inline constexpr double kInfiniteQ = std::numeric_limits<double>::infinity();

/// Maximal white-noise weight keeping psi_3 detectable for Tsallis-q entropies
/// (q >= 2, or kInfiniteQ for the closed-form limit).
double robustness(double q);
/// (10 - sqrt 2 - sqrt 12 - sqrt 24) / 11.
double robustness_limit();

}  // namespace scrambled
