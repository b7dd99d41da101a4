#pragma once

// The scrambling-invariant witness family
//     W = 1 + alpha |x1 x2><x1 x2| + beta |y1 y2><y1 y2| + gamma |z1 z2><z1 z2|
// and the correlation witnesses 1 +- XX +- ZZ.

#include <array>
#include <span>
#include <vector>

#include "scrambled/measurement.h"

namespace scrambled {

struct WitnessParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    /// Outcome index (0..3) of the projector used for each setting.
    int choice_x = 0;
    int choice_y = 0;
    int choice_z = 0;
};

ComplexMatrix4 witness_matrix(const WitnessParams &w);

/// 1 + alpha p_x[choice_x] + beta p_y[choice_y] + gamma p_z[choice_z] from
/// labeled distributions. Settings with a zero coefficient may be absent.
double witness_value(std::span<const OutcomeDistribution> dists, const WitnessParams &w);

struct ScrambledWitnessMin {
    double value = 1.0;
    /// Index into each sorted multiset (XX, YY, ZZ) picked by the minimum, -1 if unused.
    std::array<int, 3> picks{-1, -1, -1};
};

/// Minimum of the witness over every assignment of the multisets to outcome labels.
ScrambledWitnessMin scrambled_witness_min_detail(const ScrambledData &d, double alpha, double beta, double gamma);
double scrambled_witness_min(const ScrambledData &d, double alpha, double beta, double gamma);

/// <W> for the product state cos(t/2)|0> + e^{i p} sin(t/2)|1> on each qubit;
/// x = (theta_a, phi_a, theta_b, phi_b), any real angles.
double product_expectation(std::span<const double> x, double alpha, double beta, double gamma);

struct SeparableMin {
    double value = 0.0;
    /// theta_a, phi_a, theta_b, phi_b of the minimizing product state.
    std::array<double, 4> angles{};
    int agreeing_starts = 0;
};

/// Minimum of <W> over product states (hence over all separable states).
/// Independent of the projector choices. Throws ConvergenceFailure when the
/// best value is not reproduced by two starts within 1e-6.
SeparableMin min_over_separable_detail(double alpha, double beta, double gamma);
double min_over_separable(double alpha, double beta, double gamma);

struct WitnessCurvePoint {
    double beta = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
    /// min_over_separable at the emitted parameters.
    double separable_min = 0.0;
};

/// Tangent witnesses for `directions` directions (alpha, gamma) ~ (cos a, sin a)
/// with a evenly spaced in the open interval (pi/2, 2pi). Throws DomainError
/// for beta <= -1, where no positive scale leaves the witness valid.
std::vector<WitnessCurvePoint> optimize_params(double beta, int directions = 64);

/// Minimum of <W> over product states for beta = 0 from the two one-parameter
/// branches theta_a = theta_b and theta_b = 3pi/2 - theta_a (phi = 0).
double min_over_separable_branches(double alpha, double gamma);
/// Tangent point for beta = 0 along (cos a, sin a), scaled via the branch minimum.
WitnessCurvePoint analytic_tangent(double angle);

struct WitnessEigvec {
    double t = 0.0;
    PureState4 state;
};

/// t = -(alpha - 2 gamma + 2 sqrt(alpha^2 - alpha gamma + gamma^2)) / alpha and the
/// normalized (t, 1, 1, 1), the eigenvector of 1 + alpha |++><++| + gamma |00><00|
/// with the smallest eigenvalue when alpha, gamma < 0. Throws DomainError for
/// alpha = 0 or when neither coefficient is negative.
WitnessEigvec witness_min_eigvec(double alpha, double gamma);

/// 1 + s1 E_xx + s2 E_zz for (s1, s2) = (+,+), (+,-), (-,+), (-,-), with
/// E = p0 - p1 - p2 + p3 in label order.
std::array<double, 4> correlation_witness_values(std::span<const OutcomeDistribution> dists);

/// 1 + alpha 2^{-S_inf(XX)} + beta 2^{-S_inf(YY)} + gamma 2^{-S_inf(ZZ)}.
/// Zero coefficients drop their term; positive ones throw DomainError.
double min_entropy_form(double alpha, double beta, double gamma, const ScrambledData &d);

}  // namespace scrambled
