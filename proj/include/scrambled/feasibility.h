#pragma once

// Does some PPT (for two qubits: separable) state reproduce a labeling of the
// XX and ZZ probabilities? Decided by Dykstra's alternating projections onto
// the affine constraint set, the PSD cone and the PPT cone.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "scrambled/measurement.h"

namespace scrambled {

enum class FeasibilityStatus { Feasible, Infeasible, Inconclusive };

std::string_view feasibility_status_name(FeasibilityStatus s);

struct FeasibilityOptions {
    int max_iterations = 20000;
    /// Certificates reproduce the targets within this and are PSD and PPT.
    double feasible_tol = 1e-7;
    /// Terminal residual above which the problem is declared infeasible.
    double infeasible_tol = 1e-6;
    /// Candidate accepted for repair when both minimal eigenvalues exceed -eig_tol.
    double eig_tol = 1e-8;
    /// Perturbed restarts tried after an Inconclusive run.
    int restarts = 8;
    uint64_t seed = 0x5dbf;
    /// Stop before the budget once the residual has stalled above infeasible_tol.
    bool stagnation_exit = true;
};

struct FeasibilityProblem {
    OutcomeDistribution xx;
    OutcomeDistribution zz;
    FeasibilityOptions options{};
};

struct FeasibilityResult {
    FeasibilityStatus status = FeasibilityStatus::Inconclusive;
    /// Present iff Feasible.
    std::optional<DensityMatrix> witness_state;
    /// Frobenius norm of the negative parts of the affine candidate and its
    /// partial transpose (the larger of the two).
    double residual = 0.0;
    int iterations = 0;
};

FeasibilityResult feasible_for_probabilities(const FeasibilityProblem &problem);

enum class SdpVerdict { PossiblySeparable, Detected, Inconclusive };

std::string_view sdp_verdict_name(SdpVerdict v);

struct ScrambledFeasibility {
    SdpVerdict verdict = SdpVerdict::Inconclusive;
    /// One entry per canonical permutation; empty when not run because a lower
    /// index was already feasible.
    std::vector<std::optional<FeasibilityResult>> results;
    /// Lowest canonical index with a Feasible result.
    std::optional<int> evidence_index;
};

/// Runs the feasibility problem for each canonical permutation assignment.
/// PossiblySeparable if any is feasible, Detected if all are infeasible,
/// Inconclusive otherwise.
ScrambledFeasibility scrambled_possibly_separable(const ScrambledData &d, const FeasibilityOptions &options = {});

/// Single-assignment verdict for the labeled data of rho itself.
FeasibilityResult unscrambled_feasibility(const DensityMatrix &rho, const FeasibilityOptions &options = {});

/// Mixes the data with that of 1/4 at weight lambda on the data: each p -> (1 - lambda)/4 + lambda p.
ScrambledData mix_with_uniform(const ScrambledData &d, double lambda);

/// Smallest lambda, within 1/resolution, for which the data of
/// (1 - lambda) 1/4 + lambda rho is detected. Returns 1 when rho itself is not detected.
double star_convexity_ray(const ScrambledData &d, int resolution, const FeasibilityOptions &options = {});
double star_convexity_ray(const DensityMatrix &rho, int resolution, const FeasibilityOptions &options = {});

}  // namespace scrambled
