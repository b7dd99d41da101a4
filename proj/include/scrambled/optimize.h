#pragma once

#include <functional>
#include <span>
#include <vector>

namespace scrambled {

struct NelderMeadOptions {
    /// Initial simplex edge length.
    double step = 0.3;
    /// Converged when the simplex characteristic size falls below this.
    double size_tol = 1e-10;
    int max_iterations = 4000;
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex minimization (GSL nmsimplex2).
MinimizeResult nelder_mead(const Objective &f, std::span<const double> start,
                           const NelderMeadOptions &options = {});

/// Runs `nelder_mead` from every start and returns results in start order.
std::vector<MinimizeResult> multi_start(const Objective &f, const std::vector<std::vector<double>> &starts,
                                        const NelderMeadOptions &options = {});

/// Number of results whose value lies within `tol` of the best one.
int agreeing_starts(const std::vector<MinimizeResult> &results, double tol);
/// Index of the smallest value; ties resolve to the lowest index.
size_t best_index(const std::vector<MinimizeResult> &results);

}  // namespace scrambled
