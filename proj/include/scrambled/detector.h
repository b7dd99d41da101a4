#pragma once

// Multi-method detection reports, Monte-Carlo scans, the non-convex slice and
// the built-in counterexample check.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scrambled/entropy.h"
#include "scrambled/feasibility.h"
#include "scrambled/witness.h"

namespace scrambled {

enum class Verdict { Detected, NotDetected, PossiblySeparable, Inconclusive, NotRun };

std::string_view verdict_name(Verdict v);

struct MethodSet {
    bool sdp = true;
    bool witness = true;
    bool entropy = true;

    static MethodSet all() { return {}; }
    static MethodSet none() { return {false, false, false}; }
    /// "sdp", "witness", "entropy" or "all". Throws ParseError otherwise.
    static MethodSet parse(std::string_view name);
};

struct DetectOptions {
    MethodSet methods;
    EntropySpec spec_x = EntropySpec::tsallis(2.0);
    EntropySpec spec_z = EntropySpec::tsallis(2.0);
    FeasibilityOptions feasibility;
    /// A tangent witness detects when its scrambled minimum is below -witness_tol.
    double witness_tol = 1e-8;
};

struct MethodReport {
    Verdict verdict = Verdict::NotRun;
    /// Message of an error raised by the method, if any.
    std::string error;
};

struct WitnessEvidence {
    WitnessCurvePoint params;
    ScrambledWitnessMin minimum;
};

struct DetectionReport {
    MethodReport sdp;
    MethodReport witness;
    MethodReport entropy;
    Verdict overall = Verdict::NotDetected;

    std::optional<ScrambledFeasibility> sdp_detail;
    std::optional<WitnessEvidence> witness_detail;
    std::optional<EntropyDetection> entropy_detail;
};

/// Tangent witnesses for beta = 0, computed once and cached.
const std::vector<WitnessCurvePoint> &tangent_witnesses();

/// Runs the requested methods. Errors inside a method are recorded in its
/// report (verdict Inconclusive) instead of propagating.
DetectionReport detect(const ScrambledData &d, const DetectOptions &options = {});
DetectionReport detect(const DensityMatrix &rho, const DetectOptions &options = {});

/// Witness method alone: the lowest scrambled minimum over the tangent curve.
WitnessEvidence best_tangent_witness(const ScrambledData &d);

struct ScanOptions {
    int64_t samples = 1000;
    uint64_t seed = 0;
    /// Count detections over all canonical assignments instead of the identity one.
    bool scrambled = false;
    EntropySpec spec_x = EntropySpec::tsallis(2.0);
    EntropySpec spec_z = EntropySpec::tsallis(2.0);
    FeasibilityOptions feasibility;
};

struct ScanStats {
    int64_t samples = 0;
    uint64_t seed = 0;
    bool scrambled = false;
    int64_t detected_unscrambled = 0;
    /// Filled when scrambled is set; otherwise zero.
    int64_t detected_scrambled = 0;
    /// SDP results of the counted kind that were Inconclusive.
    int64_t inconclusive = 0;
    int64_t witness_detected = 0;
    int64_t entropy_detected = 0;
    /// Witness- or entropy-detected samples whose scrambled data the SDP did not detect.
    int64_t hierarchy_violations = 0;

    double detected_fraction() const;
    bool operator==(const ScanStats &) const = default;
};

/// Hilbert-Schmidt random states, sample i drawn with key derive_key(seed, i).
ScanStats scan(const ScanOptions &options);

struct SlicePoint {
    double p_pp = 0.0;
    double p_pm = 0.0;
    /// False iff the scrambled feasibility verdict is Detected.
    bool possibly_separable = true;
};

/// Scrambled data with both settings equal to (p_pp, p_pm, p_pm, 1 - p_pp - 2 p_pm).
ScrambledData slice_data(double p_pp, double p_pm);
SlicePoint classify_slice_point(double p_pp, double p_pm, const FeasibilityOptions &options = {});

struct SliceResult {
    /// Grid points (i, j) / resolution with 1 - p_pp - 2 p_pm >= 0.
    std::vector<SlicePoint> grid;
    /// Outermost possibly-separable point on each of 64 rays from (1/4, 1/4).
    std::vector<SlicePoint> boundary;
};

SliceResult nonconvex_slice(int resolution, const FeasibilityOptions &options = {});

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Separable state with local Bloch components -7/10 and correlations +1/2.
DensityMatrix counterexample_rho1();
/// 5/6 rho1 + 1/6 |Phi+><Phi+|.
DensityMatrix counterexample_mixture();

std::vector<CheckResult> verify_counterexample(const FeasibilityOptions &options = {});

}  // namespace scrambled
