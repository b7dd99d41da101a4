#pragma once

// Local product measurements, scrambled data and the outcome-relabeling group.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scrambled/quantum.h"

namespace scrambled {

enum class Setting : int { XX = 0, YY = 1, ZZ = 2 };

inline constexpr std::array<Setting, 3> kAllSettings{Setting::XX, Setting::YY, Setting::ZZ};

std::string_view setting_name(Setting s);
/// Accepts "xx"/"XX" etc. Throws ParseError otherwise.
Setting parse_setting(std::string_view name);

/// sigma_i (x) sigma_i measured locally; outcome i projects onto the i-th
/// product of local eigenvectors in the order (++, +-, -+, --) or (00, 01, 10, 11).
struct MeasurementSetting {
    Setting label;
    std::array<ComplexVector4, 4> vectors;
    std::array<ComplexMatrix4, 4> projectors;

    static const MeasurementSetting &get(Setting s);
    std::array<std::string_view, 4> outcome_labels() const;
};

inline constexpr double kProbabilitySumTol = 1e-9;
inline constexpr double kProbabilityRenormTol = 1e-12;

/// Four labeled outcome probabilities of one setting.
class OutcomeDistribution {
   public:
    /// Entries within 1e-9 of [0, 1] are clamped; the sum must be within 1e-9 of
    /// one and is renormalized when off by more than 1e-12. Throws
    /// InvalidDistribution otherwise.
    OutcomeDistribution(Setting setting, const std::array<double, 4> &p);

    Setting setting() const { return setting_; }
    const std::array<double, 4> &p() const { return p_; }
    double operator[](int i) const { return p_[i]; }

   private:
    Setting setting_;
    std::array<double, 4> p_;
};

/// Tr(rho Pi_i) for each outcome of `setting`.
OutcomeDistribution probabilities(const DensityMatrix &rho, Setting setting);
/// Unclamped Tr(rho Pi_i); used where exact sums matter.
std::array<double, 4> raw_probabilities(const ComplexMatrix4 &rho, Setting setting);

using Multiset4 = std::array<double, 4>;

/// Per-setting probability multisets, each stored sorted descending.
class ScrambledData {
   public:
    ScrambledData() = default;

    bool has(Setting s) const { return sets_[static_cast<int>(s)].has_value(); }
    /// Throws MissingSetting when absent.
    const Multiset4 &multiset(Setting s) const;
    /// Sorts and validates the values; replaces any previous multiset.
    void set(Setting s, const std::array<double, 4> &values);
    std::vector<Setting> settings() const;

    bool operator==(const ScrambledData &other) const = default;

   private:
    std::array<std::optional<Multiset4>, 3> sets_;
};

/// Forgets outcome labels. Throws DuplicateSetting on repeated settings.
ScrambledData scramble(std::span<const OutcomeDistribution> dists);

/// Same settings present and per-setting multisets equal within tol.
/// Throws SettingMismatch if the setting sets differ.
bool scramble_equivalent(const ScrambledData &d1, const ScrambledData &d2, double tol);

/// Bijection on outcome indices {0, 1, 2, 3}.
using Permutation4 = std::array<uint8_t, 4>;

inline constexpr Permutation4 kIdentityPermutation{0, 1, 2, 3};

/// Lexicographic rank in [0, 24).
int permutation_rank(const Permutation4 &p);
Permutation4 permutation_unrank(int rank);
Permutation4 compose(const Permutation4 &outer, const Permutation4 &inner);
Permutation4 inverse(const Permutation4 &p);
bool is_permutation(const Permutation4 &p);

/// Assignment of multiset entries to outcome labels: the labeled probability
/// of outcome i is multiset[perm[i]].
struct PermutationPair {
    Permutation4 x = kIdentityPermutation;
    Permutation4 z = kIdentityPermutation;

    /// Base-24 code rank(x) * 24 + rank(z), in [0, 576).
    int code() const { return permutation_rank(x) * 24 + permutation_rank(z); }
    static PermutationPair from_code(int code);
    bool operator==(const PermutationPair &) const = default;
};

/// One element of the group generated by local sigma_x, sigma_z on either
/// qubit and the qubit swap, with its induced action on outcome indices:
/// U Pi_i U^dagger = Pi_{action(i)}.
struct Relabeling {
    ComplexMatrix4 unitary;
    std::array<Permutation4, 3> action;  // indexed by Setting

    const Permutation4 &on(Setting s) const { return action[static_cast<int>(s)]; }
};

/// The 32-element relabeling group; actions are found by conjugating projectors.
const std::vector<Relabeling> &relabeling_group();

/// Lexicographically minimal representative of each orbit of the 576 pairs
/// under the relabeling group, ascending by code. Has 18 elements.
const std::vector<PermutationPair> &canonical_permutations();

/// Orbit of `pair` under the relabeling group (pair composed with inverse actions).
std::vector<PermutationPair> relabeling_orbit(const PermutationPair &pair);

/// Labeled XX and ZZ distributions for the assignment `perm`.
std::vector<OutcomeDistribution> apply_permutation(const ScrambledData &d, const PermutationPair &perm);

/// Relabels a single distribution: result[i] = p[perm[i]].
OutcomeDistribution permute(const OutcomeDistribution &dist, const Permutation4 &perm);

/// Measures each setting and scrambles the result.
ScrambledData scrambled_data(const DensityMatrix &rho, std::span<const Setting> settings);
ScrambledData scrambled_data(const DensityMatrix &rho);  // XX and ZZ

}  // namespace scrambled
