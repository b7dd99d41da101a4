#include "scrambled/measurement.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "scrambled/errors.h"

namespace scrambled {

namespace {

MeasurementSetting build_setting(Setting s) {
    std::array<ComplexVector2, 2> local;
    switch (s) {
        case Setting::XX:
            local = {states::ket_plus(), states::ket_minus()};
            break;
        case Setting::YY:
            local = {states::ket_y_plus(), states::ket_y_minus()};
            break;
        case Setting::ZZ:
            local = {states::ket0(), states::ket1()};
            break;
    }
    MeasurementSetting m{s, {}, {}};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            ComplexVector4 v = kron(local[a], local[b]);
            m.vectors[2 * a + b] = v;
            m.projectors[2 * a + b] = v * v.adjoint();
        }
    }
    return m;
}

std::array<double, 4> validated(const std::array<double, 4> &p) {
    std::array<double, 4> out = p;
    double sum = 0.0;
    for (double &x : out) {
        if (!std::isfinite(x) || x < -kProbabilitySumTol || x > 1.0 + kProbabilitySumTol) {
            std::ostringstream msg;
            msg << "probability " << x << " outside [0, 1]";
            throw InvalidDistribution(msg.str());
        }
        x = std::clamp(x, 0.0, 1.0);
        sum += x;
    }
    double err = std::abs(sum - 1.0);
    if (err > kProbabilitySumTol) {
        std::ostringstream msg;
        msg << "probabilities sum to " << sum << ", not one";
        throw InvalidDistribution(msg.str());
    }
    if (err > kProbabilityRenormTol) {
        for (double &x : out) {
            x /= sum;
        }
    }
    return out;
}

Permutation4 find_action(const ComplexMatrix4 &u, Setting s) {
    const auto &m = MeasurementSetting::get(s);
    Permutation4 action{};
    for (int i = 0; i < 4; ++i) {
        ComplexMatrix4 conj = u * m.projectors[i] * u.adjoint();
        int found = -1;
        for (int j = 0; j < 4; ++j) {
            if (max_abs_diff(conj, m.projectors[j]) < 1e-12) {
                found = j;
            }
        }
        if (found < 0) {
            throw Error("relabeling generator does not permute measurement projectors");
        }
        action[i] = static_cast<uint8_t>(found);
    }
    return action;
}

std::vector<Relabeling> build_group() {
    ComplexMatrix4 swap = ComplexMatrix4::Zero();
    swap(0, 0) = swap(3, 3) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    const std::vector<ComplexMatrix4> generators{
        kron(pauli::x(), pauli::identity()), kron(pauli::z(), pauli::identity()),
        kron(pauli::identity(), pauli::x()), kron(pauli::identity(), pauli::z()), swap};

    auto make = [](const ComplexMatrix4 &u) {
        Relabeling r{u, {}};
        for (Setting s : kAllSettings) {
            r.action[static_cast<int>(s)] = find_action(u, s);
        }
        return r;
    };

    std::vector<Relabeling> group{make(ComplexMatrix4::Identity())};
    std::set<std::array<Permutation4, 3>> seen{group.front().action};
    for (size_t k = 0; k < group.size(); ++k) {
        for (const auto &g : generators) {
            Relabeling next = make(g * group[k].unitary);
            if (seen.insert(next.action).second) {
                group.push_back(next);
            }
        }
    }
    return group;
}

}  // namespace

std::string_view setting_name(Setting s) {
    switch (s) {
        case Setting::XX:
            return "xx";
        case Setting::YY:
            return "yy";
        case Setting::ZZ:
            return "zz";
    }
    return "?";
}

Setting parse_setting(std::string_view name) {
    if (name == "xx" || name == "XX") return Setting::XX;
    if (name == "yy" || name == "YY") return Setting::YY;
    if (name == "zz" || name == "ZZ") return Setting::ZZ;
    throw ParseError("unknown measurement setting '" + std::string(name) + "'");
}

const MeasurementSetting &MeasurementSetting::get(Setting s) {
    static const std::array<MeasurementSetting, 3> all{
        build_setting(Setting::XX), build_setting(Setting::YY), build_setting(Setting::ZZ)};
    return all[static_cast<int>(s)];
}

std::array<std::string_view, 4> MeasurementSetting::outcome_labels() const {
    if (label == Setting::ZZ) {
        return {"00", "01", "10", "11"};
    }
    return {"++", "+-", "-+", "--"};
}

OutcomeDistribution::OutcomeDistribution(Setting setting, const std::array<double, 4> &p)
    : setting_(setting), p_(validated(p)) {}

std::array<double, 4> raw_probabilities(const ComplexMatrix4 &rho, Setting setting) {
    const auto &m = MeasurementSetting::get(setting);
    std::array<double, 4> p{};
    for (int i = 0; i < 4; ++i) {
        p[i] = (m.vectors[i].adjoint() * rho * m.vectors[i])(0, 0).real();
    }
    return p;
}

OutcomeDistribution probabilities(const DensityMatrix &rho, Setting setting) {
    return OutcomeDistribution(setting, raw_probabilities(rho.matrix(), setting));
}

const Multiset4 &ScrambledData::multiset(Setting s) const {
    const auto &slot = sets_[static_cast<int>(s)];
    if (!slot) {
        throw MissingSetting("scrambled data has no " + std::string(setting_name(s)) + " multiset");
    }
    return *slot;
}

void ScrambledData::set(Setting s, const std::array<double, 4> &values) {
    Multiset4 m = validated(values);
    std::sort(m.begin(), m.end(), std::greater<>());
    sets_[static_cast<int>(s)] = m;
}

std::vector<Setting> ScrambledData::settings() const {
    std::vector<Setting> out;
    for (Setting s : kAllSettings) {
        if (has(s)) out.push_back(s);
    }
    return out;
}

ScrambledData scramble(std::span<const OutcomeDistribution> dists) {
    ScrambledData d;
    for (const auto &dist : dists) {
        if (d.has(dist.setting())) {
            throw DuplicateSetting("setting " + std::string(setting_name(dist.setting())) +
                                   " given more than once");
        }
        d.set(dist.setting(), dist.p());
    }
    return d;
}

bool scramble_equivalent(const ScrambledData &d1, const ScrambledData &d2, double tol) {
    if (d1.settings() != d2.settings()) {
        throw SettingMismatch("scrambled data sets have different measurement settings");
    }
    for (Setting s : d1.settings()) {
        const auto &a = d1.multiset(s);
        const auto &b = d2.multiset(s);
        for (int i = 0; i < 4; ++i) {
            if (std::abs(a[i] - b[i]) > tol) {
                return false;
            }
        }
    }
    return true;
}

int permutation_rank(const Permutation4 &p) {
    static constexpr int kFactorial[4] = {6, 2, 1, 1};
    int rank = 0;
    for (int i = 0; i < 4; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < 4; ++j) {
            if (p[j] < p[i]) ++smaller;
        }
        rank += smaller * kFactorial[i];
    }
    return rank;
}

Permutation4 permutation_unrank(int rank) {
    if (rank < 0 || rank >= 24) {
        throw DomainError("permutation rank must lie in [0, 24)");
    }
    Permutation4 p = kIdentityPermutation;
    for (int k = 0; k < rank; ++k) {
        std::next_permutation(p.begin(), p.end());
    }
    return p;
}

Permutation4 compose(const Permutation4 &outer, const Permutation4 &inner) {
    Permutation4 out{};
    for (int i = 0; i < 4; ++i) out[i] = outer[inner[i]];
    return out;
}

Permutation4 inverse(const Permutation4 &p) {
    Permutation4 out{};
    for (int i = 0; i < 4; ++i) out[p[i]] = static_cast<uint8_t>(i);
    return out;
}

bool is_permutation(const Permutation4 &p) {
    std::array<bool, 4> hit{};
    for (uint8_t v : p) {
        if (v > 3 || hit[v]) return false;
        hit[v] = true;
    }
    return true;
}

PermutationPair PermutationPair::from_code(int code) {
    if (code < 0 || code >= 576) {
        throw DomainError("permutation pair code must lie in [0, 576)");
    }
    return {permutation_unrank(code / 24), permutation_unrank(code % 24)};
}

const std::vector<Relabeling> &relabeling_group() {
    static const std::vector<Relabeling> group = build_group();
    return group;
}

std::vector<PermutationPair> relabeling_orbit(const PermutationPair &pair) {
    std::vector<PermutationPair> orbit;
    for (const auto &g : relabeling_group()) {
        PermutationPair q{compose(pair.x, inverse(g.on(Setting::XX))),
                          compose(pair.z, inverse(g.on(Setting::ZZ)))};
        if (std::find(orbit.begin(), orbit.end(), q) == orbit.end()) {
            orbit.push_back(q);
        }
    }
    return orbit;
}

const std::vector<PermutationPair> &canonical_permutations() {
    static const std::vector<PermutationPair> reps = [] {
        std::vector<PermutationPair> out;
        std::vector<bool> covered(576, false);
        for (int code = 0; code < 576; ++code) {
            if (covered[code]) continue;
            PermutationPair rep = PermutationPair::from_code(code);
            for (const auto &q : relabeling_orbit(rep)) {
                covered[q.code()] = true;
            }
            // Codes are visited in increasing order, so `rep` is the orbit minimum.
            out.push_back(rep);
        }
        return out;
    }();
    return reps;
}

OutcomeDistribution permute(const OutcomeDistribution &dist, const Permutation4 &perm) {
    std::array<double, 4> p{};
    for (int i = 0; i < 4; ++i) p[i] = dist[perm[i]];
    return OutcomeDistribution(dist.setting(), p);
}

std::vector<OutcomeDistribution> apply_permutation(const ScrambledData &d, const PermutationPair &perm) {
    std::vector<OutcomeDistribution> out;
    for (auto [setting, p] : {std::pair{Setting::XX, perm.x}, std::pair{Setting::ZZ, perm.z}}) {
        const auto &m = d.multiset(setting);
        std::array<double, 4> labeled{};
        for (int i = 0; i < 4; ++i) labeled[i] = m[p[i]];
        out.emplace_back(setting, labeled);
    }
    return out;
}

ScrambledData scrambled_data(const DensityMatrix &rho, std::span<const Setting> settings) {
    std::vector<OutcomeDistribution> dists;
    for (Setting s : settings) {
        dists.push_back(probabilities(rho, s));
    }
    return scramble(dists);
}

ScrambledData scrambled_data(const DensityMatrix &rho) {
    static constexpr std::array<Setting, 2> kXZ{Setting::XX, Setting::ZZ};
    return scrambled_data(rho, kXZ);
}

}  // namespace scrambled
