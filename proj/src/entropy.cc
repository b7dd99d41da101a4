#include "scrambled/entropy.h"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "scrambled/errors.h"
#include "scrambled/optimize.h"
#include "scrambled/rng.h"

namespace scrambled {

namespace {

constexpr double kPenalty = 100.0;

// log sum_j p_j^q, computed relative to the largest entry for large q.
double log_power_sum(const std::array<double, 4> &p, double q) {
    double pmax = *std::max_element(p.begin(), p.end());
    if (q > 50.0) {
        double acc = 0.0;
        for (double x : p) {
            if (x > 0.0) acc += std::exp(q * std::log(x / pmax));
        }
        return q * std::log(pmax) + std::log(acc);
    }
    double acc = 0.0;
    for (double x : p) {
        if (x > 0.0) acc += q == 2.0 ? x * x : std::pow(x, q);
    }
    return std::log(acc);
}

double power_sum(const std::array<double, 4> &p, double q) {
    if (q == 2.0) {
        return p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
    }
    double acc = 0.0;
    for (double x : p) {
        if (x > 0.0) acc += std::pow(x, q);
    }
    return acc;
}

void require_regime(const EntropySpec &spec, const char *op) {
    if (!spec.in_bound_regime()) {
        std::ostringstream msg;
        msg << op << ": requires a Tsallis or Renyi entropy with parameter >= 2, got "
            << entropy_kind_name(spec.kind) << " " << spec.parameter;
        throw DomainError(msg.str());
    }
}

// psi_t distributions in terms of u = 1/t in [0, 1].
PsiTDistributions psi_u_distributions(double u) {
    double norm = 1.0 + 3.0 * u * u;
    double a = (1.0 + 3.0 * u) * (1.0 + 3.0 * u) / (4.0 * norm);
    double b = (1.0 - u) * (1.0 - u) / (4.0 * norm);
    double c = 1.0 / norm;
    double d = u * u / norm;
    return {{a, b, b, b}, {c, d, d, d}};
}

// Smallest u in [0, 1] with S_xx(psi_{1/u}) = s; S_xx decreases in u.
double u_from_sxx(double s, const EntropySpec &spec_x) {
    double smax = max_entropy(spec_x);
    if (!(s >= 0.0 && s <= smax + 1e-12)) {
        std::ostringstream msg;
        msg << "t_from_sxx: entropy " << s << " outside attainable range [0, " << smax << "]";
        throw DomainError(msg.str());
    }
    if (s >= smax) return 0.0;
    if (s <= 0.0) return 1.0;
    double lo = 0.0;  // S(lo) = smax > s
    double hi = 1.0;  // S(hi) = 0 < s
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double v = entropy(psi_u_distributions(mid).xx, spec_x);
        if (v > s) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double vlo = entropy(psi_u_distributions(lo).xx, spec_x);
    double vhi = entropy(psi_u_distributions(hi).xx, spec_x);
    return std::abs(vlo - s) < std::abs(vhi - s) ? lo : hi;
}

struct Mixture {
    std::array<double, 4> x1, z1, x2, z2;

    std::array<double, 4> xx(double p) const {
        return {(1 - p) * x1[0] + p * x2[0], (1 - p) * x1[1] + p * x2[1], (1 - p) * x1[2] + p * x2[2],
                (1 - p) * x1[3] + p * x2[3]};
    }
    std::array<double, 4> zz(double p) const {
        return {(1 - p) * z1[0] + p * z2[0], (1 - p) * z1[1] + p * z2[1], (1 - p) * z1[2] + p * z2[2],
                (1 - p) * z1[3] + p * z2[3]};
    }
};

// XX and ZZ distributions of the real product state with the given angles.
void product_distributions(double th1, double th2, std::array<double, 4> &xx, std::array<double, 4> &zz) {
    double s1 = std::sin(th1), s2 = std::sin(th2);
    double c1 = std::cos(th1), c2 = std::cos(th2);
    xx = {(1 + s1) * (1 + s2) / 4, (1 + s1) * (1 - s2) / 4, (1 - s1) * (1 + s2) / 4, (1 - s1) * (1 - s2) / 4};
    zz = {(1 + c1) * (1 + c2) / 4, (1 + c1) * (1 - c2) / 4, (1 - c1) * (1 + c2) / 4, (1 - c1) * (1 - c2) / 4};
    for (auto *arr : {&xx, &zz}) {
        for (double &v : *arr) v = std::max(v, 0.0);
    }
}

struct ConstrainedValue {
    double value;
    double p;
};

// min S_zz over mixing weights p with S_xx = s, or a penalty above any entropy
// value growing with the constraint gap when no such p exists.
ConstrainedValue mixture_objective(const Mixture &m, double s, const EntropySpec &spec_x,
                                   const EntropySpec &spec_z) {
    auto g = [&](double p) { return entropy(m.xx(p), spec_x) - s; };
    double g0 = g(0.0);
    double g1 = g(1.0);

    auto neg = [&](double p) { return -g(p); };
    auto [pmax, neg_gmax] = boost::math::tools::brent_find_minima(neg, 0.0, 1.0, 30);
    double gmax = -neg_gmax;
    if (g0 > gmax) {
        gmax = g0;
        pmax = 0.0;
    }
    if (g1 > gmax) {
        gmax = g1;
        pmax = 1.0;
    }
    if (gmax < 0.0) {
        return {kPenalty - gmax, pmax};
    }
    if (g0 > 0.0 && g1 > 0.0) {
        return {kPenalty + std::min(g0, g1), g0 < g1 ? 0.0 : 1.0};
    }

    auto tol = [](double a, double b) { return std::abs(b - a) < 1e-15; };
    ConstrainedValue best{std::numeric_limits<double>::infinity(), 0.0};
    auto consider = [&](double p) {
        double v = entropy(m.zz(p), spec_z);
        if (v < best.value) best = {v, p};
    };
    if (g0 <= 0.0) {
        if (g0 == 0.0) {
            consider(0.0);
        } else {
            boost::uintmax_t iters = 100;
            auto [a, b] = boost::math::tools::toms748_solve(g, 0.0, pmax, g0, gmax, tol, iters);
            consider(std::abs(g(a)) < std::abs(g(b)) ? a : b);
        }
    }
    if (g1 <= 0.0) {
        if (g1 == 0.0) {
            consider(1.0);
        } else {
            boost::uintmax_t iters = 100;
            auto [a, b] = boost::math::tools::toms748_solve(g, pmax, 1.0, gmax, g1, tol, iters);
            consider(std::abs(g(a)) < std::abs(g(b)) ? a : b);
        }
    }
    return best;
}

Mixture mixture_from(std::span<const double> th) {
    Mixture m;
    product_distributions(th[0], th[1], m.x1, m.z1);
    product_distributions(th[2], th[3], m.x2, m.z2);
    return m;
}

// theta in [lo, hi] where the one-parameter product family f(theta) hits S_xx = s.
double solve_family(const std::function<std::array<double, 4>(double)> &xx_of, double lo, double hi,
                    double s, const EntropySpec &spec_x) {
    auto g = [&](double th) { return entropy(xx_of(th), spec_x) - s; };
    double glo = g(lo), ghi = g(hi);
    if (glo * ghi > 0.0) {
        return std::abs(glo) < std::abs(ghi) ? lo : hi;
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double gm = g(mid);
        if ((gm <= 0.0) == (glo <= 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Starts seeded with the symmetric product family and the two Shannon
// boundary families, filled up with deterministic pseudo-random angles.
std::vector<std::vector<double>> separable_starts(double s, const EntropySpec &spec_x,
                                                  const SeparableBoundOptions &options) {
    constexpr double pi = std::numbers::pi;
    std::vector<std::vector<double>> starts;
    auto xx_of = [](double th1, double th2) {
        std::array<double, 4> xx, zz;
        product_distributions(th1, th2, xx, zz);
        return xx;
    };
    double sym = solve_family([&](double th) { return xx_of(th, th); }, 0.0, pi / 2, s, spec_x);
    starts.push_back({sym, sym, sym, sym});
    double fam_a = solve_family([&](double th) { return xx_of(0.0, th); }, 0.0, pi / 2, s, spec_x);
    starts.push_back({0.0, fam_a, 0.0, fam_a});
    double fam_b = solve_family([&](double th) { return xx_of(th, pi / 2); }, 0.0, pi / 2, s, spec_x);
    starts.push_back({fam_b, pi / 2, fam_b, pi / 2});
    // Symmetric state mixed with a perturbed partner.
    starts.push_back({sym, sym, sym + 0.3, sym - 0.3});

    CounterRng rng(options.seed);
    while (static_cast<int>(starts.size()) < options.starts) {
        std::vector<double> x(4);
        for (double &v : x) v = 2.0 * pi * rng.uniform();
        starts.push_back(x);
    }
    return starts;
}

class SeparableBoundTable {
   public:
    SeparableBoundTable(const EntropySpec &spec_x, const EntropySpec &spec_z) : spec_x_(spec_x), spec_z_(spec_z) {
        smax_ = max_entropy(spec_x);
        grid_.resize(kPoints + 1);
        values_.resize(kPoints + 1);
        for (int i = 0; i <= kPoints; ++i) {
            grid_[i] = smax_ * i / kPoints;
            values_[i] = separable_bound(grid_[i], spec_x, spec_z);
        }
        monotone_ = std::is_sorted(values_.rbegin(), values_.rend());
    }

    // Exact bound when the cached bracket cannot settle the comparison.
    bool below(double s, double szz, double margin) const {
        if (monotone_ && s >= 0.0 && s <= smax_) {
            int i = std::min(kPoints - 1, static_cast<int>(s / smax_ * kPoints));
            // Decreasing bound: values_[i + 1] <= bound(s) <= values_[i].
            if (szz < values_[i + 1] - margin) return true;
            if (szz >= values_[i] - margin) return false;
        }
        return szz < separable_bound(s, spec_x_, spec_z_) - margin;
    }

    static const SeparableBoundTable &get(const EntropySpec &spec_x, const EntropySpec &spec_z) {
        static std::mutex mu;
        static std::map<std::pair<EntropySpec, EntropySpec>, std::unique_ptr<SeparableBoundTable>> cache;
        std::lock_guard lock(mu);
        auto &slot = cache[{spec_x, spec_z}];
        if (!slot) slot = std::make_unique<SeparableBoundTable>(spec_x, spec_z);
        return *slot;
    }

   private:
    static constexpr int kPoints = 32;
    EntropySpec spec_x_, spec_z_;
    double smax_ = 0.0;
    std::vector<double> grid_, values_;
    bool monotone_ = false;
};

}  // namespace

std::string_view entropy_kind_name(EntropyKind kind) {
    switch (kind) {
        case EntropyKind::Shannon:
            return "shannon";
        case EntropyKind::Tsallis:
            return "tsallis";
        case EntropyKind::Renyi:
            return "renyi";
    }
    return "?";
}

EntropyKind parse_entropy_kind(std::string_view name) {
    if (name == "shannon") return EntropyKind::Shannon;
    if (name == "tsallis") return EntropyKind::Tsallis;
    if (name == "renyi") return EntropyKind::Renyi;
    throw ParseError("unknown entropy kind '" + std::string(name) + "'");
}

EntropySpec EntropySpec::make(EntropyKind kind, double parameter) {
    if (kind == EntropyKind::Shannon) return shannon();
    if (!(parameter > 0.0) || std::isnan(parameter)) {
        throw DomainError("entropy parameter must be > 0");
    }
    if (std::isinf(parameter) && kind != EntropyKind::Renyi) {
        throw DomainError("only the Renyi entropy accepts an infinite parameter");
    }
    if (parameter == 1.0) return shannon();
    return {kind, parameter};
}

bool EntropySpec::in_bound_regime() const {
    return kind != EntropyKind::Shannon && parameter >= 2.0;
}

double entropy(const std::array<double, 4> &unsorted, const EntropySpec &spec) {
    std::array<double, 4> p = unsorted;
    std::sort(p.begin(), p.end());
    switch (spec.kind) {
        case EntropyKind::Shannon: {
            double h = 0.0;
            for (double x : p) {
                if (x > 0.0) h -= x * std::log2(x);
            }
            return h;
        }
        case EntropyKind::Tsallis: {
            double q = spec.parameter;
            if (!(q > 0.0)) throw DomainError("Tsallis parameter must be > 0");
            if (q > 50.0) {
                return -std::expm1(log_power_sum(p, q)) / (q - 1.0);
            }
            return (1.0 - power_sum(p, q)) / (q - 1.0);
        }
        case EntropyKind::Renyi: {
            double a = spec.parameter;
            if (!(a > 0.0)) throw DomainError("Renyi parameter must be > 0");
            if (std::isinf(a)) return min_entropy(p);
            return log_power_sum(p, a) / std::numbers::ln2 / (1.0 - a);
        }
    }
    return 0.0;
}

double entropy(const OutcomeDistribution &p, const EntropySpec &spec) {
    return entropy(p.p(), spec);
}

double max_entropy(const EntropySpec &spec) {
    return entropy({0.25, 0.25, 0.25, 0.25}, spec);
}

double min_entropy(const std::array<double, 4> &p) {
    return -std::log2(*std::max_element(p.begin(), p.end()));
}

PsiTDistributions psi_t_distributions(double t) {
    if (std::isnan(t) || t < 1.0) {
        throw DomainError("psi_t requires t >= 1");
    }
    return psi_u_distributions(std::isinf(t) ? 0.0 : 1.0 / t);
}

EntropyPoint psi_t_entropies(double t, const EntropySpec &spec_x, const EntropySpec &spec_z) {
    auto d = psi_t_distributions(t);
    return {entropy(d.xx, spec_x), entropy(d.zz, spec_z)};
}

double t_from_sxx(double s, const EntropySpec &spec_x) {
    require_regime(spec_x, "t_from_sxx");
    double u = u_from_sxx(s, spec_x);
    return u <= 1.0 / kTMax ? kTMax : 1.0 / u;
}

double all_states_bound(double s_xx, const EntropySpec &spec_x, const EntropySpec &spec_z) {
    require_regime(spec_x, "all_states_bound");
    require_regime(spec_z, "all_states_bound");
    double u = u_from_sxx(s_xx, spec_x);
    return entropy(psi_u_distributions(u).zz, spec_z);
}

double tsallis2_bound_closed_form(double s_xx) {
    if (!(s_xx >= 0.0 && s_xx <= 0.75 + 1e-12)) {
        throw DomainError("Tsallis-2 entropy of four outcomes lies in [0, 3/4]");
    }
    double t = std::sqrt(std::max(0.0, 9.0 - 12.0 * s_xx));
    double q = 3.0 + t + std::sqrt(3.0) * std::sqrt(std::max(0.0, (1.0 + t) * (3.0 - t)));
    return (3.0 * q * t * t - t * t * t * t) / (3.0 * q * q);
}

double tsallis2_separable_formula(double s_xx) {
    if (!(s_xx >= 0.0 && s_xx <= 0.75 + 1e-12)) {
        throw DomainError("Tsallis-2 entropy of four outcomes lies in [0, 3/4]");
    }
    return -2.25 + 3.0 * std::sqrt(1.0 - s_xx) + s_xx;
}

SeparableBoundResult separable_bound_detail(double s_xx, const EntropySpec &spec_x, const EntropySpec &spec_z,
                                            const SeparableBoundOptions &options) {
    constexpr double pi = std::numbers::pi;
    double smax = max_entropy(spec_x);
    if (!(s_xx >= 0.0 && s_xx <= smax + 1e-12)) {
        std::ostringstream msg;
        msg << "separable_bound: entropy " << s_xx << " outside attainable range [0, " << smax << "]";
        throw DomainError(msg.str());
    }
    // Endpoints: a vanishing XX entropy forces an XX eigenstate, and |00>
    // attains the maximal XX entropy with a deterministic ZZ outcome.
    if (s_xx <= 1e-14) {
        return {max_entropy(spec_z), 0.0, {pi / 2, pi / 2, pi / 2, pi / 2}, options.starts};
    }
    if (s_xx >= smax - 1e-14) {
        return {0.0, 0.0, {0.0, 0.0, 0.0, 0.0}, options.starts};
    }

    auto objective = [&](std::span<const double> th) {
        return mixture_objective(mixture_from(th), s_xx, spec_x, spec_z).value;
    };
    NelderMeadOptions nm;
    nm.step = 0.2;
    nm.size_tol = options.step_tol;
    auto results = multi_start(objective, separable_starts(s_xx, spec_x, options), nm);
    size_t best = best_index(results);
    int agree = agreeing_starts(results, options.spread_tol);
    const auto &x = results[best].x;
    if (results[best].value >= kPenalty || agree < 2) {
        std::ostringstream msg;
        msg << "separable_bound: best value " << results[best].value << " at S_xx = " << s_xx
            << " reproduced by " << agree << " of " << results.size() << " starts";
        throw ConvergenceFailure(msg.str());
    }
    auto cv = mixture_objective(mixture_from(x), s_xx, spec_x, spec_z);
    return {cv.value, cv.p, {x[0], x[1], x[2], x[3]}, agree};
}

double separable_bound(double s_xx, const EntropySpec &spec_x, const EntropySpec &spec_z) {
    return separable_bound_detail(s_xx, spec_x, spec_z).value;
}

EntropyDetection entropy_detect(const ScrambledData &d, const EntropySpec &spec_x, const EntropySpec &spec_z) {
    require_regime(spec_x, "entropy_detect");
    require_regime(spec_z, "entropy_detect");
    const auto &xx = d.multiset(Setting::XX);
    const auto &zz = d.multiset(Setting::ZZ);

    EntropyDetection out;
    out.point = {entropy(xx, spec_x), entropy(zz, spec_z)};
    out.swapped_point = {entropy(zz, spec_x), entropy(xx, spec_z)};

    const auto &table = SeparableBoundTable::get(spec_x, spec_z);
    bool direct = table.below(out.point.s_xx, out.point.s_zz, kEntropyDetectionMargin);
    bool swapped = table.below(out.swapped_point.s_xx, out.swapped_point.s_zz, kEntropyDetectionMargin);
    out.detected = direct || swapped;
    // Report exact bounds only when they matter to the caller's evidence.
    if (out.detected) {
        out.separable_bound = separable_bound(out.point.s_xx, spec_x, spec_z);
        out.swapped_separable_bound = separable_bound(out.swapped_point.s_xx, spec_x, spec_z);
    } else {
        out.separable_bound = std::numeric_limits<double>::quiet_NaN();
        out.swapped_separable_bound = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

double robustness_limit() {
    return (10.0 - std::sqrt(2.0) - std::sqrt(12.0) - std::sqrt(24.0)) / 11.0;
}

double robustness(double q) {
    if (std::isnan(q) || q < 2.0) {
        throw DomainError("robustness requires q >= 2");
    }
    if (std::isinf(q)) {
        return robustness_limit();
    }
    const double t = 3.0;
    const double s = 1.0 + std::numbers::sqrt2;
    const double root = std::sqrt(3.0 + t * t);
    const double r1 = s * s / (1.0 + s * s);
    const double r2 = s / (1.0 + s * s);
    const double r3 = 1.0 / (1.0 + s * s);
    const double log_rhs =
        2.0 * q * std::log(r1) + std::log1p(2.0 * std::pow(r2 / r1, 2.0 * q) + std::pow(r3 / r1, 2.0 * q));
    // log LHS - log RHS, decreasing in lambda.
    auto f = [&](double lambda) {
        double a = (1.0 - lambda) * t / root + lambda / 4.0;
        double b = (1.0 - lambda) / root + lambda / 4.0;
        double log_lhs = 2.0 * q * std::log(a) + std::log1p(3.0 * std::pow(b / a, 2.0 * q));
        return log_lhs - log_rhs;
    };
    double lo = 0.0, hi = 1.0;
    if (f(lo) <= 0.0) return 0.0;
    while (hi - lo > 1e-13) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace scrambled
