#include "scrambled/witness.h"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "scrambled/entropy.h"
#include "scrambled/errors.h"
#include "scrambled/optimize.h"
#include "scrambled/rng.h"

namespace scrambled {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpreadTol = 1e-6;
constexpr int kRandomStarts = 16;

void check_choice(int c, const char *name) {
    if (c < 0 || c > 3) {
        throw DomainError(std::string("witness ") + name + " must be an outcome index in 0..3");
    }
}

const OutcomeDistribution *find_setting(std::span<const OutcomeDistribution> dists, Setting s) {
    for (const auto &d : dists) {
        if (d.setting() == s) return &d;
    }
    return nullptr;
}

const OutcomeDistribution &require_setting(std::span<const OutcomeDistribution> dists, Setting s) {
    const auto *d = find_setting(dists, s);
    if (!d) {
        throw MissingSetting("labeled data has no " + std::string(setting_name(s)) + " distribution");
    }
    return *d;
}

std::array<double, 3> bloch(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::vector<std::vector<double>> witness_starts() {
    std::vector<std::vector<double>> starts;
    for (int k = 0; k < 8; ++k) {
        double th = k * kPi / 4 + kPi / 8;
        starts.push_back({th, 0.0, th, 0.0});
        starts.push_back({th, 0.0, 1.5 * kPi - th, 0.0});
    }
    CounterRng rng(0x77e55);
    for (int k = 0; k < kRandomStarts; ++k) {
        std::vector<double> x(4);
        for (double &v : x) v = 2.0 * kPi * rng.uniform();
        starts.push_back(x);
    }
    return starts;
}

// Projector expectations (Pi_x, Pi_y, Pi_z) for the product state at x.
std::array<double, 3> projector_expectations(std::span<const double> x) {
    auto a = bloch(x[0], x[1]);
    auto b = bloch(x[2], x[3]);
    return {(1 + a[0]) * (1 + b[0]) / 4, (1 + a[1]) * (1 + b[1]) / 4, (1 + a[2]) * (1 + b[2]) / 4};
}

double branch_min(const std::function<double(double)> &g) {
    constexpr int kGrid = 720;
    int best = 0;
    double best_value = g(0.0);
    for (int k = 1; k < kGrid; ++k) {
        double v = g(2 * kPi * k / kGrid);
        if (v < best_value) {
            best_value = v;
            best = k;
        }
    }
    double lo = 2 * kPi * (best - 1) / kGrid;
    double hi = 2 * kPi * (best + 1) / kGrid;
    auto [x, v] = boost::math::tools::brent_find_minima(g, lo, hi, 52);
    (void)x;
    return std::min(v, best_value);
}

}  // namespace

ComplexMatrix4 witness_matrix(const WitnessParams &w) {
    check_choice(w.choice_x, "choice_x");
    check_choice(w.choice_y, "choice_y");
    check_choice(w.choice_z, "choice_z");
    ComplexMatrix4 m = ComplexMatrix4::Identity();
    m += w.alpha * MeasurementSetting::get(Setting::XX).projectors[w.choice_x];
    m += w.beta * MeasurementSetting::get(Setting::YY).projectors[w.choice_y];
    m += w.gamma * MeasurementSetting::get(Setting::ZZ).projectors[w.choice_z];
    return m;
}

double witness_value(std::span<const OutcomeDistribution> dists, const WitnessParams &w) {
    check_choice(w.choice_x, "choice_x");
    check_choice(w.choice_y, "choice_y");
    check_choice(w.choice_z, "choice_z");
    double v = 1.0;
    if (w.alpha != 0.0) v += w.alpha * require_setting(dists, Setting::XX)[w.choice_x];
    if (w.beta != 0.0) v += w.beta * require_setting(dists, Setting::YY)[w.choice_y];
    if (w.gamma != 0.0) v += w.gamma * require_setting(dists, Setting::ZZ)[w.choice_z];
    return v;
}

ScrambledWitnessMin scrambled_witness_min_detail(const ScrambledData &d, double alpha, double beta, double gamma) {
    ScrambledWitnessMin out;
    const std::array<double, 3> coef{alpha, beta, gamma};
    for (Setting s : kAllSettings) {
        double c = coef[static_cast<int>(s)];
        if (c == 0.0) continue;
        const auto &m = d.multiset(s);
        // Sorted descending: the largest entry pairs with a negative coefficient.
        int pick = c < 0.0 ? 0 : 3;
        out.picks[static_cast<int>(s)] = pick;
        out.value += c * m[pick];
    }
    return out;
}

double scrambled_witness_min(const ScrambledData &d, double alpha, double beta, double gamma) {
    return scrambled_witness_min_detail(d, alpha, beta, gamma).value;
}

double product_expectation(std::span<const double> x, double alpha, double beta, double gamma) {
    auto e = projector_expectations(x);
    return 1.0 + alpha * e[0] + beta * e[1] + gamma * e[2];
}

SeparableMin min_over_separable_detail(double alpha, double beta, double gamma) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
        throw DomainError("witness coefficients must be finite");
    }
    auto f = [&](std::span<const double> x) { return product_expectation(x, alpha, beta, gamma); };
    NelderMeadOptions nm;
    nm.step = 0.3;
    auto results = multi_start(f, witness_starts(), nm);
    size_t best = best_index(results);
    int agree = agreeing_starts(results, kSpreadTol);
    if (agree < 2) {
        std::ostringstream msg;
        msg << "min_over_separable: best value " << results[best].value << " reproduced by " << agree
            << " of " << results.size() << " starts";
        throw ConvergenceFailure(msg.str());
    }
    // Polish the best start with a fresh small simplex.
    nm.step = 1e-3;
    auto polished = nelder_mead(f, results[best].x, nm);
    const auto &x = polished.value < results[best].value ? polished.x : results[best].x;
    return {std::min(polished.value, results[best].value), {x[0], x[1], x[2], x[3]}, agree};
}

double min_over_separable(double alpha, double beta, double gamma) {
    return min_over_separable_detail(alpha, beta, gamma).value;
}

std::vector<WitnessCurvePoint> optimize_params(double beta, int directions) {
    if (!std::isfinite(beta) || beta <= -1.0) {
        throw DomainError("optimize_params: beta must be finite and > -1");
    }
    if (directions < 1) {
        throw DomainError("optimize_params: need at least one direction");
    }
    std::vector<WitnessCurvePoint> curve;
    for (int k = 0; k < directions; ++k) {
        double angle = 0.5 * kPi + 1.5 * kPi * (k + 0.5) / directions;
        double ca = std::cos(angle), sa = std::sin(angle);
        auto sep = [&](double r) { return min_over_separable_detail(r * ca, beta, r * sa); };

        double r = 0.0;
        if (beta == 0.0) {
            // <W> - 1 is homogeneous in (alpha, gamma): one evaluation fixes the scale.
            double m = sep(1.0).value - 1.0;
            r = -1.0 / m;
        } else {
            // f(r) is concave with f(0) = 1 + min(beta, 0) > 0; Newton with a bracket.
            double lo = 0.0, hi = 1.0;
            while (sep(hi).value > 0.0) {
                lo = hi;
                hi *= 2.0;
                if (hi > 1e6) throw ConvergenceFailure("optimize_params: no tangent scale found");
            }
            r = 0.5 * (lo + hi);
            for (int it = 0; it < 100; ++it) {
                auto s = sep(r);
                if (std::abs(s.value) < 1e-11) break;
                if (s.value > 0.0) {
                    lo = r;
                } else {
                    hi = r;
                }
                auto e = projector_expectations(s.angles);
                double slope = ca * e[0] + sa * e[2];
                double next = slope < 0.0 ? r - s.value / slope : 0.5 * (lo + hi);
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                r = next;
            }
        }
        WitnessCurvePoint p{beta, r * ca, r * sa, 0.0};
        p.separable_min = min_over_separable(p.alpha, beta, p.gamma);
        curve.push_back(p);
    }
    return curve;
}

double min_over_separable_branches(double alpha, double gamma) {
    auto same = [&](double th) {
        double s = std::sin(th), c = std::cos(th);
        return 1.0 + alpha * (1 + s) * (1 + s) / 4 + gamma * (1 + c) * (1 + c) / 4;
    };
    // theta_b = 3pi/2 - theta_a: sin theta_b = -cos theta_a, cos theta_b = -sin theta_a.
    auto crossed = [&](double th) {
        double s = std::sin(th), c = std::cos(th);
        return 1.0 + alpha * (1 + s) * (1 - c) / 4 + gamma * (1 + c) * (1 - s) / 4;
    };
    return std::min(branch_min(same), branch_min(crossed));
}

WitnessCurvePoint analytic_tangent(double angle) {
    double ca = std::cos(angle), sa = std::sin(angle);
    double m = min_over_separable_branches(ca, sa) - 1.0;
    if (!(m < 0.0)) {
        throw DomainError("analytic_tangent: direction has no negative separable minimum");
    }
    double r = -1.0 / m;
    return {0.0, r * ca, r * sa, 0.0};
}

WitnessEigvec witness_min_eigvec(double alpha, double gamma) {
    if (alpha == 0.0) {
        throw DomainError("witness_min_eigvec: alpha must be nonzero");
    }
    if (!(alpha < 0.0 || gamma < 0.0)) {
        throw DomainError("witness_min_eigvec: at least one coefficient must be negative");
    }
    double t = -(alpha - 2.0 * gamma + 2.0 * std::sqrt(alpha * alpha - alpha * gamma + gamma * gamma)) / alpha;
    ComplexVector4 v(t, 1.0, 1.0, 1.0);
    return {t, PureState4::normalized(v)};
}

std::array<double, 4> correlation_witness_values(std::span<const OutcomeDistribution> dists) {
    const auto &xx = require_setting(dists, Setting::XX);
    const auto &zz = require_setting(dists, Setting::ZZ);
    double exx = xx[0] - xx[1] - xx[2] + xx[3];
    double ezz = zz[0] - zz[1] - zz[2] + zz[3];
    return {1 + exx + ezz, 1 + exx - ezz, 1 - exx + ezz, 1 - exx - ezz};
}

double min_entropy_form(double alpha, double beta, double gamma, const ScrambledData &d) {
    const std::array<double, 3> coef{alpha, beta, gamma};
    double v = 1.0;
    for (Setting s : kAllSettings) {
        double c = coef[static_cast<int>(s)];
        if (c > 0.0 || std::isnan(c)) {
            throw DomainError("min_entropy_form: coefficients must be negative");
        }
        if (c == 0.0) continue;
        v += c * std::exp2(-min_entropy(d.multiset(s)));
    }
    return v;
}

}  // namespace scrambled
