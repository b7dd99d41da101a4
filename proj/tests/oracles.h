#pragma once

// Reference computations used only by tests. Each one takes a route that is
// independent of the library implementation it checks: Eigen's eigensolver
// instead of the Jacobi sweep, Pauli-coefficient bookkeeping instead of index
// shuffles, hand-written outcome actions instead of projector conjugation,
// and direct searches instead of the library optimizers.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <gsl/gsl_multimin.h>
#include <numbers>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M4 = Eigen::Matrix4cd;
using M2 = Eigen::Matrix2cd;
using V4 = Eigen::Vector4cd;

inline M2 pauli(int k) {
    M2 m;
    switch (k) {
        case 0:
            m << 1, 0, 0, 1;
            break;
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, C(0, -1), C(0, 1), 0;
            break;
        default:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

inline M4 kron(const M2 &a, const M2 &b) {
    M4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return out;
}

inline Eigen::Vector4d eigenvalues(const M4 &h) {
    Eigen::SelfAdjointEigenSolver<M4> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double min_eig(const M4 &h) {
    return eigenvalues(h)(0);
}

/// Real Pauli coefficients t_ij = Tr(rho sigma_i (x) sigma_j).
inline std::array<std::array<double, 4>, 4> bloch(const M4 &rho) {
    std::array<std::array<double, 4>, 4> t{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[i][j] = (rho * kron(pauli(i), pauli(j))).trace().real();
    return t;
}

inline M4 from_bloch(const std::array<std::array<double, 4>, 4> &t) {
    M4 rho = M4::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rho += t[i][j] * kron(pauli(i), pauli(j));
    return rho / 4.0;
}

/// Partial transpose on B: sigma_y^T = -sigma_y, the other Paulis are symmetric.
inline M4 partial_transpose(const M4 &rho) {
    auto t = bloch(rho);
    for (int i = 0; i < 4; ++i) t[i][2] = -t[i][2];
    return from_bloch(t);
}

/// Outcome probabilities from local Bloch-vector projectors (1 +- n.sigma)/2.
inline std::array<double, 4> measure(const M4 &rho, int axis) {
    std::array<double, 4> p{};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            M2 pa = 0.5 * (pauli(0) + (a == 0 ? 1.0 : -1.0) * pauli(axis));
            M2 pb = 0.5 * (pauli(0) + (b == 0 ? 1.0 : -1.0) * pauli(axis));
            p[2 * a + b] = (rho * kron(pa, pb)).trace().real();
        }
    }
    return p;
}

inline double tsallis(const std::array<double, 4> &p, double q) {
    double s = 0.0;
    for (double x : p) s += std::pow(x, q);
    return (1.0 - s) / (q - 1.0);
}

inline double renyi(const std::array<double, 4> &p, double a) {
    double s = 0.0;
    for (double x : p) s += std::pow(x, a);
    return std::log2(s) / (1.0 - a);
}

inline double shannon(const std::array<double, 4> &p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0) h -= x * std::log2(x);
    return h;
}

/// (t, 1, 1, 1) normalized, as an explicit vector.
inline V4 psi_t(double t) {
    V4 v(t, 1, 1, 1);
    return v / v.norm();
}

// Relabeling actions written out by hand on outcome pairs (a, b) -> index 2a + b.
// sigma_x on a qubit flips its Z outcome and fixes its X outcome; sigma_z flips
// the X outcome and fixes the Z outcome; SWAP exchanges a and b in both settings.
using Perm = std::array<int, 4>;
using Action = std::pair<Perm, Perm>;  // (on XX indices, on ZZ indices)

inline Perm flip_a() { return {2, 3, 0, 1}; }
inline Perm flip_b() { return {1, 0, 3, 2}; }
inline Perm swap_ab() { return {0, 2, 1, 3}; }
inline Perm ident() { return {0, 1, 2, 3}; }

inline Perm compose(const Perm &f, const Perm &g) {
    Perm out{};
    for (int i = 0; i < 4; ++i) out[i] = f[g[i]];
    return out;
}

inline std::vector<Action> relabeling_group() {
    const std::vector<Action> gens{{ident(), flip_a()}, {flip_a(), ident()}, {ident(), flip_b()},
                                   {flip_b(), ident()}, {swap_ab(), swap_ab()}};
    std::set<Action> seen{{ident(), ident()}};
    std::vector<Action> group{{ident(), ident()}};
    for (size_t k = 0; k < group.size(); ++k) {
        for (const auto &g : gens) {
            Action n{compose(g.first, group[k].first), compose(g.second, group[k].second)};
            if (seen.insert(n).second) group.push_back(n);
        }
    }
    return group;
}

/// Number of orbits of the 576 (pi_x, pi_z) pairs under relabeling.
inline int orbit_count() {
    auto group = relabeling_group();
    std::vector<Perm> perms;
    Perm p = ident();
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::set<std::pair<Perm, Perm>> covered;
    int orbits = 0;
    for (const auto &px : perms) {
        for (const auto &pz : perms) {
            if (covered.count({px, pz})) continue;
            ++orbits;
            for (const auto &g : group) covered.insert({compose(g.first, px), compose(g.second, pz)});
        }
    }
    return orbits;
}

/// Minimum of 1 + sum_k c_k (1 + a_k)(1 + b_k)/4 over unit Bloch vectors a, b.
/// For fixed a the expression is affine in b, so the b-minimum is exact; the
/// remaining sphere is searched on a grid and refined by compass search.
inline double witness_product_min(double alpha, double beta, double gamma) {
    const std::array<double, 3> c{alpha, beta, gamma};
    auto reduced = [&](double th, double ph) {
        std::array<double, 3> a{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        double base = 1.0, n2 = 0.0;
        for (int k = 0; k < 3; ++k) {
            double v = c[k] * (1 + a[k]) / 4;
            base += v;
            n2 += v * v;
        }
        return base - std::sqrt(n2);
    };
    constexpr double pi = std::numbers::pi;
    std::vector<std::pair<double, std::pair<double, double>>> seeds;
    const int nt = 120, np = 240;
    for (int i = 0; i <= nt; ++i) {
        for (int j = 0; j < np; ++j) {
            double th = pi * i / nt, ph = 2 * pi * j / np;
            seeds.push_back({reduced(th, ph), {th, ph}});
        }
    }
    std::partial_sort(seeds.begin(), seeds.begin() + 8, seeds.end());
    double best = seeds.front().first;
    for (int s = 0; s < 8; ++s) {
        auto [th, ph] = seeds[s].second;
        double f = seeds[s].first;
        for (double step = 0.05; step > 1e-13;) {
            bool moved = false;
            for (auto [dt, dp] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}) {
                double v = reduced(th + dt * step, ph + dp * step);
                if (v < f) {
                    f = v;
                    th += dt * step;
                    ph += dp * step;
                    moved = true;
                    break;
                }
            }
            if (!moved) step *= 0.5;
        }
        best = std::min(best, f);
    }
    return best;
}

// Constraint-violation oracle for the unscrambled feasibility problem. The
// constraints fix the Pauli coefficients of I, X and Z on each side and of XX
// and ZZ; the nine remaining coefficients are free. The violation
//     V_tau(x) = sum over eigenvalues below tau of rho(x) and rho(x)^T_B of (lambda - tau)^2
// is convex and continuously differentiable, and is minimized by BFGS from
// several starts. V_0 = 0 iff a PPT state matches the data.
struct ViolationProblem {
    std::array<std::array<double, 4>, 4> base{};
    static constexpr std::array<std::pair<int, int>, 9> free{
        std::pair{0, 2}, {2, 0}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 2}, {2, 3}, {3, 2}};
    std::array<M4, 9> basis;
    std::array<M4, 9> basis_pt;
    double tau = 0.0;

    ViolationProblem(const std::array<double, 4> &pxx, const std::array<double, 4> &pzz) {
        base[0][0] = 1.0;
        base[1][0] = pxx[0] + pxx[1] - pxx[2] - pxx[3];
        base[0][1] = pxx[0] - pxx[1] + pxx[2] - pxx[3];
        base[1][1] = pxx[0] - pxx[1] - pxx[2] + pxx[3];
        base[3][0] = pzz[0] + pzz[1] - pzz[2] - pzz[3];
        base[0][3] = pzz[0] - pzz[1] + pzz[2] - pzz[3];
        base[3][3] = pzz[0] - pzz[1] - pzz[2] + pzz[3];
        for (int k = 0; k < 9; ++k) {
            basis[k] = kron(pauli(free[k].first), pauli(free[k].second)) / 4.0;
            basis_pt[k] = (free[k].second == 2 ? -1.0 : 1.0) * basis[k];
        }
    }

    M4 rho(const double *x) const {
        M4 m = from_bloch(base);
        for (int k = 0; k < 9; ++k) m += x[k] * basis[k];
        return m;
    }

    M4 rho_pt(const double *x) const {
        M4 m = partial_transpose(from_bloch(base));
        for (int k = 0; k < 9; ++k) m += x[k] * basis_pt[k];
        return m;
    }

    double value(const double *x, double *grad) const {
        double v = 0.0;
        if (grad) std::fill(grad, grad + 9, 0.0);
        for (int part = 0; part < 2; ++part) {
            M4 m = part == 0 ? rho(x) : rho_pt(x);
            const auto &b = part == 0 ? basis : basis_pt;
            Eigen::SelfAdjointEigenSolver<M4> es(m);
            for (int i = 0; i < 4; ++i) {
                double d = es.eigenvalues()(i) - tau;
                if (d >= 0) continue;
                v += d * d;
                if (grad) {
                    V4 u = es.eigenvectors().col(i);
                    for (int k = 0; k < 9; ++k) grad[k] += 2 * d * (u.adjoint() * b[k] * u)(0).real();
                }
            }
        }
        return v;
    }
};

inline double gsl_violation_f(const gsl_vector *x, void *p) {
    return static_cast<const ViolationProblem *>(p)->value(x->data, nullptr);
}

inline void gsl_violation_df(const gsl_vector *x, void *p, gsl_vector *g) {
    static_cast<const ViolationProblem *>(p)->value(x->data, g->data);
}

inline void gsl_violation_fdf(const gsl_vector *x, void *p, double *f, gsl_vector *g) {
    *f = static_cast<const ViolationProblem *>(p)->value(x->data, g->data);
}

/// Smallest violation found over `starts` BFGS runs.
/// Stops early once the violation is at most `target`.
inline double min_violation(ViolationProblem &problem, double tau, double target = 0.0, int starts = 4,
                            uint64_t seed = 7) {
    problem.tau = tau;
    gsl_multimin_function_fdf fn{&gsl_violation_f, &gsl_violation_df, &gsl_violation_fdf, 9, &problem};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    double best = 1e300;
    gsl_vector *x = gsl_vector_alloc(9);
    gsl_multimin_fdfminimizer *s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, 9);
    for (int r = 0; r < starts && best > target; ++r) {
        for (int k = 0; k < 9; ++k) gsl_vector_set(x, k, r == 0 ? 0.0 : u(rng));
        gsl_multimin_fdfminimizer_set(s, &fn, x, 0.05, 0.1);
        for (int it = 0; it < 2000; ++it) {
            if (gsl_multimin_fdfminimizer_iterate(s)) break;
            if (s->f <= target) break;
            if (gsl_multimin_test_gradient(s->gradient, 1e-14) == GSL_SUCCESS) break;
        }
        best = std::min(best, s->f);
    }
    gsl_multimin_fdfminimizer_free(s);
    gsl_vector_free(x);
    return best;
}

enum class OracleVerdict { Feasible, Infeasible, Marginal };

/// Infeasible when the violation stays above margin^2 (some eigenvalue below
/// -margin everywhere); feasible when a matching state with both spectra
/// above 1.5 margin is found; marginal otherwise.
inline OracleVerdict feasibility_oracle(const std::array<double, 4> &pxx, const std::array<double, 4> &pzz,
                                        double margin = 1e-5) {
    ViolationProblem p(pxx, pzz);
    if (min_violation(p, 2 * margin, 0.25 * margin * margin) <= 0.25 * margin * margin) return OracleVerdict::Feasible;
    if (min_violation(p, 0.0) >= margin * margin) return OracleVerdict::Infeasible;
    return OracleVerdict::Marginal;
}

}  // namespace oracle
