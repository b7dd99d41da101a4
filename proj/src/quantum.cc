#include "scrambled/quantum.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "scrambled/errors.h"
#include "scrambled/rng.h"

namespace scrambled {

namespace {

constexpr double kJacobiTol = 1e-13;
constexpr int kJacobiMaxSweeps = 64;

double off_diagonal_norm(const ComplexMatrix4 &a) {
    double s = 0.0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (r != c) {
                s += std::norm(a(r, c));
            }
        }
    }
    return std::sqrt(s);
}

// Diagonalizes a Hermitian matrix in place; on return `a` is diagonal up to
// the tolerance and v holds the eigenvectors as columns.
void jacobi(ComplexMatrix4 &a, ComplexMatrix4 &v) {
    v.setIdentity();
    double scale = std::max(1.0, a.norm());
    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) < kJacobiTol * scale) {
            return;
        }
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 4; ++q) {
                double mag = std::abs(a(p, q));
                if (mag < 1e-300) {
                    continue;
                }
                // Rotate the phase out of a(p, q) so the 2x2 block is real symmetric.
                Complex phase = std::conj(a(p, q)) / mag;
                a.col(q) *= phase;
                a.row(q) *= std::conj(phase);
                v.col(q) *= phase;

                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double tau = (aqq - app) / (2.0 * mag);
                double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;

                for (int k = 0; k < 4; ++k) {
                    Complex akp = a(k, p);
                    Complex akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < 4; ++k) {
                    Complex apk = a(p, k);
                    Complex aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < 4; ++k) {
                    Complex vkp = v(k, p);
                    Complex vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
}

ComplexMatrix4 checked_hermitian_part(const ComplexMatrix4 &h) {
    double asym = max_abs_diff(h, h.adjoint());
    if (!(asym <= kHermitianTol)) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian: max|H - H^dagger| = " << asym;
        throw NotHermitian(msg.str());
    }
    return 0.5 * (h + h.adjoint());
}

}  // namespace

PureState4::PureState4(const ComplexVector4 &amplitudes) : amplitudes_(amplitudes) {
    double n2 = amplitudes.squaredNorm();
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kNormTol) {
        std::ostringstream msg;
        msg << "pure state is not normalized: |v|^2 = " << n2;
        throw InvalidState(msg.str());
    }
}

PureState4 PureState4::normalized(const ComplexVector4 &v) {
    double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidState("cannot normalize a zero or non-finite vector");
    }
    return PureState4(v / n);
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix4 &m) {
    if (!m.allFinite()) {
        throw InvalidState("density matrix has non-finite entries");
    }
    double asym = max_abs_diff(m, m.adjoint());
    if (asym > kHermitianTol) {
        std::ostringstream msg;
        msg << "density matrix is not Hermitian: max|rho - rho^dagger| = " << asym;
        throw InvalidState(msg.str());
    }
    ComplexMatrix4 h = 0.5 * (m + m.adjoint());
    double tr = h.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
        std::ostringstream msg;
        msg << "density matrix trace is not one: Tr rho = " << tr;
        throw InvalidState(msg.str());
    }
    double lmin = min_eigenvalue(h);
    if (lmin < -kPsdTol) {
        std::ostringstream msg;
        msg << "density matrix is not positive semidefinite: min eigenvalue = " << lmin;
        throw InvalidState(msg.str());
    }
    return DensityMatrix(h);
}

DensityMatrix DensityMatrix::from_pure(const PureState4 &psi) {
    return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed() {
    return DensityMatrix(ComplexMatrix4::Identity() * 0.25);
}

double max_abs_diff(const ComplexMatrix4 &a, const ComplexMatrix4 &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix4 &m, double tol) {
    return max_abs_diff(m, m.adjoint()) <= tol;
}

EigenDecomposition eig_hermitian(const ComplexMatrix4 &h) {
    ComplexMatrix4 a = checked_hermitian_part(h);
    ComplexMatrix4 v;
    jacobi(a, v);

    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });
    EigenDecomposition out;
    for (int k = 0; k < 4; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        out.vectors[k] = v.col(order[k]);
    }
    return out;
}

double min_eigenvalue(const ComplexMatrix4 &h) {
    ComplexMatrix4 a = checked_hermitian_part(h);
    ComplexMatrix4 v;
    jacobi(a, v);
    return a.diagonal().real().minCoeff();
}

ComplexMatrix4 partial_transpose(const ComplexMatrix4 &m) {
    ComplexMatrix4 out;
    for (int a1 = 0; a1 < 2; ++a1) {
        for (int b1 = 0; b1 < 2; ++b1) {
            for (int a2 = 0; a2 < 2; ++a2) {
                for (int b2 = 0; b2 < 2; ++b2) {
                    out(2 * a1 + b1, 2 * a2 + b2) = m(2 * a1 + b2, 2 * a2 + b1);
                }
            }
        }
    }
    return out;
}

ComplexMatrix4 partial_transpose(const DensityMatrix &rho) {
    return partial_transpose(rho.matrix());
}

bool is_ppt(const DensityMatrix &rho) {
    return min_eigenvalue(partial_transpose(rho.matrix())) >= -kPsdTol;
}

DensityMatrix random_hs_state(uint64_t seed) {
    CounterRng rng(seed);
    ComplexMatrix4 g;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            double re = rng.normal();
            double im = rng.normal();
            g(r, c) = Complex(re, im);
        }
    }
    ComplexMatrix4 w = g * g.adjoint();
    w /= w.trace().real();
    return DensityMatrix::from_matrix(0.5 * (w + w.adjoint()));
}

PureState4 psi_t(double t) {
    if (!std::isfinite(t) || t < 1.0) {
        throw DomainError("psi_t requires finite t >= 1");
    }
    ComplexVector4 v(t, 1.0, 1.0, 1.0);
    return PureState4(v / std::sqrt(3.0 + t * t));
}

ComplexVector2 qubit_state(double theta, double phi) {
    return ComplexVector2(std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi));
}

PureState4 product_state(const ProductStateParams &params) {
    constexpr double pi = std::numbers::pi;
    auto theta_ok = [](double th) { return th >= 0.0 && th <= pi; };
    auto phi_ok = [](double ph) { return ph >= 0.0 && ph < 2.0 * pi; };
    if (!theta_ok(params.theta_a) || !theta_ok(params.theta_b)) {
        throw DomainError("product_state: theta must lie in [0, pi]");
    }
    if (!phi_ok(params.phi_a) || !phi_ok(params.phi_b)) {
        throw DomainError("product_state: phi must lie in [0, 2 pi)");
    }
    return PureState4::normalized(
        kron(qubit_state(params.theta_a, params.phi_a), qubit_state(params.theta_b, params.phi_b)));
}

DensityMatrix mix(const DensityMatrix &rho1, const DensityMatrix &rho2, double w) {
    if (!(w >= 0.0 && w <= 1.0)) {
        throw DomainError("mix: weight must lie in [0, 1]");
    }
    return DensityMatrix::from_matrix((1.0 - w) * rho1.matrix() + w * rho2.matrix());
}

ComplexMatrix4 kron(const ComplexMatrix2 &a, const ComplexMatrix2 &b) {
    ComplexMatrix4 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

ComplexVector4 kron(const ComplexVector2 &a, const ComplexVector2 &b) {
    return ComplexVector4(a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1));
}

namespace pauli {

const ComplexMatrix2 &identity() {
    static const ComplexMatrix2 m = ComplexMatrix2::Identity();
    return m;
}

const ComplexMatrix2 &x() {
    static const ComplexMatrix2 m = (ComplexMatrix2() << 0, 1, 1, 0).finished();
    return m;
}

const ComplexMatrix2 &y() {
    static const ComplexMatrix2 m =
        (ComplexMatrix2() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
    return m;
}

const ComplexMatrix2 &z() {
    static const ComplexMatrix2 m = (ComplexMatrix2() << 1, 0, 0, -1).finished();
    return m;
}

namespace {
const ComplexMatrix2 &by_index(int i) {
    switch (i) {
        case 0:
            return identity();
        case 1:
            return x();
        case 2:
            return y();
        case 3:
            return z();
    }
    throw DomainError("Pauli index must be 0..3");
}
}  // namespace

ComplexMatrix4 product(int i, int j) {
    return kron(by_index(i), by_index(j));
}

}  // namespace pauli

namespace states {

ComplexVector2 ket0() { return ComplexVector2(1.0, 0.0); }
ComplexVector2 ket1() { return ComplexVector2(0.0, 1.0); }
ComplexVector2 ket_plus() { return ComplexVector2(1.0, 1.0) / std::numbers::sqrt2; }
ComplexVector2 ket_minus() { return ComplexVector2(1.0, -1.0) / std::numbers::sqrt2; }
ComplexVector2 ket_y_plus() { return ComplexVector2(1.0, Complex(0, 1)) / std::numbers::sqrt2; }
ComplexVector2 ket_y_minus() { return ComplexVector2(1.0, Complex(0, -1)) / std::numbers::sqrt2; }

PureState4 singlet() {
    return PureState4::normalized(kron(ket_plus(), ket_minus()) - kron(ket_minus(), ket_plus()));
}

PureState4 phi_plus() {
    return PureState4::normalized(kron(ket0(), ket0()) + kron(ket1(), ket1()));
}

PureState4 product(const ComplexVector2 &a, const ComplexVector2 &b) {
    return PureState4::normalized(kron(a, b));
}

ComplexMatrix4 from_bloch(const std::array<std::array<double, 4>, 4> &t) {
    ComplexMatrix4 m = ComplexMatrix4::Identity();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == 0 && j == 0) {
                continue;
            }
            if (t[i][j] != 0.0) {
                m += t[i][j] * pauli::product(i, j);
            }
        }
    }
    return 0.25 * m;
}

}  // namespace states

}  // namespace scrambled
