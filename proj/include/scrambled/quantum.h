#pragma once

// Two-qubit linear algebra.
//
// Basis order is |00>, |01>, |10>, |11> with the first tensor factor being
// party A. All matrices are 4x4 complex, row-major when serialized.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>

namespace scrambled {

using Complex = std::complex<double>;
using ComplexMatrix4 = Eigen::Matrix4cd;
using ComplexMatrix2 = Eigen::Matrix2cd;
using ComplexVector4 = Eigen::Vector4cd;
using ComplexVector2 = Eigen::Vector2cd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kNormTol = 1e-12;

/// Normalized two-qubit state vector.
class PureState4 {
   public:
    /// Throws InvalidState unless | |v|^2 - 1 | <= 1e-12.
    explicit PureState4(const ComplexVector4 &amplitudes);
    static PureState4 normalized(const ComplexVector4 &v);

    const ComplexVector4 &amplitudes() const { return amplitudes_; }
    Complex operator[](int i) const { return amplitudes_(i); }
    ComplexMatrix4 projector() const { return amplitudes_ * amplitudes_.adjoint(); }

   private:
    ComplexVector4 amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite 4x4 matrix.
class DensityMatrix {
   public:
    /// Validates the invariants; the InvalidState message names the violated one.
    static DensityMatrix from_matrix(const ComplexMatrix4 &m);
    static DensityMatrix from_pure(const PureState4 &psi);
    static DensityMatrix maximally_mixed();

    const ComplexMatrix4 &matrix() const { return matrix_; }
    Complex operator()(int r, int c) const { return matrix_(r, c); }
    double expectation(const ComplexMatrix4 &op) const { return (matrix_ * op).trace().real(); }

   private:
    explicit DensityMatrix(const ComplexMatrix4 &m) : matrix_(m) {}
    ComplexMatrix4 matrix_;
};

struct EigenDecomposition {
    /// Sorted descending.
    std::array<double, 4> values;
    /// Orthonormal, vectors[i] belongs to values[i].
    std::array<ComplexVector4, 4> vectors;
};

/// Cyclic complex Jacobi. Throws NotHermitian if max|H - H^dagger| > 1e-10.
EigenDecomposition eig_hermitian(const ComplexMatrix4 &h);
/// Smallest eigenvalue only (same algorithm).
double min_eigenvalue(const ComplexMatrix4 &h);

double max_abs_diff(const ComplexMatrix4 &a, const ComplexMatrix4 &b);
bool is_hermitian(const ComplexMatrix4 &m, double tol = kHermitianTol);

/// Transpose on the second tensor factor.
ComplexMatrix4 partial_transpose(const ComplexMatrix4 &m);
ComplexMatrix4 partial_transpose(const DensityMatrix &rho);

/// Min eigenvalue of rho^{T_B} >= -1e-9; equivalent to separability for two qubits.
bool is_ppt(const DensityMatrix &rho);

/// GG^dagger / Tr(GG^dagger) with G complex Ginibre drawn from CounterRng(seed).
DensityMatrix random_hs_state(uint64_t seed);

/// (t|00> + |01> + |10> + |11>)/sqrt(3 + t^2) for finite t >= 1.
PureState4 psi_t(double t);

/// Angles of cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> on each qubit.
struct ProductStateParams {
    double theta_a = 0.0;
    double phi_a = 0.0;
    double theta_b = 0.0;
    double phi_b = 0.0;
};

/// Throws DomainError unless theta in [0, pi] and phi in [0, 2 pi).
PureState4 product_state(const ProductStateParams &params);
/// Same construction for arbitrary real angles; used by optimizers.
ComplexVector2 qubit_state(double theta, double phi);

/// (1 - w) rho1 + w rho2, w in [0, 1].
DensityMatrix mix(const DensityMatrix &rho1, const DensityMatrix &rho2, double w);

ComplexMatrix4 kron(const ComplexMatrix2 &a, const ComplexMatrix2 &b);
ComplexVector4 kron(const ComplexVector2 &a, const ComplexVector2 &b);

namespace pauli {
const ComplexMatrix2 &identity();
const ComplexMatrix2 &x();
const ComplexMatrix2 &y();
const ComplexMatrix2 &z();
/// sigma_i (x) sigma_j with index 0 = identity, 1..3 = x, y, z.
ComplexMatrix4 product(int i, int j);
}  // namespace pauli

namespace states {
ComplexVector2 ket0();
ComplexVector2 ket1();
ComplexVector2 ket_plus();
ComplexVector2 ket_minus();
/// (|0> + i|1>)/sqrt 2 and (|0> - i|1>)/sqrt 2.
ComplexVector2 ket_y_plus();
ComplexVector2 ket_y_minus();

/// (|+-> - |-+>)/sqrt 2.
PureState4 singlet();
/// (|00> + |11>)/sqrt 2.
PureState4 phi_plus();
PureState4 product(const ComplexVector2 &a, const ComplexVector2 &b);
/// 1/4 (Id + sum_ij t_ij sigma_i (x) sigma_j) from a 4x4 real correlation table, t_00 ignored.
ComplexMatrix4 from_bloch(const std::array<std::array<double, 4>, 4> &t);
}  // namespace states

}  // namespace scrambled
