// linalg.hpp: Fixed-size complex algebra for the three-level problem:
// 3×3 operators, the 9-component row-major vectorization and 9×9 superoperators.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lzsm {

using cplx = std::complex<double>;
using Matrix3 = Eigen::Matrix<cplx, 3, 3>;
using Vector3 = Eigen::Matrix<cplx, 3, 1>;
using StateVector9 = Eigen::Matrix<cplx, 9, 1>;
using Superoperator9 = Eigen::Matrix<cplx, 9, 9>;

inline constexpr cplx I{0.0, 1.0};

/// Position of ρ_{row,col} (zero-based) in the vectorized state.
/// Ordering is (ρ11, ρ12, ρ13, ρ21, ρ22, ρ23, ρ31, ρ32, ρ33).
constexpr int vec_index(int row, int col) noexcept { return 3 * row + col; }

inline double max_abs(const Matrix3& m) { return m.cwiseAbs().maxCoeff(); }

inline double hermiticity_defect(const Matrix3& m) { return max_abs(m - m.adjoint()); }

inline bool all_finite(const Matrix3& m) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

/// |a⟩⟨b| for basis indices a, b in {0, 1, 2}.
inline Matrix3 ket_bra(int a, int b) {
    Matrix3 m = Matrix3::Zero();
    m(a, b) = 1.0;
    return m;
}

inline Matrix3 outer(const Vector3& ket, const Vector3& bra) { return ket * bra.adjoint(); }

/// Hermitian, unit-trace 3×3 state. Positivity is not checked here; the
/// propagator monitors it instead.
class DensityMatrix {
public:
    static constexpr double hermiticity_tol = 1e-10;
    static constexpr double trace_tol = 1e-8;

    explicit DensityMatrix(const Matrix3& m) : m_(m) {
        if (!all_finite(m)) throw std::invalid_argument("DensityMatrix: non-finite entry");
        if (hermiticity_defect(m) > hermiticity_tol)
            throw std::invalid_argument("DensityMatrix: not Hermitian");
        if (std::abs(m.trace() - 1.0) > trace_tol)
            throw std::invalid_argument("DensityMatrix: trace differs from 1");
    }

    static DensityMatrix basis_projector(int k) { return DensityMatrix(ket_bra(k, k)); }
    static DensityMatrix maximally_mixed() { return DensityMatrix(Matrix3::Identity() / 3.0); }

    static DensityMatrix pure(const Vector3& psi) {
        const double n = psi.squaredNorm();
        if (n <= 0.0) throw std::invalid_argument("DensityMatrix::pure: zero vector");
        return DensityMatrix(outer(psi, psi) / n);
    }

    const Matrix3& matrix() const noexcept { return m_; }
    cplx operator()(int i, int j) const { return m_(i, j); }

private:
    Matrix3 m_;
};

inline StateVector9 vectorize(const Matrix3& m) {
    StateVector9 v;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v(vec_index(i, j)) = m(i, j);
    return v;
}

inline StateVector9 vectorize(const DensityMatrix& rho) { return vectorize(rho.matrix()); }

inline Matrix3 devectorize(const StateVector9& v) {
    Matrix3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = v(vec_index(i, j));
    return m;
}

/// Superoperator of X ↦ A·X·B in the row-major vectorization:
/// (AXB)_{ij} = Σ_{kl} A_{ik} X_{kl} B_{lj}.
inline Superoperator9 sandwich_superop(const Matrix3& A, const Matrix3& B) {
    Superoperator9 S;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) S(vec_index(i, j), vec_index(k, l)) = A(i, k) * B(l, j);
    return S;
}

/// X ↦ A·X, cheaper than sandwich_superop(A, identity).
inline Superoperator9 left_superop(const Matrix3& A) {
    Superoperator9 S = Superoperator9::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) S(vec_index(i, j), vec_index(k, j)) = A(i, k);
    return S;
}

/// X ↦ X·B.
inline Superoperator9 right_superop(const Matrix3& B) {
    Superoperator9 S = Superoperator9::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) S(vec_index(i, j), vec_index(i, l)) = B(l, j);
    return S;
}

/// X ↦ -i[H, X].
inline Superoperator9 commutator_superop(const Matrix3& H) {
    return -I * (left_superop(H) - right_superop(H));
}

/// Given the matrix of a linear map X ↦ M(X), returns the matrix of
/// X ↦ M(X†)†. Adding it to M yields the "+ H.c." completion of a generator.
inline Superoperator9 adjoint_completion(const Superoperator9& S) {
    Superoperator9 R;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    R(vec_index(i, j), vec_index(k, l)) = std::conj(S(vec_index(j, i), vec_index(l, k)));
    return R;
}

/// Eigenvalues of a Hermitian 3×3 matrix in ascending order.
///
/// Iterative tridiagonal QR on the Hermitian part, accurate near degenerate
/// spectra (pure states). Throws if the input deviates from Hermitian by more
/// than `tol` (max-abs entrywise).
inline std::array<double, 3> hermitian_eigenvalues3(const Matrix3& M, double tol = 1e-8) {
    if (!all_finite(M)) throw std::invalid_argument("hermitian_eigenvalues3: non-finite entry");
    if (hermiticity_defect(M) > tol)
        throw std::invalid_argument("hermitian_eigenvalues3: matrix is not Hermitian");

    const Matrix3 H = 0.5 * (M + M.adjoint());
    const Eigen::SelfAdjointEigenSolver<Matrix3> solver(H, Eigen::EigenvaluesOnly);
    const auto& w = solver.eigenvalues();   // ascending
    return {w(0), w(1), w(2)};
}

} // namespace lzsm
