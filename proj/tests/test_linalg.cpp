#include "lzsm/linalg.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace lzsm;
using lzsm::test::Sampler;

TEST(Vectorize, BasisProjector) {
    const StateVector9 v = vectorize(DensityMatrix::basis_projector(0));
    for (int k = 0; k < 9; ++k) EXPECT_EQ(v(k), cplx(k == 0 ? 1.0 : 0.0));
}

TEST(Vectorize, MaximallyMixed) {
    const StateVector9 v = vectorize(DensityMatrix::maximally_mixed());
    for (int k = 0; k < 9; ++k) EXPECT_EQ(v(k), cplx((k == 0 || k == 4 || k == 8) ? 1.0 / 3.0 : 0.0));
}

TEST(Vectorize, EqualSuperposition) {
    const Vector3 psi = Vector3(1.0, 1.0, 0.0) / std::sqrt(2.0);
    const StateVector9 v = vectorize(DensityMatrix::pure(psi));
    const double want[9] = {0.5, 0.5, 0, 0.5, 0.5, 0, 0, 0, 0};
    for (int k = 0; k < 9; ++k) EXPECT_NEAR(std::abs(v(k) - want[k]), 0.0, 1e-15);
}

TEST(Vectorize, RowMajorOrdering) {
    StateVector9 v = StateVector9::Zero();
    v(1) = 1.0;
    const Matrix3 m = devectorize(v);
    EXPECT_EQ(m, ket_bra(0, 1));
    EXPECT_EQ(devectorize(StateVector9::Unit(0)), ket_bra(0, 0));
}

TEST(Vectorize, RoundTripIsExact) {
    Sampler rng(11);
    for (int k = 0; k < 3; ++k) {
        const Matrix3 m = rng.matrix();
        EXPECT_EQ(devectorize(vectorize(m)), m);
        StateVector9 v;
        for (int i = 0; i < 9; ++i) v(i) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        EXPECT_EQ(vectorize(devectorize(v)), v);
    }
    const Matrix3 rho = rng.density();
    EXPECT_EQ(devectorize(vectorize(DensityMatrix(rho))), rho);
}

TEST(DensityMatrixValidation, RejectsBadInput) {
    EXPECT_THROW(DensityMatrix(ket_bra(0, 1)), std::invalid_argument);
    EXPECT_THROW(DensityMatrix(Matrix3::Identity()), std::invalid_argument);
    Matrix3 m = ket_bra(0, 0);
    m(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(DensityMatrix{m}, std::invalid_argument);
}

TEST(Sandwich, IdentityGivesIdentity) {
    EXPECT_EQ(sandwich_superop(Matrix3::Identity(), Matrix3::Identity()), Superoperator9::Identity());
}

TEST(Sandwich, SingleEntryShuffle) {
    const StateVector9 out = sandwich_superop(ket_bra(2, 1), ket_bra(1, 2)) * vectorize(ket_bra(1, 1));
    EXPECT_EQ(devectorize(out), ket_bra(2, 2));
}

TEST(Sandwich, MatchesDirectProduct) {
    Sampler rng(5);
    for (int k = 0; k < 5; ++k) {
        const Matrix3 A = rng.matrix(), B = rng.matrix(), X = rng.matrix();
        const Matrix3 direct = A * X * B;
        const Matrix3 via = devectorize(sandwich_superop(A, B) * vectorize(X));
        EXPECT_LE(test::rel_diff(via, direct), 1e-12);
    }
}

TEST(Sandwich, RespectsComposition) {
    Sampler rng(6);
    for (int k = 0; k < 20; ++k) {
        const Matrix3 A1 = rng.matrix(), B1 = rng.matrix(), A2 = rng.matrix(), B2 = rng.matrix(), X = rng.matrix();
        const Matrix3 lhs = devectorize(sandwich_superop(A1, B1) * sandwich_superop(A2, B2) * vectorize(X));
        EXPECT_LE(test::rel_diff(lhs, A1 * A2 * X * B2 * B1), 1e-12);
    }
}

TEST(Superoperators, CommutatorAndAdjointCompletion) {
    Sampler rng(7);
    const Matrix3 H = rng.hermitian(), X = rng.matrix(), A = rng.matrix(), B = rng.matrix();
    const Matrix3 c = devectorize(commutator_superop(H) * vectorize(X));
    EXPECT_LE(test::rel_diff(c, -I * (H * X - X * H)), 1e-13);
    // X ↦ (S X†)† for S = sandwich(A, B) is X ↦ B† X A†
    const Matrix3 hc = devectorize(adjoint_completion(sandwich_superop(A, B)) * vectorize(X));
    EXPECT_LE(test::rel_diff(hc, B.adjoint() * X * A.adjoint()), 1e-13);
}

TEST(Eigenvalues, Diagonal) {
    Matrix3 m = Matrix3::Zero();
    m.diagonal() << -1.0, 2.0, 0.0;
    const auto ev = hermitian_eigenvalues3(m);
    EXPECT_NEAR(ev[0], -1.0, 1e-14);
    EXPECT_NEAR(ev[1], 0.0, 1e-14);
    EXPECT_NEAR(ev[2], 2.0, 1e-14);
}

TEST(Eigenvalues, CrossingPointHamiltonian) {
    Matrix3 h = Matrix3::Zero();
    h(0, 1) = h(1, 0) = 1.0;
    h(2, 2) = -1000.0;
    const auto ev = hermitian_eigenvalues3(h);
    EXPECT_NEAR(ev[0], -1000.0, 1e-10 * 1000.0);
    EXPECT_NEAR(ev[1], -1.0, 1e-10 * 1000.0);
    EXPECT_NEAR(ev[2], 1.0, 1e-10 * 1000.0);
}

TEST(Eigenvalues, DegeneratePureState) {
    const auto ev = hermitian_eigenvalues3(ket_bra(0, 0));
    EXPECT_NEAR(ev[0], 0.0, 1e-15);
    EXPECT_NEAR(ev[1], 0.0, 1e-15);
    EXPECT_NEAR(ev[2], 1.0, 1e-15);
}

TEST(Eigenvalues, TraceAndDeterminantIdentities) {
    Sampler rng(8);
    for (int k = 0; k < 50; ++k) {
        const Matrix3 m = rng.hermitian();
        const auto ev = hermitian_eigenvalues3(m);
        EXPECT_LE(ev[0], ev[1]);
        EXPECT_LE(ev[1], ev[2]);
        const double scale = m.norm();
        EXPECT_NEAR(ev[0] + ev[1] + ev[2], m.trace().real(), 1e-10 * scale);
        EXPECT_NEAR(ev[0] * ev[1] * ev[2], m.determinant().real(), 1e-10 * scale * scale * scale);
    }
}

TEST(Eigenvalues, RejectsNonHermitian) {
    EXPECT_THROW(hermitian_eigenvalues3(ket_bra(0, 1)), std::invalid_argument);
    Matrix3 m = Matrix3::Identity();
    m(0, 1) = 1e-9;   // within the 1e-8 symmetrization tolerance
    EXPECT_NO_THROW(hermitian_eigenvalues3(m));
}
