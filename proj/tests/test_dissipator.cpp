#include "lzsm/dissipator.hpp"
#include "oracle/master_equation.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace lzsm;
using lzsm::test::Sampler;

namespace {

Matrix3 act(const Superoperator9& L, const Matrix3& rho) { return devectorize(L * vectorize(rho)); }

const JumpTerm& term(const JumpDecomposition& d, Transition tr) {
    for (const auto& t : d.terms)
        if (t.label == tr) return t;
    throw std::runtime_error("missing jump term");
}

} // namespace

TEST(ThermalOccupation, ZeroTemperature) {
    for (double w : {1e-3, 1.0, 999.0, 1e6}) EXPECT_EQ(thermal_occupation(w, 0.0), 0.0);
}

TEST(ThermalOccupation, UnitOccupation) {
    EXPECT_NEAR(thermal_occupation(std::log(2.0), 1.0), 1.0, 1e-14);
    EXPECT_NEAR(thermal_occupation(3.0 * std::log(2.0), 3.0), 1.0, 1e-14);
}

TEST(ThermalOccupation, HighTemperatureFrozenValue) {
    // 1/(e^{0.001} - 1) evaluated with 40 significant digits
    const double frozen = 999.5000833333319444444775;
    EXPECT_NEAR(thermal_occupation(1e3, 1e6), frozen, 1e-12 * frozen);
}

TEST(ThermalOccupation, DeepFreezeUnderflowsToZero) {
    const double n = thermal_occupation(1e3, 1.0);
    EXPECT_TRUE(std::isfinite(n));
    EXPECT_EQ(n, 0.0);
    EXPECT_EQ(thermal_occupation(1e6, 1e-3), 0.0);
}

TEST(ThermalOccupation, RejectsNonPositiveFrequency) {
    EXPECT_THROW(thermal_occupation(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(thermal_occupation(-1.0, 1.0), std::invalid_argument);
}

TEST(Rate, ZeroTemperatureEmissionOnly) {
    const BathParams b{0.7, 0.0};
    EXPECT_DOUBLE_EQ(rate(1e3, b), 0.7);
    EXPECT_EQ(rate(-1e3, b), 0.0);
}

TEST(Rate, UnitOccupation) {
    const BathParams b{1.0, 1.0};
    EXPECT_NEAR(rate(std::log(2.0), b), 2.0, 1e-14);
    EXPECT_NEAR(rate(-std::log(2.0), b), 1.0, 1e-14);
}

TEST(Rate, DetailedBalance) {
    Sampler rng(21);
    for (int k = 0; k < 5; ++k) {
        const double w = rng.log_uniform(1e-2, 1e4), th = rng.log_uniform(1e-1, 1e6);
        const BathParams b{rng.log_uniform(1e-3, 1e3), th};
        const double lhs = rate(-w, b) / rate(w, b);
        EXPECT_NEAR(lhs, std::exp(-w / th), 1e-12 * std::exp(-w / th)) << "w=" << w << " theta=" << th;
    }
}

TEST(Rate, RejectsZeroFrequency) { EXPECT_THROW(rate(0.0, BathParams{1.0, 1.0}), std::invalid_argument); }

TEST(BathParamsValidation, RejectsNegative) {
    EXPECT_THROW((BathParams{-1.0, 0.0}).validate(), std::invalid_argument);
    EXPECT_THROW((BathParams{1.0, -1.0}).validate(), std::invalid_argument);
}

TEST(JumpOperators, CrossingPointRow) {
    const SystemParams p;
    const auto d = jump_operators(spectral_at(0.0, p), p);
    ASSERT_EQ(d.terms.size(), 4u);
    const Matrix3& a = term(d, Transition::PlusExt).op;
    EXPECT_NEAR(std::abs(a(2, 0) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a(2, 1) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR((a - a(2, 0) * ket_bra(2, 0) - a(2, 1) * ket_bra(2, 1)).norm(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(term(d, Transition::PlusExt).omega, 1001.0);
}

TEST(JumpOperators, Completeness) {
    Sampler rng(22);
    for (int k = 0; k < 5; ++k) {
        SystemParams p;
        p.kappa = rng.uniform(0.5, 4.0);
        const double t = rng.uniform(-30.0, 30.0);
        const auto d = jump_operators(spectral_at(t, p), p);
        EXPECT_LE((d.sum() - coupling_operator()).cwiseAbs().maxCoeff(), 1e-12) << "t=" << t;
    }
}

TEST(JumpOperators, AdjointPairsAndRankOne) {
    SystemParams p;
    const auto d = jump_operators(spectral_at(-4.0, p), p);
    for (const auto& a : d.terms) {
        int partners = 0;
        for (const auto& b : d.terms)
            if (b.omega == -a.omega && (b.op - a.op.adjoint()).norm() < 1e-15) ++partners;
        EXPECT_EQ(partners, 1);
        const Eigen::JacobiSVD<Matrix3> svd(a.op);
        EXPECT_GT(svd.singularValues()(0), 0.0);
        EXPECT_LT(svd.singularValues()(1), 1e-14);
    }
}

TEST(JumpOperators, LargePositiveDetuningLimit) {
    SystemParams p;
    const auto d = jump_operators(spectral_at(1e8, p), p);
    EXPECT_LT(term(d, Transition::MinusExt).op.norm(), 1e-7);
    EXPECT_LT((term(d, Transition::PlusExt).op - ket_bra(2, 1)).norm(), 1e-7);
}

TEST(Liouvillian, ClosedLimitIsCommutator) {
    SystemParams p;
    const Superoperator9 L = assemble_liouvillian(0.3, p, BathParams{0.0, 5.0});
    EXPECT_EQ(L, commutator_superop(hamiltonian_at(0.3, p)));
}

TEST(Liouvillian, ShortStepMatchesSchrodinger) {
    SystemParams p;
    const Matrix3 h = hamiltonian_at(0.0, p);
    const Superoperator9 L = assemble_liouvillian(0.0, p, BathParams{});
    const Eigen::SelfAdjointEigenSolver<Matrix3> es(h);
    auto exact = [&](double dt) {
        Matrix3 u = es.eigenvectors() *
                    es.eigenvalues().unaryExpr([&](double e) { return std::exp(-I * (e * dt)); }).asDiagonal() *
                    es.eigenvectors().adjoint();
        return Matrix3(u * ket_bra(0, 0) * u.adjoint());
    };
    double prev = 0.0;
    for (double dt : {1e-3, 5e-4, 2.5e-4}) {
        const Matrix3 euler = ket_bra(0, 0) + dt * act(L, ket_bra(0, 0));
        const double err = (euler - exact(dt)).norm();
        EXPECT_LT(err, 2.0 * dt * dt);
        if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 0.1);
        prev = err;
    }
}

TEST(Liouvillian, AnnihilatesTraceAndPreservesHermiticity) {
    Sampler rng(23);
    for (int k = 0; k < 10; ++k) {
        SystemParams p;
        p.kappa = rng.uniform(0.5, 4.0);
        const double t = rng.uniform(-30.0, 30.0);
        const BathParams b{rng.log_uniform(1e-3, 1e3), k % 3 == 0 ? 0.0 : rng.log_uniform(1e-1, 1e6)};
        const Superoperator9 L = assemble_liouvillian(t, p, b);
        const Matrix3 rho = rng.hermitian();
        const Matrix3 out = act(L, rho);
        const double scale = L.norm() * rho.norm();
        EXPECT_LE(std::abs(out.trace()), 1e-12 * scale);
        EXPECT_LE((out - out.adjoint()).norm(), 1e-12 * out.norm());
    }
}

TEST(Liouvillian, MatchesIndependentMasterEquation) {
    Sampler rng(24);
    for (int k = 0; k < 20; ++k) {
        SystemParams p;
        p.kappa = rng.uniform(0.5, 4.0);
        p.omega3 = rng.log_uniform(1e2, 1e4);
        const double t = rng.uniform(-30.0, 30.0);
        const BathParams b{rng.log_uniform(1e-3, 1e3), k % 4 == 0 ? 0.0 : rng.log_uniform(1e-1, 1e6)};
        const Matrix3 rho = rng.density();
        const oracle::Bath ob{b.gamma, b.theta};
        for (bool secular : {false, true}) {
            const Matrix3 lib = act(assemble_liouvillian(t, p, b, secular ? 0.0 : 1.0), rho);
            const Matrix3 ref = oracle::rhs(t, rho, p.omega, p.kappa, p.omega3, ob, secular);
            EXPECT_LE(test::rel_diff(lib, ref), 1e-11) << "k=" << k << " secular=" << secular;
        }
    }
}

TEST(Liouvillian, CrossTermsMatter) {
    SystemParams p;
    const BathParams b{1.0, 1e4};
    const Superoperator9 full = assemble_liouvillian(0.0, p, b);
    const Superoperator9 secular = assemble_liouvillian(0.0, p, b, 0.0);
    EXPECT_GT((full - secular).norm(), 1e-3 * full.norm() / p.omega3);
    EXPECT_EQ(assemble_liouvillian(0.0, p, b, 1.0), full);
}

TEST(Liouvillian, ZeroTemperatureOnlyFeedsExternalLevel) {
    SystemParams p;
    const BathParams b{2.0, 0.0};
    for (double t : {-30.0, -1.0, 0.0, 2.0, 30.0}) {
        const SpectralData s = spectral_at(t, p);
        const Superoperator9 D = dissipator_superop(s, p, b);
        for (const Vector3& v : {s.plus(), s.minus()}) {
            const Matrix3 out = act(D, outer(v, v));
            EXPECT_GT(out(2, 2).real(), 0.0);
        }
        EXPECT_NEAR(std::abs(act(D, ket_bra(2, 2))(2, 2)), 0.0, 1e-15);
    }
}

TEST(Liouvillian, GeneratorContractsOverRandomSamples) {
    Sampler rng(25);
    for (int k = 0; k < 100; ++k) {
        SystemParams p;
        const double t = rng.uniform(-30.0, 30.0);
        const BathParams b{rng.log_uniform(1e-3, 1e3), rng.log_uniform(1e-2, 1e6)};
        const Superoperator9 L = assemble_liouvillian(t, p, b);
        const Matrix3 rho = rng.density();
        const Matrix3 out = act(L, rho);
        EXPECT_LE(std::abs(out.trace()), 1e-12 * L.norm());
        EXPECT_LE(hermiticity_defect(out), 1e-12 * std::max(1.0, max_abs(out)));
        const auto d = jump_operators(spectral_at(t, p), p);
        EXPECT_LE((d.sum() - coupling_operator()).cwiseAbs().maxCoeff(), 1e-12);
        for (const auto& j : d.terms) {
            if (j.omega < 0.0) continue;
            const double want = std::exp(-j.omega / b.theta) * rate(j.omega, b);
            EXPECT_LE(std::abs(rate(-j.omega, b) - want), 1e-12 * want + 1e-300);
        }
    }
}
