// dissipator.hpp: Thermal flat-spectrum bath coupled through A = |2⟩⟨3| + |3⟩⟨2|,
// instantaneous jump operators in the adiabatic basis, and the full
// (non-secular) generator
//
//   dρ/dt = -i[H, ρ] + Σ_{ω,ω'} Γ(ω) [A(ω) ρ A†(ω') - A†(ω') A(ω) ρ] + H.c.
//
// Rates are real; no Lamb-shift correction is applied.

#pragma once

#include "lzsm/hamiltonian.hpp"
#include "lzsm/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lzsm {

struct BathParams {
    double gamma{0.0};   // flat spectrum |g|² D ≡ Γ
    double theta{0.0};   // k_B T in units of Ω

    void validate() const {
        if (!(gamma >= 0.0)) throw std::invalid_argument("BathParams: gamma must be >= 0");
        if (!(theta >= 0.0)) throw std::invalid_argument("BathParams: theta must be >= 0");
    }
};

/// Bose-Einstein occupation 1/(e^{ω/Θ} - 1) at ω > 0. Exactly 0 at Θ = 0.
inline double thermal_occupation(double omega, double theta) {
    if (!(omega > 0.0)) throw std::invalid_argument("thermal_occupation: omega must be > 0");
    if (theta < 0.0) throw std::invalid_argument("thermal_occupation: theta must be >= 0");
    if (theta == 0.0) return 0.0;
    // e^{-x}/(1 - e^{-x}) keeps subnormal tails instead of overflowing expm1(x)
    const double x = omega / theta;
    return std::exp(-x) / -std::expm1(-x);
}

/// Γ(ω) = Γ(1 + N(|ω|)) for emission (ω > 0), Γ N(|ω|) for absorption (ω < 0).
inline double rate(double omega, const BathParams& bath) {
    if (omega == 0.0 || !std::isfinite(omega)) throw std::invalid_argument("rate: omega must be finite and nonzero");
    const double n = thermal_occupation(std::abs(omega), bath.theta);
    return omega > 0.0 ? bath.gamma * (1.0 + n) : bath.gamma * n;
}

/// Coupling operator A = |2⟩⟨3| + |3⟩⟨2|.
inline Matrix3 coupling_operator() { return ket_bra(1, 2) + ket_bra(2, 1); }

struct JumpTerm {
    Transition label;
    double omega;
    Matrix3 op;
};

struct JumpDecomposition {
    std::vector<JumpTerm> terms;

    Matrix3 sum() const {
        Matrix3 s = Matrix3::Zero();
        for (const auto& t : terms) s += t.op;
        return s;
    }
};

/// Nonzero A(ω) for the instantaneous eigenbasis. The operators at ±2ε vanish
/// (A has no element inside span{|1⟩, |2⟩}) and are omitted.
inline JumpDecomposition jump_operators(const SpectralData& s, double omega3) {
    const double sn = std::sin(s.phi), c = std::cos(s.phi);
    const Vector3& plus = s.plus();
    const Vector3& minus = s.minus();
    const Vector3& ext = s.external();
    const double e = s.epsilon;
    JumpDecomposition d;
    d.terms = {
        {Transition::PlusExt, e + omega3, sn * outer(ext, plus)},
        {Transition::ExtPlus, -(e + omega3), sn * outer(plus, ext)},
        {Transition::MinusExt, omega3 - e, c * outer(ext, minus)},
        {Transition::ExtMinus, e - omega3, c * outer(minus, ext)},
    };
    return d;
}

inline JumpDecomposition jump_operators(const SpectralData& s, const SystemParams& p) {
    return jump_operators(s, p.omega3);
}

/// Fastest population rate Γ(1 + 2N) at the smallest jump frequency ω₃ - ε.
/// Used in stiffness diagnostics.
inline double dominant_rate(double t, const SystemParams& p, const BathParams& bath) {
    const double gap = p.omega3 - spectral_at(t, p).epsilon;
    const double n = gap > 0.0 ? thermal_occupation(gap, bath.theta) : 0.0;
    return bath.gamma * (1.0 + 2.0 * n);
}

/// Dissipative part only, without the commutator. `cross_weight` scales the
/// ω ≠ ω' terms of the double sum: 1 is the full generator, 0 the secular one.
inline Superoperator9 dissipator_superop(const SpectralData& s, const SystemParams& p, const BathParams& bath,
                                         double cross_weight = 1.0) {
    const JumpDecomposition jumps = jump_operators(s, p);
    Superoperator9 D = Superoperator9::Zero();
    if (bath.gamma == 0.0) return D;
    for (std::size_t a = 0; a < jumps.terms.size(); ++a) {
        const auto& ta = jumps.terms[a];
        const double g = rate(ta.omega, bath);
        if (g == 0.0) continue;
        // Σ_{ω'} w(ω,ω') A†(ω')
        Matrix3 partner = Matrix3::Zero();
        for (std::size_t b = 0; b < jumps.terms.size(); ++b)
            partner += (a == b ? 1.0 : cross_weight) * jumps.terms[b].op.adjoint();
        D += g * (sandwich_superop(ta.op, partner) - left_superop(partner * ta.op));
    }
    return D + adjoint_completion(D);
}

inline Superoperator9 assemble_liouvillian(double t, const SystemParams& p, const BathParams& bath,
                                           double cross_weight = 1.0) {
    const SpectralData s = spectral_at(t, p);
    return commutator_superop(hamiltonian_at(t, p)) + dissipator_superop(s, p, bath, cross_weight);
}

} // namespace lzsm
