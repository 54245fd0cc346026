// hamiltonian.hpp: Ideal three-level crossing model: linear chirp Δ = κ²t,
// constant coupling Ω between |1⟩ and |2⟩, and a far-detuned external level
// |3⟩ at energy -ω₃. Units: Ω sets the frequency scale, time is in Ω⁻¹.

#pragma once

#include "lzsm/linalg.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lzsm {

struct SystemParams {
    double omega{1.0};    // coupling Ω
    double kappa{1.0};    // chirp κ, Δ(t) = κ² t
    double omega3{1e3};   // |3⟩ sits at energy -ω₃
    double tau{30.0};     // evolution over [-τ, τ]

    void validate() const {
        if (!(omega > 0.0)) throw std::invalid_argument("SystemParams: omega must be > 0");
        if (!(kappa > 0.0)) throw std::invalid_argument("SystemParams: kappa must be > 0");
        if (!(omega3 > 0.0)) throw std::invalid_argument("SystemParams: omega3 must be > 0");
        if (!(tau > 0.0)) throw std::invalid_argument("SystemParams: tau must be > 0");
    }

    /// Non-fatal regime diagnostics. Empty when the closed-form survival
    /// formula applies and ω₃ is well separated from the |±⟩ doublet.
    std::vector<std::string> warnings() const;
};

inline double detuning(double t, const SystemParams& p) { return p.kappa * p.kappa * t; }

/// Half splitting ε = √(Ω² + Δ²/4) of the |±⟩ doublet.
inline double half_splitting(double delta, double omega) { return std::hypot(omega, 0.5 * delta); }

inline std::vector<std::string> SystemParams::warnings() const {
    std::vector<std::string> out;
    const double lz_time = omega / (kappa * kappa);
    if (tau < 10.0 * lz_time)
        out.push_back("tau < 10*omega/kappa^2: finite-duration survival may deviate from exp(-2 pi omega^2/kappa^2)");
    const double eps_edge = half_splitting(kappa * kappa * tau, omega);
    if (eps_edge / omega3 > 0.1)
        out.push_back("epsilon(tau)/omega3 > 0.1: external level is not well separated from the crossing doublet");
    return out;
}

inline Matrix3 hamiltonian_at(double t, const SystemParams& p) {
    const double delta = detuning(t, p);
    Matrix3 H = Matrix3::Zero();
    H(0, 0) = -0.5 * delta;
    H(1, 1) = 0.5 * delta;
    H(0, 1) = p.omega;
    H(1, 0) = p.omega;
    H(2, 2) = -p.omega3;
    return H;
}

/// Instantaneous eigensystem of the Hamiltonian at one time.
struct SpectralData {
    double delta{};
    double epsilon{};
    double phi{};                          // mixing angle, tan φ = (Δ/2 + ε)/Ω
    std::array<double, 3> energies{};      // (E₊, E₋, E₃) = (ε, -ε, -ω₃)
    std::array<Vector3, 3> eigvecs{};      // |+⟩, |−⟩, |3⟩ in the bare basis

    const Vector3& plus() const { return eigvecs[0]; }
    const Vector3& minus() const { return eigvecs[1]; }
    const Vector3& external() const { return eigvecs[2]; }

    Matrix3 reconstruct() const {
        Matrix3 H = Matrix3::Zero();
        for (std::size_t k = 0; k < 3; ++k) H += energies[k] * outer(eigvecs[k], eigvecs[k]);
        return H;
    }
};

inline SpectralData spectral_at(double t, const SystemParams& p) {
    SpectralData s;
    s.delta = detuning(t, p);
    s.epsilon = half_splitting(s.delta, p.omega);
    // For Δ < 0 the numerator Δ/2 + ε cancels; Ω²/(ε - Δ/2) is the same value without cancellation.
    const double num = s.delta >= 0.0 ? 0.5 * s.delta + s.epsilon
                                       : p.omega * p.omega / (s.epsilon - 0.5 * s.delta);
    s.phi = std::atan2(num, p.omega);
    s.energies = {s.epsilon, -s.epsilon, -p.omega3};
    const double c = std::cos(s.phi), sn = std::sin(s.phi);
    s.eigvecs[0] = Vector3(c, sn, 0.0);
    s.eigvecs[1] = Vector3(-sn, c, 0.0);
    s.eigvecs[2] = Vector3(0.0, 0.0, 1.0);
    return s;
}

/// Labels of Bohr frequencies: ω_{ab} = E_a - E_b.
enum class Transition { PlusMinus, MinusPlus, PlusExt, ExtPlus, MinusExt, ExtMinus };

inline std::string_view to_string(Transition tr) {
    switch (tr) {
        case Transition::PlusMinus: return "+-";
        case Transition::MinusPlus: return "-+";
        case Transition::PlusExt: return "+3";
        case Transition::ExtPlus: return "3+";
        case Transition::MinusExt: return "-3";
        case Transition::ExtMinus: return "3-";
    }
    return "?";
}

struct BohrFrequency {
    Transition label;
    double omega;
    bool zero_operator;   // the coupling has no matrix element for this transition
};

inline std::vector<BohrFrequency> bohr_frequencies(const SpectralData& s, const SystemParams& p) {
    const double e = s.epsilon, w3 = p.omega3;
    return {
        {Transition::PlusExt, e + w3, false},
        {Transition::ExtPlus, -(e + w3), false},
        {Transition::MinusExt, w3 - e, false},
        {Transition::ExtMinus, e - w3, false},
        {Transition::PlusMinus, 2.0 * e, true},
        {Transition::MinusPlus, -2.0 * e, true},
    };
}

/// Asymptotic survival probability of |1⟩ for the closed two-level sweep.
inline double lz_survival(double omega, double kappa) {
    if (!(omega > 0.0) || !(kappa > 0.0)) throw std::invalid_argument("lz_survival: omega and kappa must be > 0");
    return std::exp(-2.0 * std::numbers::pi * omega * omega / (kappa * kappa));
}

} // namespace lzsm
