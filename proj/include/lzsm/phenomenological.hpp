// phenomenological.hpp: Lossy two-level crossing: -iΓ added to the energy of |2⟩,
// amplitudes evolved under the non-Hermitian Schrödinger equation.

#pragma once

#include "lzsm/integrator.hpp"
#include "lzsm/linalg.hpp"
#include "lzsm/propagator.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lzsm {

using Matrix2 = Eigen::Matrix<cplx, 2, 2>;
using Vector2 = Eigen::Matrix<cplx, 2, 1>;

struct PhenomParams {
    double omega{1.0};
    double kappa{1.0};
    double tau{30.0};
    double gamma_ph{0.0};

    void validate() const {
        if (!(omega > 0.0) || !(kappa > 0.0) || !(tau > 0.0))
            throw std::invalid_argument("PhenomParams: omega, kappa and tau must be > 0");
        if (!(gamma_ph >= 0.0)) throw std::invalid_argument("PhenomParams: gamma_ph must be >= 0");
    }
};

/// Microscopic and phenomenological curves are overlaid at gamma_ph = Γ.
inline PhenomParams phenom_params_from(const SystemParams& p, double gamma) {
    return {p.omega, p.kappa, p.tau, gamma};
}

inline Matrix2 phenom_hamiltonian(double t, const PhenomParams& p) {
    const double delta = p.kappa * p.kappa * t;
    Matrix2 H;
    H << -0.5 * delta, p.omega,
         p.omega, cplx(0.5 * delta, -p.gamma_ph);
    return H;
}

struct SurvivalTrajectory {
    std::vector<double> times;
    std::vector<double> p1;
    std::vector<double> p2;
    std::vector<double> norm;   // |c₁|² + |c₂|²
    IntegrationStats stats{};

    double final_p1() const { return p1.back(); }
};

/// Evolves c(-τ) = (1, 0) to t = τ. Integration runs in the frame that
/// strips the detuning phases, c_k = e^{∓iκ²t²/4} b_k, so the integrated
/// state varies on the coupling scale only; |c_k| = |b_k|. The default step
/// ceiling resolves the fastest splitting 2ε(τ) the same way the three-level
/// ceiling resolves ω₃; adaptive control handles large gamma_ph.
inline SurvivalTrajectory phenom_evolve(const PhenomParams& p, const IntegratorOptions& opts = {}) {
    p.validate();
    opts.validate();
    StepperSettings s;
    s.rel_tol = opts.rel_tol;
    s.abs_tol = opts.abs_tol;
    const double split = 2.0 * std::hypot(p.omega, 0.5 * p.kappa * p.kappa * p.tau);
    s.max_step = opts.max_step.value_or(opts.resolved_max_step(split));
    s.method = opts.method;

    SurvivalTrajectory out;
    const auto grid = uniform_grid(-p.tau, p.tau, opts.samples);
    const double k2 = p.kappa * p.kappa;
    auto rhs = [&](double t, const Vector2& b) -> Vector2 {
        const cplx w = std::polar(1.0, 0.5 * k2 * t * t);   // e^{iκ²t²/2}
        return Vector2(-I * p.omega * std::conj(w) * b(1), -I * p.omega * w * b(0) - p.gamma_ph * b(1));
    };
    auto on_sample = [&](double t, const Vector2& b) {
        out.times.push_back(t);
        out.p1.push_back(std::norm(b(0)));
        out.p2.push_back(std::norm(b(1)));
        out.norm.push_back(b.squaredNorm());
    };
    try {
        out.stats = integrate(rhs, Vector2(1.0, 0.0), std::span<const double>(grid), s, on_sample,
                              [](double, const Vector2&) {});
    } catch (const StepSizeUnderflow& e) {
        throw IntegrationFailure(std::string("phenomenological integrator failure: ") + e.what());
    }
    return out;
}

} // namespace lzsm
