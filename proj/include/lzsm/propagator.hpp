// propagator.hpp: Integrates dρ/dt = L(t)ρ over [-τ, τ] and records
// populations, coherences and invariant monitors.

#pragma once

#include "lzsm/dissipator.hpp"
#include "lzsm/hamiltonian.hpp"
#include "lzsm/integrator.hpp"
#include "lzsm/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lzsm {

struct IntegratorOptions {
    double rel_tol{1e-8};
    double abs_tol{1e-10};
    std::optional<double> max_step;   // default: min(1e-2, 0.1 · 2π/ω₃)
    Method method{Method::DormandPrince45};
    std::size_t samples{600};
    double cross_weight{1.0};         // 0 drops the ω ≠ ω' dissipator terms (diagnostic only)

    double resolved_max_step(double omega3) const {
        if (max_step) return *max_step;
        return std::min(1e-2, 0.1 * 2.0 * std::numbers::pi / omega3);
    }

    StepperSettings stepper(double omega3) const {
        StepperSettings s;
        s.rel_tol = rel_tol;
        s.abs_tol = abs_tol;
        s.max_step = resolved_max_step(omega3);
        s.method = method;
        return s;
    }

    void validate() const {
        if (!(rel_tol > 0.0)) throw std::invalid_argument("IntegratorOptions: rel_tol must be > 0");
        if (!(abs_tol > 0.0)) throw std::invalid_argument("IntegratorOptions: abs_tol must be > 0");
        if (max_step && !(*max_step > 0.0)) throw std::invalid_argument("IntegratorOptions: max_step must be > 0");
        if (samples < 2) throw std::invalid_argument("IntegratorOptions: samples must be >= 2");
    }
};

/// Integration failure: step collapse, or a positivity defect beyond the abort threshold.
class IntegrationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double positivity_abort_threshold = -1e-3;

using Populations = std::array<double, 3>;

inline Populations populations(const Matrix3& rho) {
    return {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()};
}

inline Populations populations(const DensityMatrix& rho) { return populations(rho.matrix()); }

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<Populations> populations;
    std::vector<std::array<cplx, 3>> coherences;   // (ρ12, ρ13, ρ23)
    double trace_error{0.0};
    double herm_error{0.0};
    double min_eig{1.0};
    Matrix3 final_state{Matrix3::Zero()};
    IntegrationStats stats{};

    const Populations& final_populations() const { return populations.back(); }
};

inline std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k)
        g[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n - 1);
    g.back() = t1;
    return g;
}

/// Propagates ρ from t_from to t_to (either direction) under the full generator.
inline TrajectoryRecord propagate(const SystemParams& params, const BathParams& bath, const Matrix3& rho0,
                                  double t_from, double t_to, const IntegratorOptions& opts = {}) {
    params.validate();
    bath.validate();
    opts.validate();

    TrajectoryRecord rec;
    const std::vector<double> grid = uniform_grid(t_from, t_to, opts.samples);
    rec.times.reserve(grid.size());
    rec.populations.reserve(grid.size());
    rec.coherences.reserve(grid.size());

    auto rhs = [&](double t, const StateVector9& y) -> StateVector9 {
        return assemble_liouvillian(t, params, bath, opts.cross_weight) * y;
    };
    auto on_step = [&](double, const StateVector9& y) {
        const cplx tr = y(0) + y(4) + y(8);
        rec.trace_error = std::max(rec.trace_error, std::abs(tr - 1.0));
        const double h = std::max({std::abs(y(1) - std::conj(y(3))), std::abs(y(2) - std::conj(y(6))),
                                   std::abs(y(5) - std::conj(y(7))), std::abs(y(0).imag()),
                                   std::abs(y(4).imag()), std::abs(y(8).imag())});
        rec.herm_error = std::max(rec.herm_error, h);
    };
    auto on_sample = [&](double t, const StateVector9& y) {
        const Matrix3 rho = devectorize(y);
        if (!all_finite(rho)) {
            std::ostringstream msg;
            msg << "integrator failure: non-finite state at t=" << t << " (dominant rate Gamma*(1+2N) = "
                << dominant_rate(t, params, bath) << "); reduce the step for this rate";
            throw IntegrationFailure(msg.str());
        }
        on_step(t, y);
        rec.times.push_back(t);
        rec.populations.push_back(populations(rho));
        rec.coherences.push_back({rho(0, 1), rho(0, 2), rho(1, 2)});
        const double lo = hermitian_eigenvalues3(rho, 1e-6)[0];
        rec.min_eig = std::min(rec.min_eig, lo);
        if (lo < positivity_abort_threshold) {
            std::ostringstream msg;
            msg << "positivity defect: min eigenvalue " << lo << " at t=" << t
                << " (dominant rate Gamma*(1+2N) = " << dominant_rate(t, params, bath)
                << "); the step ceiling or tolerances are too loose for this rate";
            throw IntegrationFailure(msg.str());
        }
        rec.final_state = rho;
    };

    try {
        rec.stats = integrate(rhs, vectorize(rho0), std::span<const double>(grid), opts.stepper(params.omega3),
                              on_sample, on_step);
    } catch (const StepSizeUnderflow& e) {
        std::ostringstream msg;
        msg << "integrator failure (stiffness) at t=" << e.time() << ": " << e.what()
            << "; dominant rate Gamma*(1+2N) = " << dominant_rate(e.time(), params, bath);
        throw IntegrationFailure(msg.str());
    }
    return rec;
}

inline TrajectoryRecord evolve(const SystemParams& params, const BathParams& bath,
                               const DensityMatrix& rho0 = DensityMatrix::basis_projector(0),
                               const IntegratorOptions& opts = {}) {
    return propagate(params, bath, rho0.matrix(), -params.tau, params.tau, opts);
}

struct ClosedSystemCheck {
    double p1_numeric;
    double p1_formula;
    double defect;
};

/// Γ = 0 run compared against the asymptotic survival formula.
inline ClosedSystemCheck closed_system_check(const SystemParams& params, const IntegratorOptions& opts = {}) {
    const auto rec = evolve(params, BathParams{0.0, 0.0}, DensityMatrix::basis_projector(0), opts);
    const double num = rec.final_populations()[0];
    const double formula = lz_survival(params.omega, params.kappa);
    return {num, formula, std::abs(num - formula)};
}

} // namespace lzsm
