// integrator.hpp: Explicit ODE steppers for small fixed-size linear systems:
// adaptive Dormand-Prince 5(4) and fixed-step classical RK4.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lzsm {

enum class Method { DormandPrince45, ClassicalRK4 };

struct StepperSettings {
    double rel_tol{1e-8};
    double abs_tol{1e-10};
    double max_step{1e-2};        // adaptive: step ceiling; RK4: the fixed step
    Method method{Method::DormandPrince45};
    std::size_t max_steps{200'000'000};
};

/// Thrown when the adaptive step collapses (stiffness) or the step budget is exhausted.
class StepSizeUnderflow : public std::runtime_error {
public:
    StepSizeUnderflow(double t, double h, const std::string& what)
        : std::runtime_error(what), t_(t), h_(h) {}
    double time() const noexcept { return t_; }
    double step() const noexcept { return h_; }

private:
    double t_;
    double h_;
};

struct IntegrationStats {
    std::size_t accepted{0};
    std::size_t rejected{0};
    std::size_t rhs_evals{0};
};

namespace detail {

template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, double atol, double rtol) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = std::abs(err(i)) / sc;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(err.size()));
}

} // namespace detail

/// Integrates y' = f(t, y) from times.front() to times.back(), calling
/// `on_sample(t, y)` at every entry of `times` (monotone, either direction) and
/// `on_step(t, y)` after every accepted step. Steps are clipped to land on
/// sample times; the controller's proposed step is kept across clips.
template <class State, class Rhs, class SampleFn, class StepFn>
IntegrationStats integrate(Rhs&& f, State y, std::span<const double> times, const StepperSettings& opt,
                           SampleFn&& on_sample, StepFn&& on_step) {
    if (times.size() < 2) throw std::invalid_argument("integrate: need at least two sample times");
    if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0) || !(opt.max_step > 0.0))
        throw std::invalid_argument("integrate: tolerances and max_step must be > 0");

    const double dir = times.back() >= times.front() ? 1.0 : -1.0;
    IntegrationStats stats;
    double t = times.front();
    on_sample(t, y);

    if (opt.method == Method::ClassicalRK4) {
        for (std::size_t s = 1; s < times.size(); ++s) {
            const double target = times[s];
            while (dir * (target - t) > 0.0) {
                double h = dir * std::min(opt.max_step, dir * (target - t));
                const State k1 = f(t, y);
                const State k2 = f(t + 0.5 * h, (y + (0.5 * h) * k1).eval());
                const State k3 = f(t + 0.5 * h, (y + (0.5 * h) * k2).eval());
                const State k4 = f(t + h, (y + h * k3).eval());
                y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                stats.rhs_evals += 4;
                t = (dir * (target - (t + h)) <= 1e-15 * std::max(1.0, std::abs(target))) ? target : t + h;
                ++stats.accepted;
                if (stats.accepted > opt.max_steps)
                    throw StepSizeUnderflow(t, h, "integrate: step budget exhausted");
                on_step(t, y);
            }
            on_sample(t, y);
        }
        return stats;
    }

    // Dormand-Prince 5(4) tableau
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    State k1 = f(t, y);
    ++stats.rhs_evals;
    const double span = std::abs(times.back() - times.front());
    double h_prop = std::min(opt.max_step, 1e-3 * span);
    std::size_t steps = 0;

    for (std::size_t s = 1; s < times.size(); ++s) {
        const double target = times[s];
        while (dir * (target - t) > 0.0) {
            const double remaining = dir * (target - t);
            const bool clipped = h_prop >= remaining;
            const double h = dir * (clipped ? remaining : h_prop);
            const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
            if (std::abs(h) < h_floor && !clipped) {
                std::ostringstream msg;
                msg << "step size underflow at t=" << t << " (h=" << h << ")";
                throw StepSizeUnderflow(t, h, msg.str());
            }
            if (++steps > opt.max_steps) throw StepSizeUnderflow(t, h, "integrate: step budget exhausted");

            const State k2 = f(t + c2 * h, (y + h * (a21 * k1)).eval());
            const State k3 = f(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
            const State k4 = f(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
            const State k5 = f(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
            const State k6 = f(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
            const State y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const double t_new = clipped ? target : t + h;
            const State k7 = f(t_new, y_new);
            stats.rhs_evals += 6;

            const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double en = detail::scaled_error(err, y, y_new, opt.abs_tol, opt.rel_tol);
            if (!std::isfinite(en)) {
                h_prop = 0.2 * std::abs(h);
                ++stats.rejected;
                continue;
            }
            const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            if (en <= 1.0) {
                t = t_new;
                y = y_new;
                k1 = k7;
                ++stats.accepted;
                on_step(t, y);
                // a clipped step says nothing about the controller's preferred size
                const double next = std::abs(h) * factor;
                h_prop = std::min(opt.max_step, clipped ? std::max(h_prop, next) : next);
            } else {
                ++stats.rejected;
                h_prop = std::abs(h) * std::min(1.0, factor);
            }
        }
        on_sample(t, y);
    }
    return stats;
}

} // namespace lzsm
