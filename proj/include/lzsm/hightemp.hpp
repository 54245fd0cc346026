// hightemp.hpp: High-temperature rate equations (N(ω) ≈ Θ/ω), their order
// structure in η = ω₃/Θ and ξ = ε/ω₃, and the check that |1⟩⟨1| is a
// zero-eigenvalue eigenoperator at first order.
//
// The rate equations are transcribed term by term as published and are not
// reconciled with the full generator; consistency_vs_full() reports where the
// two disagree.

#pragma once

#include "lzsm/dissipator.hpp"
#include "lzsm/hamiltonian.hpp"
#include "lzsm/linalg.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lzsm {

struct PerturbationScales {
    double eta;   // ω₃/Θ
    double xi;    // ε/ω₃

    bool valid() const { return eta > 0.0 && eta < 1.0 && xi > 0.0 && xi < 1.0; }

    std::vector<std::string> warnings() const {
        std::vector<std::string> w;
        if (eta > 0.1) w.push_back("eta = omega3/theta > 0.1: high-temperature expansion is not controlled");
        if (xi > 0.1) w.push_back("xi = epsilon/omega3 > 0.1: external level is not far detuned");
        return w;
    }
};

inline PerturbationScales perturbation_scales(double t, const SystemParams& p, const BathParams& bath) {
    if (!(bath.theta > 0.0)) throw std::invalid_argument("perturbation_scales: theta must be > 0");
    return {p.omega3 / bath.theta, spectral_at(t, p).epsilon / p.omega3};
}

/// Rate-equation generator in the high-temperature limit. Rows for ρ21, ρ31,
/// ρ32 are the complex conjugates of those for ρ12, ρ13, ρ23.
inline Superoperator9 hight_liouvillian(double t, const SystemParams& p, const BathParams& bath) {
    if (!(bath.theta > 0.0)) throw std::invalid_argument("hight_liouvillian: theta must be > 0");
    const SpectralData s = spectral_at(t, p);
    const double G = bath.gamma, Th = bath.theta, W = p.omega, w3 = p.omega3;
    const double eps = s.epsilon, D = s.delta;
    const double den = eps * eps - w3 * w3;
    const double S = G * Th * eps * std::sin(2.0 * s.phi) / den;
    const double C = eps * std::cos(2.0 * s.phi) - w3;
    const double K = G * Th * C / den;
    const double pump = 1.0 + Th * (w3 - eps * std::cos(2.0 * s.phi)) / den;

    constexpr auto ix = vec_index;
    Superoperator9 L = Superoperator9::Zero();

    L(ix(0, 0), ix(0, 1)) = I * W;
    L(ix(0, 0), ix(1, 0)) = -I * W;

    L(ix(0, 1), ix(0, 0)) = I * W - S;
    L(ix(0, 1), ix(0, 1)) = I * D + K;
    L(ix(0, 1), ix(1, 1)) = -I * W;
    L(ix(0, 1), ix(2, 2)) = S;

    L(ix(0, 2), ix(0, 2)) = I * (w3 + 0.5 * D) - G + 0.5 * K;
    L(ix(0, 2), ix(1, 2)) = -I * W;
    L(ix(0, 2), ix(2, 1)) = S;

    L(ix(1, 1), ix(0, 1)) = -I * W - S;
    L(ix(1, 1), ix(1, 0)) = I * W - S;
    L(ix(1, 1), ix(1, 1)) = 2.0 * K;
    L(ix(1, 1), ix(2, 2)) = 2.0 * G * pump;

    L(ix(1, 2), ix(0, 2)) = -I * W - S;
    L(ix(1, 2), ix(1, 2)) = I * (w3 - 0.5 * D) - G + K;
    L(ix(1, 2), ix(2, 0)) = S;
    L(ix(1, 2), ix(2, 1)) = G * (1.0 + 2.0 * Th * (w3 - eps * std::cos(2.0 * s.phi)) / den);

    L(ix(2, 2), ix(0, 1)) = S;
    L(ix(2, 2), ix(1, 0)) = S;
    L(ix(2, 2), ix(1, 1)) = -2.0 * K;
    L(ix(2, 2), ix(2, 2)) = -2.0 * G * pump;

    // ρ̇_ji = conj(ρ̇_ij): L(ji, ba) = conj(L(ij, ab))
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}})
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) L(ix(j, i), ix(b, a)) = std::conj(L(ix(i, j), ix(a, b)));
    return L;
}

struct EntryDeviation {
    int row;            // vectorized index
    int col;
    cplx high_temp;     // value in the transcribed rate equations
    cplx full;          // value in the full generator (exact Bose factors)
    double rel_dev;     // |high_temp - full| / max(|high_temp|, |full|)
    bool persistent;    // does not shrink when Θ grows tenfold
};

struct ConsistencyReport {
    double max_rel_deviation{0.0};            // over all nonzero entries
    double max_rel_deviation_converging{0.0}; // over entries not flagged persistent
    double max_abs_deviation_converging{0.0};
    std::vector<EntryDeviation> entries;      // every entry nonzero in either generator

    std::vector<EntryDeviation> flagged() const {
        std::vector<EntryDeviation> f;
        for (const auto& e : entries)
            if (e.persistent) f.push_back(e);
        return f;
    }
};

namespace detail {

inline double entry_rel_dev(cplx a, cplx b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace detail

/// Entrywise comparison of the transcribed rate equations with the full
/// generator at temperature Θ. An entry is flagged persistent when its
/// relative deviation at 10Θ is not at least halved.
inline ConsistencyReport consistency_vs_full(double t, const SystemParams& p, const BathParams& bath) {
    const Superoperator9 ht = hight_liouvillian(t, p, bath);
    const Superoperator9 full = assemble_liouvillian(t, p, bath);
    const BathParams hotter{bath.gamma, 10.0 * bath.theta};
    const Superoperator9 ht10 = hight_liouvillian(t, p, hotter);
    const Superoperator9 full10 = assemble_liouvillian(t, p, hotter);

    ConsistencyReport r;
    const double tiny = 1e-13 * full.cwiseAbs().maxCoeff();
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) {
            if (std::abs(ht(i, j)) <= tiny && std::abs(full(i, j)) <= tiny) continue;
            const double d1 = detail::entry_rel_dev(ht(i, j), full(i, j));
            const double d2 = detail::entry_rel_dev(ht10(i, j), full10(i, j));
            const bool persistent = d1 > 1e-12 && d2 > 0.5 * d1;
            r.entries.push_back({i, j, ht(i, j), full(i, j), d1, persistent});
            r.max_rel_deviation = std::max(r.max_rel_deviation, d1);
            if (!persistent) {
                r.max_rel_deviation_converging = std::max(r.max_rel_deviation_converging, d1);
                r.max_abs_deviation_converging =
                    std::max(r.max_abs_deviation_converging, std::abs(ht(i, j) - full(i, j)));
            }
        }
    }
    return r;
}

struct EigenoperatorResidual {
    double residual;      // ‖L_HT vec(|1⟩⟨1|)‖₂, units of Ω
    double scale;         // Θ(ξη + ξ²)
    double theta;
    PerturbationScales scales;

    double ratio() const { return residual / scale; }
    // size of L_HT/Θ acting on |1⟩⟨1|; dimensionless, same footing as ξη + ξ²
    double normalized() const { return residual / theta; }
};

inline EigenoperatorResidual eigenoperator_residual(const SystemParams& p, const BathParams& bath, double t) {
    const PerturbationScales sc = perturbation_scales(t, p, bath);
    const StateVector9 out = hight_liouvillian(t, p, bath) * vectorize(ket_bra(0, 0));
    return {out.norm(), bath.theta * (sc.xi * sc.eta + sc.xi * sc.xi), bath.theta, sc};
}

enum class Order { Zero, One, Xi, Eta, XiEta, Xi2 };

inline std::string_view to_string(Order o) {
    switch (o) {
        case Order::Zero: return "0";
        case Order::One: return "O(1)";
        case Order::Xi: return "O(xi)";
        case Order::Eta: return "O(eta)";
        case Order::XiEta: return "O(xi*eta)";
        case Order::Xi2: return "O(xi^2)";
    }
    return "?";
}

using OrderTable = std::array<std::array<Order, 9>, 9>;

/// Assigns each entry of L_HT/Θ the monomial in {1, ξ, η, ξη, ξ²} closest in
/// log-magnitude (thresholds at geometric midpoints). Exact zeros stay Zero.
inline OrderTable order_classification(const SystemParams& p, const BathParams& bath, double t) {
    const PerturbationScales sc = perturbation_scales(t, p, bath);
    const Superoperator9 L = hight_liouvillian(t, p, bath) / bath.theta;
    const std::array<std::pair<Order, double>, 5> ladder{{{Order::One, 1.0},
                                                          {Order::Xi, sc.xi},
                                                          {Order::Eta, sc.eta},
                                                          {Order::XiEta, sc.xi * sc.eta},
                                                          {Order::Xi2, sc.xi * sc.xi}}};
    OrderTable table{};
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) {
            const double v = std::abs(L(i, j));
            if (v == 0.0) {
                table[i][j] = Order::Zero;
                continue;
            }
            Order best = Order::One;
            double best_dist = std::numeric_limits<double>::infinity();
            for (const auto& [label, m] : ladder) {
                const double dist = std::abs(std::log(v) - std::log(m));
                if (dist < best_dist) {
                    best_dist = dist;
                    best = label;
                }
            }
            table[i][j] = best;
        }
    }
    return table;
}

} // namespace lzsm
