// Shared helpers for the test suite: seeded random operators and norms.

#pragma once

#include "lzsm/linalg.hpp"

#include <random>

namespace lzsm::test {

class Sampler {
public:
    explicit Sampler(unsigned seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

    Matrix3 matrix() {
        Matrix3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = cplx(normal_(gen_), normal_(gen_));
        return m;
    }

    Matrix3 hermitian() {
        const Matrix3 m = matrix();
        return 0.5 * (m + m.adjoint());
    }

    /// Random full-rank density matrix (G G† normalized).
    Matrix3 density() {
        const Matrix3 g = matrix();
        Matrix3 r = g * g.adjoint();
        r /= r.trace().real();
        return 0.5 * (r + r.adjoint());
    }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double rel_diff(const Matrix3& a, const Matrix3& b) {
    const double scale = std::max(a.norm(), b.norm());
    return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

} // namespace lzsm::test
