#pragma once

/// \file quadrature.hpp
/// \brief Gauss-Legendre rules on [-1, 1].

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cpnsurf {

struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule; nodes from Newton iteration on P_n started at the Chebyshev guess.
inline GaussLegendreRule gauss_legendre(int n)
{
    if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    int const half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                double const p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            // n == 1: p1 = x, p0 = 1
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double const dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double const w = 2.0 / ((1.0 - x * x) * dp * dp);
        auto const lo = static_cast<std::size_t>(i);
        auto const hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    return rule;
}

} // namespace cpnsurf
