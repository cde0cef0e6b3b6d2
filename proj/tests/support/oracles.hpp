#pragma once

// Test-only oracles. Nothing here goes through the jet arithmetic under test: polynomials in
// (xi, conj xi) are differentiated symbolically, everything else by central finite differences
// or plain value-level linear algebra.

#include <cpnsurf/holo.hpp>
#include <cpnsurf/jets.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace cpnsurf::oracle {

/// sum c[p][q] xi^p conj(xi)^q
struct BivariatePolynomial {
    std::vector<std::vector<complex>> c;

    complex operator()(complex xi) const
    {
        complex acc{};
        for (std::size_t p = 0; p < c.size(); ++p)
            for (std::size_t q = 0; q < c[p].size(); ++q)
                acc += c[p][q] * std::pow(xi, static_cast<int>(p)) * std::pow(std::conj(xi), static_cast<int>(q));
        return acc;
    }

    /// Exact d^a dbar^b at xi, by falling factorials.
    complex derivative(complex xi, int a, int b) const
    {
        complex acc{};
        for (std::size_t p = 0; p < c.size(); ++p)
            for (std::size_t q = 0; q < c[p].size(); ++q) {
                int const ip = static_cast<int>(p);
                int const iq = static_cast<int>(q);
                if (ip < a || iq < b) continue;
                double fall = 1.0;
                for (int i = 0; i < a; ++i) fall *= ip - i;
                for (int i = 0; i < b; ++i) fall *= iq - i;
                acc += c[p][q] * fall * std::pow(xi, ip - a) * std::pow(std::conj(xi), iq - b);
            }
        return acc;
    }

    WirtingerJet jet(complex xi, JetOrder o) const
    {
        WirtingerJet j(xi, o);
        for (int a = 0; a <= o.a_max; ++a)
            for (int b = 0; b <= o.b_max; ++b) j.at(a, b) = derivative(xi, a, b);
        return j;
    }

    friend BivariatePolynomial operator*(BivariatePolynomial const& u, BivariatePolynomial const& v)
    {
        BivariatePolynomial out;
        out.c.assign(u.c.size() + v.c.size() - 1, std::vector<complex>(u.c[0].size() + v.c[0].size() - 1));
        for (std::size_t p = 0; p < u.c.size(); ++p)
            for (std::size_t q = 0; q < u.c[p].size(); ++q)
                for (std::size_t r = 0; r < v.c.size(); ++r)
                    for (std::size_t s = 0; s < v.c[r].size(); ++s) out.c[p + r][q + s] += u.c[p][q] * v.c[r][s];
        return out;
    }
};

inline BivariatePolynomial random_bivariate(std::mt19937& rng, int degree)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BivariatePolynomial p;
    p.c.assign(static_cast<std::size_t>(degree) + 1, std::vector<complex>(static_cast<std::size_t>(degree) + 1));
    for (int i = 0; i <= degree; ++i)
        for (int j = 0; i + j <= degree; ++j) p.c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = {u(rng), u(rng)};
    return p;
}

inline complex random_point(std::mt19937& rng, double radius = 2.0)
{
    std::uniform_real_distribution<double> u(-radius, radius);
    for (;;) {
        complex z{u(rng), u(rng)};
        if (std::abs(z) <= radius) return z;
    }
}

/// Central-difference Wirtinger derivatives d = (dx - i dy)/2, dbar = (dx + i dy)/2 of any
/// complex-valued function of xi, for a + b <= 2.
template <typename Value>
Value fd_wirtinger(std::function<Value(complex)> const& g, complex xi, int a, int b, double h)
{
    auto const dx = [&](complex z) -> Value { return (g(z + complex{h, 0}) - g(z - complex{h, 0})) / (2.0 * h); };
    auto const dy = [&](complex z) -> Value { return (g(z + complex{0, h}) - g(z - complex{0, h})) / (2.0 * h); };
    complex const I{0.0, 1.0};
    if (a == 0 && b == 0) return g(xi);
    if (a + b == 1) {
        Value const x = dx(xi);
        Value const y = dy(xi);
        return a == 1 ? Value(0.5 * (x - I * y)) : Value(0.5 * (x + I * y));
    }
    // second order from the 9-point stencil
    Value const gxx = (g(xi + complex{h, 0}) - 2.0 * g(xi) + g(xi - complex{h, 0})) / (h * h);
    Value const gyy = (g(xi + complex{0, h}) - 2.0 * g(xi) + g(xi - complex{0, h})) / (h * h);
    Value const gxy = (g(xi + complex{h, h}) - g(xi + complex{h, -h}) - g(xi + complex{-h, h}) + g(xi + complex{-h, -h}))
                      / (4.0 * h * h);
    if (a == 1 && b == 1) return Value(0.25 * (gxx + gyy));
    if (a == 2) return Value(0.25 * (gxx - gyy - 2.0 * I * gxy));
    return Value(0.25 * (gxx - gyy + 2.0 * I * gxy));
}

/// Value-level f_0 = f, f_1 = f' - f (f^dagger f')/|f|^2, from exact polynomial derivatives.
inline Eigen::VectorXcd value_f(HolomorphicVector const& f, complex xi, bool raised)
{
    auto const n = static_cast<Eigen::Index>(f.dim());
    Eigen::VectorXcd v(n), dv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = f[static_cast<std::size_t>(i)](xi);
        dv(i) = f[static_cast<std::size_t>(i)].derivative()(xi);
    }
    if (!raised) return v;
    return dv - v * (v.dot(dv) / v.squaredNorm());
}

inline Eigen::MatrixXcd value_projector(Eigen::VectorXcd const& v) { return v * v.adjoint() / v.squaredNorm(); }

/// P_0 or P_1 at xi without jets.
inline Eigen::MatrixXcd value_P(HolomorphicVector const& f, int k, complex xi)
{
    return value_projector(value_f(f, xi, k == 1));
}

inline double max_abs(Eigen::MatrixXcd const& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace cpnsurf::oracle
