#pragma once

/// \file holo.hpp
/// \brief Holomorphic input data: vectors of complex polynomials in xi and their jets.

#include "errors.hpp"
#include "jets.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace cpnsurf {

/// Polynomial sum_j c_j xi^j. Trailing zero coefficients are dropped on construction.
class ComplexPolynomial {
public:
    ComplexPolynomial() = default;

    explicit ComplexPolynomial(std::vector<complex> coefficients) : coeffs_(std::move(coefficients))
    {
        while (!coeffs_.empty() && coeffs_.back() == complex{}) coeffs_.pop_back();
    }

    /// Degree of the polynomial; the zero polynomial reports -1.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::vector<complex> const& coefficients() const noexcept { return coeffs_; }

    bool is_constant() const noexcept { return degree() <= 0; }

    complex operator()(complex xi) const
    {
        complex acc{};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * xi + *it;
        return acc;
    }

    ComplexPolynomial derivative() const
    {
        std::vector<complex> out;
        for (std::size_t j = 1; j < coeffs_.size(); ++j) out.push_back(static_cast<double>(j) * coeffs_[j]);
        return ComplexPolynomial(std::move(out));
    }

    friend ComplexPolynomial operator*(ComplexPolynomial const& p, ComplexPolynomial const& q)
    {
        if (p.coeffs_.empty() || q.coeffs_.empty()) return {};
        std::vector<complex> out(p.coeffs_.size() + q.coeffs_.size() - 1);
        for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < q.coeffs_.size(); ++j) out[i + j] += p.coeffs_[i] * q.coeffs_[j];
        return ComplexPolynomial(std::move(out));
    }

    bool operator==(ComplexPolynomial const&) const = default;

private:
    std::vector<complex> coeffs_;
};

/// Holomorphic vector f = (f_0, ..., f_{N-1}) with polynomial components, N >= 2, not all constant.
class HolomorphicVector {
public:
    explicit HolomorphicVector(std::vector<ComplexPolynomial> components) : components_(std::move(components))
    {
        if (components_.size() < 2) {
            throw std::invalid_argument("holomorphic vector needs N >= 2 components, got "
                                        + std::to_string(components_.size()));
        }
        bool all_constant = true;
        for (auto const& c : components_) all_constant = all_constant && c.is_constant();
        if (all_constant) throw std::invalid_argument("holomorphic vector must be nonconstant");
    }

    std::size_t dim() const noexcept { return components_.size(); }
    std::vector<ComplexPolynomial> const& components() const noexcept { return components_; }
    ComplexPolynomial const& operator[](std::size_t i) const { return components_[i]; }

    /// Multiplies every component by the scalar polynomial h; the projector tower is unchanged where h != 0.
    HolomorphicVector scaled(ComplexPolynomial const& h) const
    {
        std::vector<ComplexPolynomial> out;
        for (auto const& c : components_) out.push_back(c * h);
        return HolomorphicVector(std::move(out));
    }

    int max_degree() const noexcept
    {
        int m = 0;
        for (auto const& c : components_) m = std::max(m, c.degree());
        return m;
    }

private:
    std::vector<ComplexPolynomial> components_;
};

/// Jet of a single polynomial: exact derivative polynomials in the d-direction, zero dbar-rows.
inline WirtingerJet eval_jet(ComplexPolynomial const& p, complex xi, JetOrder order)
{
    WirtingerJet out(xi, order);
    ComplexPolynomial current = p;
    for (int a = 0; a <= order.a_max; ++a) {
        out.at(a, 0) = current(xi);
        current = current.derivative();
    }
    return out;
}

inline JetVector eval_jet(HolomorphicVector const& f, complex xi, JetOrder order)
{
    std::vector<WirtingerJet> out;
    out.reserve(f.dim());
    for (auto const& c : f.components()) out.push_back(eval_jet(c, xi, order));
    return JetVector(std::move(out));
}

/// Rational normal curve with components sqrt(C(N-1, j)) xi^j.
inline HolomorphicVector veronese(int n)
{
    if (n < 2) throw std::invalid_argument("veronese curve needs N >= 2, got " + std::to_string(n));
    std::vector<ComplexPolynomial> comps;
    double binom = 1.0;
    for (int j = 0; j < n; ++j) {
        std::vector<complex> c(static_cast<std::size_t>(j) + 1);
        c.back() = std::sqrt(binom);
        comps.emplace_back(std::move(c));
        binom = binom * (n - 1 - j) / (j + 1);
    }
    return HolomorphicVector(std::move(comps));
}

/// Parses an exact decimal string ("-1.25", "3e-2") to the nearest double.
inline double parse_decimal(std::string_view text)
{
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double out = 0.0;
    auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(out)) {
        throw ConfigError("not a decimal number: \"" + std::string(text) + "\"");
    }
    return out;
}

/// Parses numerator/denominator decimal strings and divides once.
inline double parse_rational(std::string_view numerator, std::string_view denominator)
{
    double const num = parse_decimal(numerator);
    double const den = parse_decimal(denominator);
    if (den == 0.0) throw ConfigError("zero denominator in rational \"" + std::string(numerator) + "/0\"");
    return num / den;
}

} // namespace cpnsurf
