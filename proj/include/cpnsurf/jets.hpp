#pragma once

/// \file jets.hpp
/// \brief Truncated Wirtinger jets: tables of mixed derivatives d^a dbar^b h at one point.
///
/// A jet of order (a_max, b_max) stores D[a][b] = (d/dxi)^a (d/dxibar)^b h evaluated at
/// the base point, for 0 <= a <= a_max and 0 <= b <= b_max. Arithmetic propagates the
/// table through the general Leibniz rule, so every derivative carried is exact up to
/// floating-point rounding. Conjugation transposes the table, so Hermitian products
/// such as f^dagger f carry the common (square) part of the two orders.

#include "errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cpnsurf {

/// Hard cap on either truncation index.
inline constexpr int kMaxJetOrder = 16;

/// Threshold below which a jet value is treated as zero when dividing.
inline constexpr double kDivisionCutoff = 1e-12;

struct JetOrder {
    int a_max = 0;
    int b_max = 0;

    constexpr JetOrder() = default;
    constexpr JetOrder(int a, int b) : a_max(a), b_max(b)
    {
        if (a < 0 || b < 0 || a > kMaxJetOrder || b > kMaxJetOrder) {
            throw StructuralError("jet order (" + std::to_string(a) + "," + std::to_string(b)
                                  + ") outside [0," + std::to_string(kMaxJetOrder) + "]");
        }
    }

    constexpr bool operator==(JetOrder const&) const = default;

    constexpr bool contains(JetOrder other) const noexcept
    {
        return other.a_max <= a_max && other.b_max <= b_max;
    }

    constexpr int rows() const noexcept { return a_max + 1; }
    constexpr int cols() const noexcept { return b_max + 1; }
    constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(rows() * cols()); }
};

constexpr JetOrder common_order(JetOrder x, JetOrder y)
{
    return {std::min(x.a_max, y.a_max), std::min(x.b_max, y.b_max)};
}

constexpr JetOrder transposed(JetOrder x) { return {x.b_max, x.a_max}; }

namespace detail {

struct BinomialTable {
    std::array<std::array<double, kMaxJetOrder + 1>, kMaxJetOrder + 1> c{};

    constexpr BinomialTable()
    {
        for (int n = 0; n <= kMaxJetOrder; ++n) {
            c[n][0] = 1.0;
            for (int k = 1; k <= n; ++k) {
                c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0.0);
            }
        }
    }
};

inline constexpr BinomialTable kBinomial{};

inline double binomial(int n, int k) { return kBinomial.c[n][k]; }

} // namespace detail

class WirtingerJet {
public:
    WirtingerJet() : WirtingerJet(complex{}, JetOrder{}) {}

    WirtingerJet(complex base, JetOrder order) : base_(base), order_(order), table_(order.size()) {}

    static WirtingerJet constant(complex base, JetOrder order, complex value)
    {
        WirtingerJet j(base, order);
        j.table_[0] = value;
        return j;
    }

    /// The coordinate function xi.
    static WirtingerJet variable(complex base, JetOrder order)
    {
        WirtingerJet j = constant(base, order, base);
        if (order.a_max >= 1) j.at(1, 0) = 1.0;
        return j;
    }

    /// The coordinate function conj(xi).
    static WirtingerJet conj_variable(complex base, JetOrder order)
    {
        WirtingerJet j = constant(base, order, std::conj(base));
        if (order.b_max >= 1) j.at(0, 1) = 1.0;
        return j;
    }

    complex base() const noexcept { return base_; }
    JetOrder order() const noexcept { return order_; }
    complex value() const noexcept { return table_[0]; }

    complex operator()(int a, int b) const { return table_[index(a, b)]; }
    complex& at(int a, int b) { return table_[index(a, b)]; }

    std::span<complex const> table() const noexcept { return table_; }

    /// Drops derivatives beyond `order`; `order` must not exceed the current one.
    WirtingerJet truncated(JetOrder order) const
    {
        if (!order_.contains(order)) {
            throw StructuralError("cannot truncate a jet to a larger order");
        }
        WirtingerJet out(base_, order);
        for (int a = 0; a <= order.a_max; ++a)
            for (int b = 0; b <= order.b_max; ++b) out.at(a, b) = (*this)(a, b);
        return out;
    }

    double max_abs() const noexcept
    {
        double m = 0.0;
        for (auto const& v : table_) m = std::max(m, std::abs(v));
        return m;
    }

    bool operator==(WirtingerJet const& o) const
    {
        return base_ == o.base_ && order_ == o.order_ && table_ == o.table_;
    }

    WirtingerJet& operator+=(WirtingerJet const& o)
    {
        require_compatible(o);
        for (std::size_t i = 0; i < table_.size(); ++i) table_[i] += o.table_[i];
        return *this;
    }

    WirtingerJet& operator-=(WirtingerJet const& o)
    {
        require_compatible(o);
        for (std::size_t i = 0; i < table_.size(); ++i) table_[i] -= o.table_[i];
        return *this;
    }

    WirtingerJet& operator*=(complex s)
    {
        for (auto& v : table_) v *= s;
        return *this;
    }

    WirtingerJet operator-() const
    {
        WirtingerJet out = *this;
        for (auto& v : out.table_) v = -v;
        return out;
    }

    friend WirtingerJet operator+(WirtingerJet u, WirtingerJet const& v) { return u += v; }
    friend WirtingerJet operator-(WirtingerJet u, WirtingerJet const& v) { return u -= v; }
    friend WirtingerJet operator*(complex s, WirtingerJet u) { return u *= s; }
    friend WirtingerJet operator*(WirtingerJet u, complex s) { return u *= s; }

    friend WirtingerJet operator+(WirtingerJet u, complex s)
    {
        u.table_[0] += s;
        return u;
    }

    friend WirtingerJet operator*(WirtingerJet const& u, WirtingerJet const& v)
    {
        u.require_compatible(v);
        WirtingerJet out(u.base_, u.order_);
        int const am = u.order_.a_max;
        int const bm = u.order_.b_max;
        for (int a = 0; a <= am; ++a) {
            for (int b = 0; b <= bm; ++b) {
                complex acc{};
                for (int p = 0; p <= a; ++p) {
                    double const cp = detail::binomial(a, p);
                    for (int q = 0; q <= b; ++q) {
                        acc += cp * detail::binomial(b, q) * u(p, q) * v(a - p, b - q);
                    }
                }
                out.at(a, b) = acc;
            }
        }
        return out;
    }

    void require_compatible(WirtingerJet const& o) const
    {
        if (base_ != o.base_) {
            throw StructuralError("jet base points differ: " + format_point(base_) + " vs "
                                  + format_point(o.base_));
        }
        if (!(order_ == o.order_)) {
            throw StructuralError("jet orders differ: (" + std::to_string(order_.a_max) + ","
                                  + std::to_string(order_.b_max) + ") vs (" + std::to_string(o.order_.a_max)
                                  + "," + std::to_string(o.order_.b_max) + ")");
        }
    }

private:
    std::size_t index(int a, int b) const
    {
        if (a < 0 || b < 0 || a > order_.a_max || b > order_.b_max) {
            throw StructuralError("jet index (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
        }
        return static_cast<std::size_t>(a * order_.cols() + b);
    }

    complex base_;
    JetOrder order_;
    std::vector<complex> table_;
};

/// Jet of conj(h): d^a dbar^b conj(h) = conj(d^b dbar^a h), so the order is transposed.
inline WirtingerJet conj(WirtingerJet const& u)
{
    JetOrder const o = u.order();
    WirtingerJet out(u.base(), JetOrder{o.b_max, o.a_max});
    for (int a = 0; a <= o.b_max; ++a)
        for (int b = 0; b <= o.a_max; ++b) out.at(a, b) = std::conj(u(b, a));
    return out;
}

inline WirtingerJet d(WirtingerJet const& u)
{
    JetOrder const o = u.order();
    if (o.a_max < 1) throw OrderExhaustedError("holomorphic", 1, o.a_max);
    WirtingerJet out(u.base(), JetOrder{o.a_max - 1, o.b_max});
    for (int a = 0; a < o.a_max; ++a)
        for (int b = 0; b <= o.b_max; ++b) out.at(a, b) = u(a + 1, b);
    return out;
}

inline WirtingerJet dbar(WirtingerJet const& u)
{
    JetOrder const o = u.order();
    if (o.b_max < 1) throw OrderExhaustedError("antiholomorphic", 1, o.b_max);
    WirtingerJet out(u.base(), JetOrder{o.a_max, o.b_max - 1});
    for (int a = 0; a <= o.a_max; ++a)
        for (int b = 0; b < o.b_max; ++b) out.at(a, b) = u(a, b + 1);
    return out;
}

/// Multiplicative inverse. The value must clear kDivisionCutoff relative to the table scale.
inline WirtingerJet inverse(WirtingerJet const& u)
{
    complex const v0 = u.value();
    double const scale = std::max(1.0, u.max_abs());
    if (!(std::abs(v0) > kDivisionCutoff * scale)) {
        throw SingularityError("jet value " + format_point(v0) + " too close to zero to invert", u.base());
    }
    // w = u/v0 - 1 has zero value, so the fixed point of inv*v0 = 1 - w*(inv*v0)
    // is reached after at most a_max + b_max + 1 sweeps.
    WirtingerJet w = u * (1.0 / v0);
    w.at(0, 0) -= 1.0;
    WirtingerJet scaled = WirtingerJet::constant(u.base(), u.order(), 1.0);
    int const sweeps = u.order().a_max + u.order().b_max + 1;
    for (int i = 0; i < sweeps; ++i) {
        scaled = -(w * scaled) + complex{1.0};
    }
    return scaled * (1.0 / v0);
}

inline WirtingerJet operator/(WirtingerJet const& u, WirtingerJet const& v) { return u * inverse(v); }

// ---------------------------------------------------------------------------------------------
// Vectors and matrices of jets
// ---------------------------------------------------------------------------------------------

/// N jets sharing one base point and order.
class JetVector {
public:
    JetVector() = default;

    JetVector(std::size_t n, complex base, JetOrder order) : entries_(n, WirtingerJet(base, order)) {}

    explicit JetVector(std::vector<WirtingerJet> entries) : entries_(std::move(entries))
    {
        for (auto const& e : entries_) e.require_compatible(entries_.front());
    }

    std::size_t size() const noexcept { return entries_.size(); }
    complex base() const { return entries_.front().base(); }
    JetOrder order() const { return entries_.front().order(); }

    WirtingerJet const& operator[](std::size_t i) const { return entries_[i]; }
    WirtingerJet& operator[](std::size_t i) { return entries_[i]; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    Eigen::VectorXcd value() const
    {
        Eigen::VectorXcd out(static_cast<Eigen::Index>(size()));
        for (std::size_t i = 0; i < size(); ++i) out(static_cast<Eigen::Index>(i)) = entries_[i].value();
        return out;
    }

    JetVector truncated(JetOrder order) const { return map([&](auto const& e) { return e.truncated(order); }); }

    template <typename Fn>
    JetVector map(Fn&& fn) const
    {
        std::vector<WirtingerJet> out;
        out.reserve(size());
        for (auto const& e : entries_) out.push_back(fn(e));
        return JetVector(std::move(out));
    }

    bool operator==(JetVector const&) const = default;

private:
    std::vector<WirtingerJet> entries_;
};

inline void require_same_size(std::size_t a, std::size_t b)
{
    if (a != b) throw StructuralError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

inline JetVector operator+(JetVector const& u, JetVector const& v)
{
    require_same_size(u.size(), v.size());
    JetVector out = u;
    for (std::size_t i = 0; i < u.size(); ++i) out[i] += v[i];
    return out;
}

inline JetVector operator-(JetVector const& u, JetVector const& v)
{
    require_same_size(u.size(), v.size());
    JetVector out = u;
    for (std::size_t i = 0; i < u.size(); ++i) out[i] -= v[i];
    return out;
}

inline JetVector operator*(WirtingerJet const& s, JetVector const& v)
{
    return v.map([&](auto const& e) { return s * e; });
}

inline JetVector operator*(complex s, JetVector const& v)
{
    return v.map([&](auto const& e) { return s * e; });
}

inline JetVector d(JetVector const& v) { return v.map([](auto const& e) { return d(e); }); }
inline JetVector dbar(JetVector const& v) { return v.map([](auto const& e) { return dbar(e); }); }

/// Componentwise conjugate; as a row vector this is v^dagger.
inline JetVector conj(JetVector const& v) { return v.map([](auto const& e) { return conj(e); }); }

/// Hermitian product u^dagger v = sum_i conj(u_i) v_i.
/// Conjugation transposes the order, so the result carries the common order of conj(u) and v.
inline WirtingerJet dot(JetVector const& u, JetVector const& v)
{
    require_same_size(u.size(), v.size());
    JetOrder const o = common_order(transposed(u.order()), v.order());
    WirtingerJet acc(v.base(), o);
    for (std::size_t i = 0; i < u.size(); ++i) acc += conj(u[i]).truncated(o) * v[i].truncated(o);
    return acc;
}

inline WirtingerJet norm2(JetVector const& v) { return dot(v, v); }

/// Row-major N x N matrix of jets sharing one base point and order.
class JetMatrix {
public:
    JetMatrix() = default;

    JetMatrix(std::size_t n, complex base, JetOrder order) : n_(n), entries_(n * n, WirtingerJet(base, order)) {}

    static JetMatrix identity(std::size_t n, complex base, JetOrder order)
    {
        JetMatrix m(n, base, order);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = WirtingerJet::constant(base, order, 1.0);
        return m;
    }

    std::size_t dim() const noexcept { return n_; }
    complex base() const { return entries_.front().base(); }
    JetOrder order() const { return entries_.front().order(); }

    WirtingerJet const& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    WirtingerJet& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }

    Eigen::MatrixXcd value() const
    {
        auto const n = static_cast<Eigen::Index>(n_);
        Eigen::MatrixXcd out(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                out(i, j) = entries_[static_cast<std::size_t>(i * n + j)].value();
        return out;
    }

    /// Matrix of a single derivative component d^a dbar^b of every entry.
    Eigen::MatrixXcd component(int a, int b) const
    {
        auto const n = static_cast<Eigen::Index>(n_);
        Eigen::MatrixXcd out(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) out(i, j) = entries_[static_cast<std::size_t>(i * n + j)](a, b);
        return out;
    }

    template <typename Fn>
    JetMatrix map(Fn&& fn) const
    {
        JetMatrix out;
        out.n_ = n_;
        out.entries_.reserve(entries_.size());
        for (auto const& e : entries_) out.entries_.push_back(fn(e));
        return out;
    }

    JetMatrix truncated(JetOrder order) const { return map([&](auto const& e) { return e.truncated(order); }); }

    void require_compatible(JetMatrix const& o) const
    {
        require_same_size(n_, o.n_);
        entries_.front().require_compatible(o.entries_.front());
    }

    JetMatrix& operator+=(JetMatrix const& o)
    {
        require_compatible(o);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
        return *this;
    }

    JetMatrix& operator-=(JetMatrix const& o)
    {
        require_compatible(o);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
        return *this;
    }

    bool operator==(JetMatrix const&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<WirtingerJet> entries_;
};

inline JetMatrix operator+(JetMatrix a, JetMatrix const& b) { return a += b; }
inline JetMatrix operator-(JetMatrix a, JetMatrix const& b) { return a -= b; }

inline JetMatrix operator*(complex s, JetMatrix const& m)
{
    return m.map([&](auto const& e) { return s * e; });
}

inline JetMatrix operator*(WirtingerJet const& s, JetMatrix const& m)
{
    return m.map([&](auto const& e) { return s * e; });
}

inline JetMatrix operator*(JetMatrix const& a, JetMatrix const& b)
{
    a.require_compatible(b);
    std::size_t const n = a.dim();
    JetMatrix out(n, a.base(), a.order());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            WirtingerJet acc(a.base(), a.order());
            for (std::size_t l = 0; l < n; ++l) acc += a(i, l) * b(l, j);
            out(i, j) = std::move(acc);
        }
    }
    return out;
}

/// u (x) v^dagger, entries u_i conj(v_j), at the common order of u and conj(v).
inline JetMatrix outer(JetVector const& u, JetVector const& v)
{
    require_same_size(u.size(), v.size());
    std::size_t const n = u.size();
    JetOrder const o = common_order(u.order(), transposed(v.order()));
    JetMatrix out(n, u.base(), o);
    for (std::size_t j = 0; j < n; ++j) {
        WirtingerJet const vj = conj(v[j]).truncated(o);
        for (std::size_t i = 0; i < n; ++i) out(i, j) = u[i].truncated(o) * vj;
    }
    return out;
}

/// Conjugate transpose. Each entry's order is transposed, so the result has order (b_max, a_max).
inline JetMatrix adjoint(JetMatrix const& m)
{
    std::size_t const n = m.dim();
    JetOrder const o = m.order();
    JetMatrix out(n, m.base(), JetOrder{o.b_max, o.a_max});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = conj(m(j, i));
    return out;
}

inline WirtingerJet trace(JetMatrix const& m)
{
    WirtingerJet acc(m.base(), m.order());
    for (std::size_t i = 0; i < m.dim(); ++i) acc += m(i, i);
    return acc;
}

inline JetMatrix d(JetMatrix const& m) { return m.map([](auto const& e) { return d(e); }); }
inline JetMatrix dbar(JetMatrix const& m) { return m.map([](auto const& e) { return dbar(e); }); }

inline JetMatrix commutator(JetMatrix const& a, JetMatrix const& b) { return a * b - b * a; }

/// Max-entry norm of the value parts.
inline double max_entry(Eigen::MatrixXcd const& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_entry(JetMatrix const& m) { return max_entry(m.value()); }

} // namespace cpnsurf
