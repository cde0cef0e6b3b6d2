#pragma once

/// \file immersion.hpp
/// \brief Surface immersions X_k in su(N): closed Weierstrass form, contour integration of the
/// Weierstrass 1-form, and the Sym-Tafel construction through explicit wavefunctions.

#include "errors.hpp"
#include "holo.hpp"
#include "jets.hpp"
#include "quadrature.hpp"
#include "tower.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace cpnsurf {

inline constexpr complex kI{0.0, 1.0};

enum class Convention { weierstrass, sym_tafel };

struct Immersion {
    int k = 0;
    Convention convention = Convention::weierstrass;
    complex lambda{};  ///< spectral parameter, meaningful for sym_tafel only
    JetMatrix X;

    Eigen::MatrixXcd value() const { return X.value(); }
};

/// X_k = -i (P_k + 2 sum_{j<k} P_j). Defined for every built level, including k = N-1.
inline Immersion weierstrass_closed(ProjectorTower const& t, int k)
{
    JetMatrix const sum = complex{2.0} * t.lower_sum(k);
    return {k, Convention::weierstrass, {}, -kI * (t.projector(k) + sum)};
}

/// Residual of dX = -i[dP,P] and dbar X = +i[dbar P,P] on values.
inline double weierstrass_derivative_residual(ProjectorTower const& t, int k)
{
    Immersion const imm = weierstrass_closed(t, k);
    auto const [plus, minus] = bracket_commutators(t.projector(k));
    double const r1 = max_entry(d(imm.X).value() - (-kI) * plus.value());
    double const r2 = max_entry(dbar(imm.X).value() - kI * minus.value());
    return std::max(r1, r2);
}

/// The two components of the Weierstrass 1-form i(-[dP,P] dxi + [dbar P,P] dxibar) at a point.
struct WeierstrassForm {
    Eigen::MatrixXcd dxi;
    Eigen::MatrixXcd dxibar;
};

inline WeierstrassForm weierstrass_form(HolomorphicVector const& f, int k, complex xi)
{
    ProjectorTower const t = build_tower(f, k, xi, tower_order(k, 1));
    auto const [plus, minus] = bracket_commutators(t.projector(k));
    return {(-kI) * plus.value(), kI * minus.value()};
}

/// Closedness of the 1-form: dbar of the dxi-component minus d of the dxibar-component.
inline double weierstrass_closedness(ProjectorTower const& t, int k)
{
    auto const [plus, minus] = bracket_commutators(t.projector(k));
    JetMatrix const a = dbar((-kI) * plus);
    JetMatrix const b = d(kI * minus);
    JetOrder const o = common_order(a.order(), b.order());
    return max_entry(a.truncated(o) - b.truncated(o));
}

struct QuadratureOptions {
    int order = 8;          ///< Gauss-Legendre nodes per panel
    int max_refine = 12;    ///< maximum number of panel halvings per segment
    double tolerance = 1e-9;  ///< max-entry agreement between successive refinements
};

namespace detail {

inline Eigen::MatrixXcd integrate_segment(HolomorphicVector const& f, int k, complex a, complex b,
                                          GaussLegendreRule const& rule, int panels)
{
    auto const n = static_cast<Eigen::Index>(f.dim());
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    complex const delta = b - a;
    double const width = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        double const mid = (p + 0.5) * width;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double const t = mid + 0.5 * width * rule.nodes[i];
            complex const xi = a + t * delta;
            WeierstrassForm form = [&] {
                try {
                    return weierstrass_form(f, k, xi);
                } catch (SingularityError const& e) {
                    throw IntegrationError("singular point on integration path near xi=" + format_point(xi)
                                           + " (" + e.what() + ")");
                }
            }();
            acc += (0.5 * width * rule.weights[i]) * (form.dxi * delta + form.dxibar * std::conj(delta));
        }
    }
    return acc;
}

} // namespace detail

/// Line integral of the Weierstrass 1-form along a polyline, by composite Gauss-Legendre
/// panels refined dyadically until successive results agree to `options.tolerance`.
inline Eigen::MatrixXcd weierstrass_integrate(HolomorphicVector const& f, int k, std::span<complex const> path,
                                              QuadratureOptions const& options = {})
{
    if (options.order < 8) throw std::invalid_argument("quadrature order must be >= 8");
    if (k < 0 || k > static_cast<int>(f.dim()) - 1) throw std::invalid_argument("level out of range");
    auto const n = static_cast<Eigen::Index>(f.dim());
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
    GaussLegendreRule const rule = gauss_legendre(options.order);
    for (std::size_t s = 1; s < path.size(); ++s) {
        complex const a = path[s - 1];
        complex const b = path[s];
        if (a == b) continue;
        Eigen::MatrixXcd prev = detail::integrate_segment(f, k, a, b, rule, 1);
        bool converged = false;
        for (int r = 1; r <= options.max_refine; ++r) {
            Eigen::MatrixXcd cur = detail::integrate_segment(f, k, a, b, rule, 1 << r);
            double const diff = max_entry(cur - prev);
            prev = std::move(cur);
            if (diff <= options.tolerance) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw IntegrationError("quadrature on segment " + format_point(a) + " -> " + format_point(b)
                                   + " did not converge after " + std::to_string(options.max_refine)
                                   + " halvings");
        }
        total += prev;
    }
    return total;
}

// ---------------------------------------------------------------------------------------------
// Sym-Tafel construction
// ---------------------------------------------------------------------------------------------

inline constexpr double kPoleCutoff = 1e-12;

inline void require_regular_lambda(complex lambda)
{
    if (std::abs(lambda - 1.0) <= kPoleCutoff || std::abs(lambda + 1.0) <= kPoleCutoff) {
        throw PoleError("spectral parameter lambda=" + format_point(lambda) + " is a pole (lambda = +-1)");
    }
}

struct Wavefunction {
    int k = 0;
    complex lambda{};
    JetMatrix phi;
    JetMatrix phi_inv;
};

/// phi_k = I + 4 lambda/(1-lambda)^2 sum_{j<k} P_j - 2/(1-lambda) P_k, with its closed-form inverse.
/// For k = 0 the sum is empty and this is I - 2 P_0/(1-lambda).
inline Wavefunction sym_tafel_phi(ProjectorTower const& t, int k, complex lambda)
{
    require_regular_lambda(lambda);
    JetMatrix const& P = t.projector(k);
    JetMatrix const Q = t.lower_sum(k);
    JetMatrix const I = JetMatrix::identity(t.dim(), t.base, P.order());
    complex const one_minus = 1.0 - lambda;
    complex const one_plus = 1.0 + lambda;
    JetMatrix phi = I + (4.0 * lambda / (one_minus * one_minus)) * Q - (2.0 / one_minus) * P;
    JetMatrix phi_inv = I - (4.0 * lambda / (one_plus * one_plus)) * Q - (2.0 / one_plus) * P;
    return {k, lambda, std::move(phi), std::move(phi_inv)};
}

/// Analytic d(phi_k)/d(lambda).
inline JetMatrix sym_tafel_dphi_dlambda(ProjectorTower const& t, int k, complex lambda)
{
    require_regular_lambda(lambda);
    complex const one_minus = 1.0 - lambda;
    complex const q_coeff = 4.0 * (1.0 + lambda) / (one_minus * one_minus * one_minus);
    complex const p_coeff = -2.0 / (one_minus * one_minus);
    return q_coeff * t.lower_sum(k) + p_coeff * t.projector(k);
}

/// Max residual of d phi = 2/(1+lambda) [dP,P] phi and dbar phi = 2/(1-lambda) [dbar P,P] phi
/// for an arbitrary candidate phi.
inline double lax_residual(JetMatrix const& phi, JetMatrix const& P, complex lambda)
{
    require_regular_lambda(lambda);
    auto const [plus, minus] = bracket_commutators(P);
    JetMatrix const dphi = d(phi);
    JetMatrix const dbarphi = dbar(phi);
    JetOrder const o1 = common_order(dphi.order(), plus.order());
    JetOrder const o2 = common_order(dbarphi.order(), minus.order());
    JetMatrix const rhs1 = (2.0 / (1.0 + lambda)) * (plus.truncated(o1) * phi.truncated(o1));
    JetMatrix const rhs2 = (2.0 / (1.0 - lambda)) * (minus.truncated(o2) * phi.truncated(o2));
    double const r1 = max_entry(dphi.truncated(o1).value() - rhs1.value());
    double const r2 = max_entry(dbarphi.truncated(o2).value() - rhs2.value());
    return std::max(r1, r2);
}

inline double lax_residual(ProjectorTower const& t, int k, complex lambda)
{
    return lax_residual(sym_tafel_phi(t, k, lambda).phi, t.projector(k), lambda);
}

/// X = phi^{-1} d(phi)/d(lambda) with alpha(lambda) = 1.
inline Immersion sym_tafel_immersion(ProjectorTower const& t, int k, complex lambda)
{
    Wavefunction const w = sym_tafel_phi(t, k, lambda);
    return {k, Convention::sym_tafel, lambda, w.phi_inv * sym_tafel_dphi_dlambda(t, k, lambda)};
}

/// 2/(1-lambda^2) (P_k + 2 sum_{j<k} P_j), the simplified Sym-Tafel immersion.
inline Eigen::MatrixXcd sym_tafel_closed_form(ProjectorTower const& t, int k, complex lambda)
{
    require_regular_lambda(lambda);
    Eigen::MatrixXcd const h = t.projector(k).value() + 2.0 * t.lower_sum(k).value();
    return (2.0 / (1.0 - lambda * lambda)) * h;
}

/// ||(1-lambda^2)/2 X_ST - i X_W|| at one point.
inline double sym_tafel_equivalence_residual(ProjectorTower const& t, int k, complex lambda)
{
    Eigen::MatrixXcd const st = sym_tafel_immersion(t, k, lambda).value();
    Eigen::MatrixXcd const w = weierstrass_closed(t, k).value();
    return max_entry(((1.0 - lambda * lambda) / 2.0) * st - kI * w);
}

} // namespace cpnsurf
