#pragma once

/// \file geometry.hpp
/// \brief su(N) coordinates, induced metric, Gaussian curvature and affine span of surfaces.

#include "errors.hpp"
#include "immersion.hpp"
#include "jets.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <span>
#include <vector>

namespace cpnsurf {

/// Generalized Gell-Mann basis of traceless Hermitian matrices with tr(T_a T_b) = 2 delta_ab.
/// Ordering: all symmetric pairs (j<l, lexicographic), then antisymmetric pairs, then the
/// diagonal ladder. For N = 2 this is (sigma_x, sigma_y, sigma_z).
class SuBasis {
public:
    explicit SuBasis(int n) : n_(n)
    {
        if (n < 2) throw std::invalid_argument("su(N) basis needs N >= 2");
        auto const N = static_cast<Eigen::Index>(n);
        for (Eigen::Index j = 0; j < N; ++j)
            for (Eigen::Index l = j + 1; l < N; ++l) {
                Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(N, N);
                t(j, l) = 1.0;
                t(l, j) = 1.0;
                elements_.push_back(std::move(t));
            }
        for (Eigen::Index j = 0; j < N; ++j)
            for (Eigen::Index l = j + 1; l < N; ++l) {
                Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(N, N);
                t(j, l) = complex{0.0, -1.0};
                t(l, j) = complex{0.0, 1.0};
                elements_.push_back(std::move(t));
            }
        for (Eigen::Index m = 1; m < N; ++m) {
            Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(N, N);
            double const c = std::sqrt(2.0 / static_cast<double>(m * (m + 1)));
            for (Eigen::Index j = 0; j < m; ++j) t(j, j) = c;
            t(m, m) = -c * static_cast<double>(m);
            elements_.push_back(std::move(t));
        }
    }

    int n() const noexcept { return n_; }
    std::size_t size() const noexcept { return elements_.size(); }
    Eigen::MatrixXcd const& operator[](std::size_t a) const { return elements_[a]; }

    /// x_a = 1/2 tr(H T_a) for a traceless Hermitian H.
    Eigen::VectorXd expand(Eigen::MatrixXcd const& h) const
    {
        Eigen::VectorXd x(static_cast<Eigen::Index>(size()));
        for (std::size_t a = 0; a < size(); ++a) {
            x(static_cast<Eigen::Index>(a)) = 0.5 * (h * elements_[a]).trace().real();
        }
        return x;
    }

    Eigen::MatrixXcd reconstruct(Eigen::VectorXd const& x) const
    {
        auto const N = static_cast<Eigen::Index>(n_);
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(N, N);
        for (std::size_t a = 0; a < size(); ++a) h += x(static_cast<Eigen::Index>(a)) * elements_[a];
        return h;
    }

private:
    int n_;
    std::vector<Eigen::MatrixXcd> elements_;
};

/// Hermitian matrix carried by an immersion: iX for Weierstrass, (1-lambda^2)/2 X for Sym-Tafel.
inline Eigen::MatrixXcd hermitian_part(Immersion const& imm)
{
    if (imm.convention == Convention::weierstrass) return kI * imm.value();
    return ((1.0 - imm.lambda * imm.lambda) / 2.0) * imm.value();
}

/// Subtracts tr(H)/N times the identity.
inline Eigen::MatrixXcd traceless(Eigen::MatrixXcd const& h)
{
    auto const n = h.rows();
    return h - (h.trace() / static_cast<double>(n)) * Eigen::MatrixXcd::Identity(n, n);
}

inline constexpr double kHermiticityCutoff = 1e-8;

/// Coordinates in R^{N^2-1} of the traceless-shifted Hermitian matrix H_t.
inline Eigen::VectorXd to_coordinates(Eigen::MatrixXcd const& h, SuBasis const& basis)
{
    if (h.rows() != basis.n() || h.cols() != basis.n()) {
        throw StructuralError("matrix dimension does not match the su(N) basis");
    }
    double const scale = std::max(1.0, max_entry(h));
    if (max_entry(h - h.adjoint()) > kHermiticityCutoff * scale) {
        throw StructuralError("immersion is not anti-Hermitian up to its trace part");
    }
    return basis.expand(traceless(h));
}

inline Eigen::VectorXd to_coordinates(Immersion const& imm, SuBasis const& basis)
{
    return to_coordinates(hermitian_part(imm), basis);
}

/// First fundamental form with <A,B> = -1/2 tr(AB) on anti-Hermitian A, B.
struct InducedMetric {
    WirtingerJet g_xixi;     ///< <dX, dX>; conformality defect is its modulus
    WirtingerJet g_xixibar;  ///< <dX, dbar X>; real and positive at regular points

    double conformal_factor() const { return g_xixibar.value().real(); }
    double conformality_defect() const { return std::abs(g_xixi.value()); }
};

inline InducedMetric induced_metric(JetMatrix const& X)
{
    JetMatrix const dX = d(X);
    JetMatrix const dbarX = dbar(X);
    JetOrder const o = common_order(dX.order(), dbarX.order());
    JetMatrix const a = dX.truncated(o);
    JetMatrix const b = dbarX.truncated(o);
    return {complex{-0.5} * trace(a * a), complex{-0.5} * trace(a * b)};
}

/// K = -(1/g) d dbar ln g with g = g_xixibar; needs X jets of order >= (2,2).
inline double gauss_curvature(InducedMetric const& m)
{
    WirtingerJet const& g = m.g_xixibar;
    if (g.order().a_max < 1 || g.order().b_max < 1) {
        throw OrderExhaustedError("mixed", 1, std::min(g.order().a_max, g.order().b_max),
                                  "curvature needs a (1,1)-jet of the metric: ");
    }
    double const g0 = g.value().real();
    if (!(g0 > kDivisionCutoff)) throw SingularityError("degenerate induced metric", g.base());
    // d dbar ln g = (g g_{1,1} - g_{1,0} g_{0,1}) / g^2
    complex const ddbar_log = (g.value() * g(1, 1) - g(1, 0) * g(0, 1)) / (g.value() * g.value());
    return -ddbar_log.real() / g0;
}

inline double gauss_curvature(JetMatrix const& X) { return gauss_curvature(induced_metric(X)); }

// ---------------------------------------------------------------------------------------------
// Point clouds
// ---------------------------------------------------------------------------------------------

/// Rows are points.
inline Eigen::MatrixXd stack_points(std::span<Eigen::VectorXd const> points)
{
    if (points.empty()) return {};
    Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), points.front().size());
    for (std::size_t i = 0; i < points.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
    return m;
}

inline Eigen::MatrixXd centered(Eigen::MatrixXd const& m)
{
    return m.rowwise() - m.colwise().mean();
}

/// Singular values of the centroid-subtracted point matrix, descending.
inline Eigen::VectorXd centered_singular_values(std::span<Eigen::VectorXd const> points)
{
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered(stack_points(points)));
    return svd.singularValues();
}

/// Affine-span dimension: singular values above tol * (largest singular value).
inline int span_rank(std::span<Eigen::VectorXd const> points, double tol = 1e-8)
{
    if (points.size() < 2) throw std::invalid_argument("span_rank needs at least two points");
    Eigen::VectorXd const s = centered_singular_values(points);
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * s(0)) ++rank;
    return rank;
}

struct CloudComparison {
    double translation_residual = 0.0;  ///< max pointwise distance after centroid alignment
    double isometry_residual = 0.0;     ///< same, after the best orthogonal alignment
};

/// Pointwise comparison of two equally indexed clouds up to translation and ambient isometry.
inline CloudComparison compare_clouds(Eigen::MatrixXd const& a, Eigen::MatrixXd const& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw StructuralError("point clouds differ in shape");
    Eigen::MatrixXd const ca = centered(a);
    Eigen::MatrixXd const cb = centered(b);
    CloudComparison out;
    out.translation_residual = (ca - cb).rowwise().norm().maxCoeff();
    // Orthogonal Procrustes: R = U V^T from the SVD of A^T B minimizes ||A R - B||.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ca.transpose() * cb, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd const r = svd.matrixU() * svd.matrixV().transpose();
    out.isometry_residual = (ca * r - cb).rowwise().norm().maxCoeff();
    return out;
}

} // namespace cpnsurf
