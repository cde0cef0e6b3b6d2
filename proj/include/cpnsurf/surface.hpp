#pragma once

/// \file surface.hpp
/// \brief Surfaces sampled on a rectangular xi-grid, and level-by-level cloud comparison.

#include "geometry.hpp"
#include "holo.hpp"
#include "immersion.hpp"
#include "parallel.hpp"
#include "tower.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cpnsurf {

struct GridSpec {
    double re_min = -2.0;
    double re_max = 2.0;
    double im_min = -2.0;
    double im_max = 2.0;
    int n_re = 9;
    int n_im = 9;

    std::size_t size() const { return static_cast<std::size_t>(n_re) * static_cast<std::size_t>(n_im); }

    /// Node index = j * n_re + i, i along Re xi, j along Im xi.
    complex node(std::size_t index) const
    {
        auto const i = static_cast<int>(index % static_cast<std::size_t>(n_re));
        auto const j = static_cast<int>(index / static_cast<std::size_t>(n_re));
        double const re = n_re == 1 ? re_min : re_min + (re_max - re_min) * i / (n_re - 1);
        double const im = n_im == 1 ? im_min : im_min + (im_max - im_min) * j / (n_im - 1);
        return {re, im};
    }

    /// True for nodes off the rectangle's boundary.
    bool interior(std::size_t index) const
    {
        auto const i = static_cast<int>(index % static_cast<std::size_t>(n_re));
        auto const j = static_cast<int>(index / static_cast<std::size_t>(n_re));
        return i > 0 && i < n_re - 1 && j > 0 && j < n_im - 1;
    }

    std::vector<complex> nodes() const
    {
        std::vector<complex> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) out.push_back(node(i));
        return out;
    }

    void validate() const
    {
        if (n_re < 1 || n_im < 1) throw std::invalid_argument("grid needs n_re, n_im >= 1");
        if (re_max < re_min || im_max < im_min) throw std::invalid_argument("grid bounds are inverted");
    }
};

struct SurfacePoint {
    std::size_t node = 0;
    complex xi;
    Eigen::VectorXd x;
    double g = 0.0;            ///< conformal factor g_{xi xibar}
    double K = 0.0;            ///< Gaussian curvature
    double conf_defect = 0.0;  ///< |g_{xi xi}|
    double tower_defect = 0.0; ///< worst projector-axiom residual at this node
};

struct ExcludedNode {
    std::size_t node = 0;
    complex xi;
    std::string reason;
};

struct SurfaceGrid {
    GridSpec grid;
    int k = 0;
    std::vector<SurfacePoint> points;
    std::vector<ExcludedNode> excluded;

    std::vector<Eigen::VectorXd> coordinates() const
    {
        std::vector<Eigen::VectorXd> out;
        out.reserve(points.size());
        for (auto const& p : points) out.push_back(p.x);
        return out;
    }
};

/// Tolerance on the projector axioms for a node to be accepted into a surface grid.
inline constexpr double kNodeInvariantTolerance = 1e-9;

inline SurfacePoint evaluate_surface_point(HolomorphicVector const& f, int k, complex xi, SuBasis const& basis)
{
    ProjectorTower const t = build_tower(f, k, xi);
    SurfacePoint p;
    p.xi = xi;
    p.tower_defect = check_invariants(t).worst();
    Immersion const imm = weierstrass_closed(t, k);
    p.x = to_coordinates(imm, basis);
    InducedMetric const m = induced_metric(imm.X);
    p.g = m.conformal_factor();
    p.conf_defect = m.conformality_defect();
    p.K = gauss_curvature(m);
    return p;
}

inline SurfaceGrid build_surface_grid(HolomorphicVector const& f, int k, GridSpec const& grid, unsigned jobs = 1)
{
    grid.validate();
    SuBasis const basis(static_cast<int>(f.dim()));
    using Outcome = std::variant<SurfacePoint, std::string>;
    auto const results = parallel_map<Outcome>(grid.size(), jobs, [&](std::size_t i) -> Outcome {
        complex const xi = grid.node(i);
        try {
            SurfacePoint p = evaluate_surface_point(f, k, xi, basis);
            if (!(p.tower_defect <= kNodeInvariantTolerance)) {
                return std::string("projector axioms violated (residual ") + std::to_string(p.tower_defect) + ")";
            }
            p.node = i;
            return p;
        } catch (SingularityError const& e) {
            return std::string(e.what());
        } catch (OrderExhaustedError const& e) {
            return std::string(e.what());
        }
    });
    SurfaceGrid out{grid, k, {}, {}};
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (auto const* p = std::get_if<SurfacePoint>(&results[i])) {
            out.points.push_back(*p);
        } else {
            out.excluded.push_back({i, grid.node(i), std::get<std::string>(results[i])});
        }
    }
    return out;
}

/// Conformal factor g_{xi xibar} of X_k at a point, from a first-order tower.
inline double conformal_factor_at(HolomorphicVector const& f, int k, complex xi)
{
    ProjectorTower const t = build_tower(f, k, xi, tower_order(k, 1));
    return induced_metric(weierstrass_closed(t, k).X).conformal_factor();
}

/// K = -(1/g) (1/4) Laplacian(ln g) with a 5-point central stencil of step h on ln g.
inline double curvature_finite_difference(HolomorphicVector const& f, int k, complex xi, double h = 1e-4)
{
    double const g0 = conformal_factor_at(f, k, xi);
    double lap = -4.0 * std::log(g0);
    for (complex step : {complex{h, 0.0}, complex{-h, 0.0}, complex{0.0, h}, complex{0.0, -h}}) {
        lap += std::log(conformal_factor_at(f, k, xi + step));
    }
    lap /= h * h;
    return -0.25 * lap / g0;
}

// ---------------------------------------------------------------------------------------------
// Level-by-level comparison of the surfaces X_0 ... X_{N-1}
// ---------------------------------------------------------------------------------------------

struct LevelPairComparison {
    int k1 = 0;
    int k2 = 0;
    CloudComparison residuals;
};

struct SameObjectReport {
    int n = 0;
    std::size_t nodes_used = 0;
    std::vector<ExcludedNode> excluded;
    std::vector<LevelPairComparison> pairs;  ///< every k1 <= k2 in 0..N-1
};

/// Builds the clouds of all levels (including the exploratory level N-1) on the same nodes and
/// compares every pair pointwise. Measures only; nothing here decides whether surfaces coincide.
inline SameObjectReport same_object_check(HolomorphicVector const& f, std::span<complex const> nodes,
                                          unsigned jobs = 1)
{
    int const n = static_cast<int>(f.dim());
    SuBasis const basis(n);
    using Outcome = std::variant<std::vector<Eigen::VectorXd>, std::string>;
    auto const results = parallel_map<Outcome>(nodes.size(), jobs, [&](std::size_t i) -> Outcome {
        try {
            ProjectorTower const t = build_tower(f, n - 1, nodes[i], tower_order(n - 1, 1));
            std::vector<Eigen::VectorXd> xs;
            for (int k = 0; k < n; ++k) xs.push_back(to_coordinates(weierstrass_closed(t, k), basis));
            return xs;
        } catch (SingularityError const& e) {
            return std::string(e.what());
        }
    });

    SameObjectReport report;
    report.n = n;
    std::vector<std::vector<Eigen::VectorXd>> clouds(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (auto const* xs = std::get_if<std::vector<Eigen::VectorXd>>(&results[i])) {
            for (int k = 0; k < n; ++k) clouds[static_cast<std::size_t>(k)].push_back((*xs)[static_cast<std::size_t>(k)]);
            ++report.nodes_used;
        } else {
            report.excluded.push_back({i, nodes[i], std::get<std::string>(results[i])});
        }
    }
    if (report.nodes_used == 0) return report;

    std::vector<Eigen::MatrixXd> stacked;
    for (auto const& c : clouds) stacked.push_back(stack_points(c));
    for (int k1 = 0; k1 < n; ++k1)
        for (int k2 = k1; k2 < n; ++k2) {
            report.pairs.push_back(
                {k1, k2, compare_clouds(stacked[static_cast<std::size_t>(k1)], stacked[static_cast<std::size_t>(k2)])});
        }
    return report;
}

} // namespace cpnsurf
