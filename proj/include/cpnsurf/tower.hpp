#pragma once

/// \file tower.hpp
/// \brief The P+ raising recursion, rank-1 projector towers, and the identities they satisfy.
///
/// Starting from a holomorphic f, f_j = P+^j f and P_j = f_j f_j^dagger / |f_j|^2. Each P+
/// step spends one holomorphic derivative, and every Hermitian product squares the
/// order up, so from an (m, m) jet of f the level-j projector carries order (m-j, m-j).

#include "holo.hpp"
#include "jets.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <string>
#include <vector>

namespace cpnsurf {

/// Jet order giving projectors up to `depth` with `spare` extra derivatives in each direction.
inline JetOrder tower_order(int depth, int spare = 3) { return {depth + spare, depth + spare}; }

/// P+ v = dv - v (v^dagger dv) / (v^dagger v).
inline JetVector p_plus(JetVector const& v)
{
    JetVector const dv = d(v);
    WirtingerJet const inv_norm = inverse(norm2(v));
    WirtingerJet const overlap = dot(v, dv);
    JetOrder const o = common_order(common_order(dv.order(), overlap.order()), inv_norm.order());
    WirtingerJet const coeff = overlap.truncated(o) * inv_norm.truncated(o);
    return dv.truncated(o) - coeff * v.truncated(o);
}

/// Rank-1 projector v v^dagger / (v^dagger v).
inline JetMatrix projector(JetVector const& v)
{
    JetMatrix const num = outer(v, v);
    WirtingerJet const inv_norm = inverse(norm2(v));
    JetOrder const o = common_order(num.order(), inv_norm.order());
    return inv_norm.truncated(o) * num.truncated(o);
}

/// Relative size of P+ v: |P+ v| / max(|v|, |dv|) on values.
inline double raising_ratio(JetVector const& v)
{
    double const scale = std::max(v.value().norm(), d(v).value().norm());
    if (scale == 0.0) return 0.0;
    return p_plus(v).value().norm() / scale;
}

/// Threshold on raising_ratio below which P+ is treated as having annihilated its input.
inline constexpr double kAnnihilationCutoff = 1e-8;

struct ProjectorTower {
    complex base;
    std::vector<JetVector> f;         ///< f_0 ... f_depth
    std::vector<WirtingerJet> norms;  ///< |f_j|^2
    std::vector<JetMatrix> P;         ///< P_0 ... P_depth

    int depth() const noexcept { return static_cast<int>(P.size()) - 1; }
    std::size_t dim() const { return f.front().size(); }

    JetMatrix const& projector(int k) const
    {
        require_level(k);
        return P[static_cast<std::size_t>(k)];
    }

    /// sum_{j<k} P_j at the order of P_k (zero matrix for k = 0).
    JetMatrix lower_sum(int k) const
    {
        require_level(k);
        JetOrder const o = P[static_cast<std::size_t>(k)].order();
        JetMatrix acc(dim(), base, o);
        for (int j = 0; j < k; ++j) acc += P[static_cast<std::size_t>(j)].truncated(o);
        return acc;
    }

    void require_level(int k) const
    {
        if (k < 0 || k > depth()) {
            throw std::out_of_range("tower level " + std::to_string(k) + " outside built depth "
                                    + std::to_string(depth()));
        }
    }
};

/// Builds the tower from an arbitrary starting jet vector (holomorphic or not).
inline ProjectorTower build_tower(JetVector const& f0, int k_max)
{
    if (k_max < 0) throw std::invalid_argument("tower depth must be non-negative");
    ProjectorTower t;
    t.base = f0.base();
    t.f.push_back(f0);
    for (int k = 0; k <= k_max; ++k) {
        std::string const ctx = "tower level " + std::to_string(k) + ": ";
        try {
            if (k > 0) {
                JetVector const& prev = t.f.back();
                JetVector next = p_plus(prev);
                double const scale = std::max(prev.value().norm(), d(prev).value().norm());
                if (!(next.value().norm() > kAnnihilationCutoff * scale)) {
                    throw SingularityError("P+ annihilated input at level " + std::to_string(k - 1), t.base);
                }
                t.f.push_back(std::move(next));
            }
            t.norms.push_back(norm2(t.f.back()));
            t.P.push_back(cpnsurf::projector(t.f.back()));
        } catch (SingularityError const& e) {
            throw SingularityError(ctx + e.detail(), e.point());
        } catch (OrderExhaustedError const& e) {
            throw e.with_context(ctx);
        }
    }
    return t;
}

inline ProjectorTower build_tower(HolomorphicVector const& f, int k_max, complex xi, JetOrder order)
{
    if (k_max > static_cast<int>(f.dim()) - 1) {
        throw std::invalid_argument("tower depth " + std::to_string(k_max) + " exceeds N-1 = "
                                    + std::to_string(f.dim() - 1));
    }
    return build_tower(eval_jet(f, xi, order), k_max);
}

inline ProjectorTower build_tower(HolomorphicVector const& f, int k_max, complex xi)
{
    return build_tower(f, k_max, xi, tower_order(k_max));
}

// ---------------------------------------------------------------------------------------------
// Projector axioms
// ---------------------------------------------------------------------------------------------

struct TowerInvariants {
    double hermiticity = 0.0;
    double idempotency = 0.0;
    double trace = 0.0;          ///< max |tr P_j - 1|
    double orthogonality = 0.0;  ///< max ||P_j P_l||, j != l
    double completeness = 0.0;   ///< ||sum P_j - I||, only when depth = N-1
    bool complete = false;

    double worst() const { return std::max({hermiticity, idempotency, trace, orthogonality, completeness}); }
};

inline TowerInvariants check_invariants(ProjectorTower const& t)
{
    TowerInvariants out;
    auto const n = static_cast<Eigen::Index>(t.dim());
    std::vector<Eigen::MatrixXcd> values;
    for (auto const& p : t.P) values.push_back(p.value());
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t j = 0; j < values.size(); ++j) {
        auto const& p = values[j];
        out.hermiticity = std::max(out.hermiticity, max_entry(p - p.adjoint()));
        out.idempotency = std::max(out.idempotency, max_entry(p * p - p));
        out.trace = std::max(out.trace, std::abs(p.trace() - 1.0));
        for (std::size_t l = 0; l < values.size(); ++l) {
            if (l != j) out.orthogonality = std::max(out.orthogonality, max_entry(p * values[l]));
        }
        sum += p;
    }
    if (t.depth() == static_cast<int>(t.dim()) - 1) {
        out.complete = true;
        out.completeness = max_entry(sum - Eigen::MatrixXcd::Identity(n, n));
    }
    return out;
}

/// max |(f_j)^dagger f_l| / (|f_j| |f_l|) over j != l.
inline double orthogonality_defect(ProjectorTower const& t)
{
    double worst = 0.0;
    for (std::size_t j = 0; j < t.f.size(); ++j) {
        Eigen::VectorXcd const fj = t.f[j].value();
        for (std::size_t l = j + 1; l < t.f.size(); ++l) {
            Eigen::VectorXcd const fl = t.f[l].value();
            worst = std::max(worst, std::abs(fj.dot(fl)) / (fj.norm() * fl.norm()));
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------------------------
// Commutators [d P_k, P_k] and [dbar P_k, P_k]
// ---------------------------------------------------------------------------------------------

struct Commutators {
    JetMatrix plus;         ///< [d P_k, P_k] as a literal bracket
    JetMatrix minus;        ///< [dbar P_k, P_k] as a literal bracket
    JetMatrix plus_rank1;   ///< the same, from the rank-1 closed form
    JetMatrix minus_rank1;
    double identity_residual = 0.0;  ///< max-entry disagreement between the two routes
};

/// [d P, P] and [dbar P, P] as literal brackets, for any projector-valued jet.
inline std::pair<JetMatrix, JetMatrix> bracket_commutators(JetMatrix const& P)
{
    JetMatrix const dP = d(P);
    JetMatrix const dbarP = dbar(P);
    JetMatrix plus = commutator(dP, P.truncated(dP.order()));
    JetMatrix minus = commutator(dbarP, P.truncated(dbarP.order()));
    return {std::move(plus), std::move(minus)};
}

inline Commutators commutators(ProjectorTower const& t, int k)
{
    t.require_level(k);
    auto const ks = static_cast<std::size_t>(k);
    JetMatrix const& P = t.P[ks];
    auto [plus, minus] = bracket_commutators(P);

    JetMatrix plus_rank1;
    JetMatrix minus_rank1;
    if (k == 0) {
        // Instanton forms: [dP0,P0] = (P+f) f^dagger/|f|^2, [dbar P0,P0] = -f (P+f)^dagger/|f|^2.
        JetVector const raised = t.depth() >= 1 ? t.f[1] : p_plus(t.f[0]);
        WirtingerJet const inv_norm = inverse(t.norms[0]);
        JetMatrix const up = outer(raised, t.f[0]);
        JetMatrix const down = outer(t.f[0], raised);
        plus_rank1 = inv_norm.truncated(up.order()) * up;
        minus_rank1 = complex{-1.0} * (inv_norm.truncated(down.order()) * down);
    } else {
        JetVector const& fk = t.f[ks];
        JetVector const& fprev = t.f[ks - 1];
        WirtingerJet const inv_norm = inverse(t.norms[ks - 1]);
        JetMatrix const up = outer(fk, fprev);
        JetMatrix const down = outer(fprev, fk);
        JetMatrix const dP = d(P);
        JetMatrix const dbarP = dbar(P);
        JetOrder const op = common_order(up.order(), dP.order());
        JetOrder const om = common_order(down.order(), dbarP.order());
        plus_rank1 = dP.truncated(op) + complex{2.0} * (inv_norm.truncated(op) * up.truncated(op));
        minus_rank1 = complex{-1.0} * dbarP.truncated(om) - complex{2.0} * (inv_norm.truncated(om) * down.truncated(om));
    }

    double const rp = max_entry(plus.value() - plus_rank1.value());
    double const rm = max_entry(minus.value() - minus_rank1.value());
    return {std::move(plus), std::move(minus), std::move(plus_rank1), std::move(minus_rank1), std::max(rp, rm)};
}

// ---------------------------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------------------------

/// Max-entry norm of d[dbar P, P] + dbar[d P, P] for any projector-valued jet of order >= (1,1).
inline double el_residual(JetMatrix const& P)
{
    auto const [plus, minus] = bracket_commutators(P);
    JetMatrix const a = dbar(plus);
    JetMatrix const b = d(minus);
    JetOrder const o = common_order(a.order(), b.order());
    return max_entry(a.truncated(o) + b.truncated(o));
}

inline double el_residual(ProjectorTower const& t, int k) { return el_residual(t.projector(k)); }

struct TelescopeResiduals {
    double sum_identity = 0.0;         ///< d(sum_{j<k} P_j) vs f_k f_{k-1}^dagger / |f_{k-1}|^2
    double derivative_identity = 0.0;  ///< d(f_{k-1}^dagger) vs -(|f_{k-1}|^2/|f_{k-2}|^2) f_{k-2}^dagger; k >= 2
    bool derivative_checked = false;

    double worst() const { return std::max(sum_identity, derivative_identity); }
};

inline TelescopeResiduals telescope_residuals(ProjectorTower const& t, int k)
{
    if (k < 1) throw std::invalid_argument("telescope identity needs k >= 1");
    t.require_level(k);
    auto const ks = static_cast<std::size_t>(k);
    TelescopeResiduals out;

    JetMatrix sum(t.dim(), t.base, t.P[ks - 1].order());
    for (std::size_t j = 0; j < ks; ++j) sum += t.P[j].truncated(sum.order());
    Eigen::MatrixXcd const lhs = d(sum).value();
    Eigen::VectorXcd const fk = t.f[ks].value();
    Eigen::VectorXcd const fprev = t.f[ks - 1].value();
    Eigen::MatrixXcd const rhs = fk * fprev.adjoint() / t.norms[ks - 1].value();
    out.sum_identity = max_entry(lhs - rhs);

    if (k >= 2) {
        out.derivative_checked = true;
        Eigen::VectorXcd const lhs_vec = d(conj(t.f[ks - 1])).value();
        Eigen::VectorXcd const f2 = t.f[ks - 2].value();
        complex const ratio = t.norms[ks - 1].value() / t.norms[ks - 2].value();
        Eigen::VectorXcd const rhs_vec = -ratio * f2.conjugate();
        out.derivative_identity = (lhs_vec - rhs_vec).cwiseAbs().maxCoeff();
    }
    return out;
}

inline double telescope_check(ProjectorTower const& t, int k) { return telescope_residuals(t, k).worst(); }

/// |P+ f_{N-1}| relative to max(|f_{N-1}|, |d f_{N-1}|); needs a full-depth tower.
inline double annihilation_residual(ProjectorTower const& t)
{
    if (t.depth() != static_cast<int>(t.dim()) - 1) {
        throw std::invalid_argument("annihilation check needs a tower of depth N-1");
    }
    return raising_ratio(t.f.back());
}

} // namespace cpnsurf
