// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.

#include <cpnsurf/commands.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace cpnsurf;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Tracks the worst value of one quantity against its bound.
struct Bound {
    std::string label;
    double tolerance;
    double worst = 0.0;
    std::string where;

    void see(double v, std::string const& at)
    {
        if (std::isnan(worst)) return;
        if (where.empty() || std::isnan(v) || v > worst) {
            worst = v;
            where = at;
        }
    }
    bool ok() const { return worst <= tolerance; }
    std::string str() const
    {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s=%.3g (tol %.0e%s%s)", label.c_str(), worst, tolerance,
                      where.empty() ? "" : ", worst at ", where.c_str());
        return buf;
    }
};

Outcome from_bounds(std::initializer_list<Bound const*> bounds, std::string extra = {})
{
    Outcome o;
    for (auto const* b : bounds) {
        o.pass = o.pass && b->ok();
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += b->str();
    }
    if (!extra.empty()) o.detail += "; " + extra;
    return o;
}

std::vector<complex> const kGrid = GridSpec{}.nodes();  // 9x9 over |Re|, |Im| <= 2
std::vector<complex> const kLambdas{0.5, 2.0, complex{1.0, 1.0}};

ProjectorTower full_tower(int n, complex xi, int spare = 2)
{
    return build_tower(veronese(n), n - 1, xi, tower_order(n - 1, spare));
}

Outcome projector_suite()
{
    auto const t0 = std::chrono::steady_clock::now();
    Bound b{"axioms", 1e-9};
    for (int n = 2; n <= 4; ++n)
        for (complex xi : kGrid) {
            ProjectorTower const t = full_tower(n, xi, 0);
            TowerInvariants const inv = check_invariants(t);
            if (!inv.complete) b.see(INFINITY, "incomplete tower N=" + std::to_string(n));
            b.see(inv.worst(), "N=" + std::to_string(n) + " " + describe(xi));
        }
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Bound time{"runtime_s", 10.0};
    time.see(secs, "");
    return from_bounds({&b, &time});
}

Outcome harmonicity()
{
    Bound el{"el_residual", 1e-8};
    for (int n = 2; n <= 4; ++n)
        for (complex xi : kGrid) {
            ProjectorTower const t = full_tower(n, xi);
            for (int k = 0; k < n; ++k) el.see(el_residual(t, k), "N=" + std::to_string(n) + " " + describe(xi, k));
        }
    double const control = el_residual(build_tower(control_vector(2, 1.0, JetOrder{3, 3}), 0), 0);
    Outcome o = from_bounds({&el}, "control el_residual=" + format_double(control) + " (needs >= 0.1)");
    o.pass = o.pass && control >= 0.1;
    return o;
}

Outcome commutator_identity()
{
    Bound b{"bracket_vs_rank1", 1e-10};
    for (int n = 2; n <= 4; ++n)
        for (complex xi : kGrid) {
            ProjectorTower const t = full_tower(n, xi, 1);
            for (int k = 1; k < n; ++k) {
                b.see(commutators(t, k).identity_residual, "N=" + std::to_string(n) + " " + describe(xi, k));
            }
        }
    return from_bounds({&b});
}

Outcome induction_identities()
{
    Bound b{"telescope", 1e-9};
    for (int n = 2; n <= 5; ++n)
        for (complex xi : kGrid) {
            ProjectorTower const t = full_tower(n, xi, 1);
            for (int k = 1; k < n; ++k) b.see(telescope_check(t, k), "N=" + std::to_string(n) + " " + describe(xi, k));
        }
    return from_bounds({&b});
}

Outcome weierstrass()
{
    Bound deriv{"derivative", 1e-10};
    for (int n = 2; n <= 4; ++n)
        for (complex xi : kGrid) {
            ProjectorTower const t = full_tower(n, xi, 1);
            for (int k = 0; k < n; ++k) {
                deriv.see(weierstrass_derivative_residual(t, k), "N=" + std::to_string(n) + " " + describe(xi, k));
            }
        }
    Bound integral{"contour_vs_closed_form", 1e-7};
    complex const end{1.0, 1.0};
    for (int n = 3; n <= 4; ++n) {
        HolomorphicVector const f = veronese(n);
        for (int k = 0; k <= n - 2; ++k) {
            Eigen::MatrixXcd const diff = weierstrass_closed(build_tower(f, k, end), k).value()
                                          - weierstrass_closed(build_tower(f, k, 0.0), k).value();
            auto const a = straight_path(0.0, end);
            auto const b = l_path(0.0, end);
            std::string const at = "N=" + std::to_string(n) + " k=" + std::to_string(k);
            integral.see(max_entry(weierstrass_integrate(f, k, a) - diff), at + " straight");
            integral.see(max_entry(weierstrass_integrate(f, k, b) - diff), at + " L-path");
        }
    }
    return from_bounds({&deriv, &integral});
}

Outcome lax_pair()
{
    Bound lax{"lax", 1e-8};
    Bound inv{"phi_phi_inv", 1e-12};
    Bound asym{"phi_at_1e6", 1e-5};
    for (int n = 2; n <= 4; ++n)
        for (complex xi : kGrid) {
            ProjectorTower const t = full_tower(n, xi);
            auto const id = Eigen::MatrixXcd::Identity(n, n);
            for (int k = 0; k <= std::min(1, n - 1); ++k) {
                for (complex lambda : kLambdas) {
                    std::string const at = "N=" + std::to_string(n) + " " + describe(xi, k, lambda);
                    lax.see(lax_residual(t, k, lambda), at);
                    Wavefunction const w = sym_tafel_phi(t, k, lambda);
                    inv.see(max_entry(w.phi.value() * w.phi_inv.value() - id), at);
                }
                asym.see(max_entry(sym_tafel_phi(t, k, 1e6).phi.value() - id),
                         "N=" + std::to_string(n) + " " + describe(xi, k));
            }
        }
    return from_bounds({&lax, &inv, &asym});
}

Outcome sym_tafel()
{
    Bound eq{"equivalence", 1e-10};
    Bound indep{"lambda_independence", 1e-11};
    for (int n = 2; n <= 4; ++n)
        for (complex xi : kGrid) {
            ProjectorTower const t = full_tower(n, xi, 1);
            for (int k = 0; k < n; ++k) {
                for (complex lambda : kLambdas) {
                    eq.see(sym_tafel_equivalence_residual(t, k, lambda),
                           "N=" + std::to_string(n) + " " + describe(xi, k, lambda));
                }
                Eigen::MatrixXcd ref;
                for (complex lambda : {complex{0.5}, complex{2.0}, complex{-3.0}, complex{1.0, 1.0}}) {
                    std::string const at = "N=" + std::to_string(n) + " " + describe(xi, k, lambda);
                    Eigen::MatrixXcd const x = ((1.0 - lambda * lambda) / 2.0) * sym_tafel_immersion(t, k, lambda).value();
                    if (ref.size() == 0) ref = x;
                    indep.see(max_entry(x - ref), at);
                }
            }
        }
    return from_bounds({&eq, &indep});
}

Outcome geometry()
{
    Bound radius{"|x|-0.5", 1e-9};
    Bound curv{"K-4", 1e-7};
    SurfaceGrid const sphere = build_surface_grid(veronese(2), 0, GridSpec{});
    for (auto const& p : sphere.points) {
        radius.see(std::abs(p.x.norm() - 0.5), describe(p.xi));
        curv.see(std::abs(p.K - 4.0), describe(p.xi));
    }
    Bound conf{"conformality", 1e-10};
    Bound oracle{"K_jet_vs_fd", 1e-5};
    for (int n = 2; n <= 4; ++n)
        for (int k = 0; k <= n - 2; ++k) {
            SurfaceGrid const s = build_surface_grid(veronese(n), k, GridSpec{});
            for (auto const& p : s.points) {
                std::string const at = "N=" + std::to_string(n) + " " + describe(p.xi, k);
                conf.see(p.conf_defect, at);
                if (!GridSpec{}.interior(p.node)) continue;
                oracle.see(std::abs(p.K - curvature_finite_difference(veronese(n), k, p.xi)), at);
            }
        }
    std::string const excluded = "K oracle on interior nodes; excluded nodes=" + std::to_string(sphere.excluded.size());
    Outcome o = from_bounds({&radius, &curv, &conf, &oracle}, excluded);
    o.pass = o.pass && sphere.excluded.empty() && sphere.points.size() == 81;
    return o;
}

Outcome embedding()
{
    GridSpec grid;
    grid.n_re = grid.n_im = 15;
    SurfaceGrid const s = build_surface_grid(veronese(3), 1, grid);
    auto const xs = s.coordinates();
    int const rank = span_rank(xs, 1e-8);
    Eigen::VectorXd const sv = centered_singular_values(xs);
    char buf[200];
    std::snprintf(buf, sizeof buf, "points=%zu in R^%d, rank=%d (singular values %.3g %.3g %.3g | %.3g)", xs.size(),
                  static_cast<int>(xs.front().size()), rank, sv(0), sv(1), sv(2), sv(3));
    return {rank == 3 && s.points.size() == 225, buf};
}

Outcome annihilation()
{
    Bound b{"|P+^N f|_rel", 1e-8};
    for (int n = 2; n <= 5; ++n)
        for (complex xi : kGrid) {
            ProjectorTower const t = full_tower(n, xi, 1);
            b.see(annihilation_residual(t), "N=" + std::to_string(n) + " " + describe(xi));
        }
    return from_bounds({&b});
}

std::string slurp(std::filesystem::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    std::filesystem::path const base = std::filesystem::current_path() / "acceptance_determinism";
    std::filesystem::remove_all(base);
    std::string const config = std::string(CPNSURF_CONFIG_DIR) + "/veronese3.json";
    std::vector<std::string> files;
    for (char const* run : {"run1", "run2"}) {
        std::string const cmd = std::string("\"") + CPNSURF_CLI + "\" surface --config \"" + config + "\" --output \""
                                + (base / run).string() + "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0) return {false, "surface run failed: " + cmd};
    }
    int compared = 0;
    for (auto const& entry : std::filesystem::directory_iterator(base / "run1")) {
        if (entry.path().extension() != ".csv") continue;
        std::string const a = slurp(entry.path());
        std::string const b = slurp(base / "run2" / entry.path().filename());
        if (a.empty() || a != b) return {false, entry.path().filename().string() + " differs between runs"};
        ++compared;
    }
    std::filesystem::remove_all(base);
    return {compared > 0, std::to_string(compared) + " CSV files byte-identical across two CLI runs"};
}

} // namespace

int main()
{
    struct Criterion {
        char const* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> const criteria{
        {"projector tower axioms, veronese N=2..4", projector_suite},
        {"harmonicity and control discrimination", harmonicity},
        {"commutator identity, k >= 1", commutator_identity},
        {"induction (telescoping) identities", induction_identities},
        {"Weierstrass closed form and path independence", weierstrass},
        {"Lax pair and wavefunction", lax_pair},
        {"Sym-Tafel equals Weierstrass", sym_tafel},
        {"sphere geometry, conformality, curvature oracle", geometry},
        {"veronese(3) k=1 spans R^3", embedding},
        {"P+ annihilation at level N-1, N <= 5", annihilation},
        {"surface CSV determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto const t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (std::exception const& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::printf("%s  AC%-2zu %s [%.2fs] %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
