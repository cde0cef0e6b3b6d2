#pragma once

/// \file commands.hpp
/// \brief Orchestration behind the `verify`, `surface`, `compare` and `curvature` subcommands.

#include "config.hpp"
#include "geometry.hpp"
#include "immersion.hpp"
#include "parallel.hpp"
#include "surface.hpp"
#include "tower.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cpnsurf {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v)
{
    char buf[32];
    auto const res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

inline json complex_json(complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

// ---------------------------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------------------------

enum class CheckStatus { pass, fail, skipped };

inline char const* to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
    }
    return "?";
}

struct CheckResult {
    std::string name;
    double worst = 0.0;
    std::string where;
    double tolerance = 0.0;
    CheckStatus status = CheckStatus::pass;
    double seconds = 0.0;
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool passed() const
    {
        return std::none_of(checks.begin(), checks.end(), [](auto const& c) { return c.status == CheckStatus::fail; });
    }

    json to_json() const
    {
        json arr = json::array();
        for (auto const& c : checks) {
            json j{{"name", c.name},         {"worst_residual", c.worst}, {"where", c.where},
                   {"tolerance", c.tolerance}, {"status", to_string(c.status)}, {"wall_time_s", c.seconds}};
            if (!c.note.empty()) j["note"] = c.note;
            arr.push_back(std::move(j));
        }
        return json{{"checks", std::move(arr)}, {"pass", passed()}};
    }
};

struct VerifyOptions {
    bool control = false;  ///< replace the input with the non-harmonic vector (1, xi + conj(xi), 0, ...)
    unsigned jobs = 1;
};

/// Worst residual with a label of where it occurred; NaN counts as worst.
struct Worst {
    double value = 0.0;
    std::string where;

    void update(double v, std::function<std::string()> const& label)
    {
        if (std::isnan(value)) return;
        if (where.empty() || std::isnan(v) || v > value) {
            value = v;
            where = label();
        }
    }

    void merge(Worst const& o)
    {
        if (!o.where.empty()) update(o.value, [&] { return o.where; });
    }
};

inline std::string describe(complex xi, int k = -1, std::optional<complex> lambda = std::nullopt)
{
    std::string s = "xi=" + format_point(xi);
    if (k >= 0) s += " k=" + std::to_string(k);
    if (lambda) s += " lambda=" + format_point(*lambda);
    return s;
}

/// Non-harmonic control vector (1, xi + conj(xi), 0, ..., 0).
inline JetVector control_vector(int n, complex xi, JetOrder order)
{
    JetVector v(static_cast<std::size_t>(n), xi, order);
    v[0] = WirtingerJet::constant(xi, order, 1.0);
    v[1] = WirtingerJet::variable(xi, order) + WirtingerJet::conj_variable(xi, order);
    return v;
}

inline VerificationReport cmd_verify(RunConfig const& cfg, VerifyOptions const& opt = {})
{
    using clock = std::chrono::steady_clock;
    auto const seconds_since = [](clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    int const n = cfg.n;
    HolomorphicVector const f = cfg.holomorphic_data();
    std::vector<complex> const nodes = cfg.grid.nodes();
    int const depth = opt.control ? 0 : n - 1;
    std::vector<int> const levels = opt.control ? std::vector<int>{0} : cfg.levels;
    Tolerances const& tol = cfg.tolerances;

    auto t_build = clock::now();
    auto const towers = parallel_map<ProjectorTower>(nodes.size(), opt.jobs, [&](std::size_t i) {
        if (opt.control) return build_tower(control_vector(n, nodes[i], JetOrder{3, 3}), 0);
        return build_tower(f, depth, nodes[i], tower_order(depth, 2));
    });
    double const build_seconds = seconds_since(t_build);

    VerificationReport report;
    // Runs `per_node` over every tower in parallel and folds the per-node worst values in grid order.
    auto run = [&](std::string name, double tolerance, auto&& per_node, std::string note = {}) {
        auto const t0 = clock::now();
        auto const partial = parallel_map<Worst>(towers.size(), opt.jobs, [&](std::size_t i) {
            Worst w;
            per_node(towers[i], w);
            return w;
        });
        Worst total;
        for (auto const& w : partial) total.merge(w);
        CheckResult c{std::move(name), total.value, total.where, tolerance, CheckStatus::pass, 0.0, std::move(note)};
        if (!(total.value <= tolerance)) c.status = CheckStatus::fail;
        c.seconds = seconds_since(t0) + (report.checks.empty() ? build_seconds : 0.0);
        report.checks.push_back(std::move(c));
    };
    auto skip = [&](std::string name, double tolerance, std::string note) {
        report.checks.push_back({std::move(name), 0.0, "", tolerance, CheckStatus::skipped, 0.0, std::move(note)});
    };

    run("projector_axioms", tol.projector, [&](ProjectorTower const& t, Worst& w) {
        w.update(check_invariants(t).worst(), [&] { return describe(t.base); });
        w.update(orthogonality_defect(t), [&] { return describe(t.base) + " (vector orthogonality)"; });
    });

    run("el_residual", tol.residual, [&](ProjectorTower const& t, Worst& w) {
        for (int k = 0; k <= t.depth(); ++k) w.update(el_residual(t, k), [&] { return describe(t.base, k); });
    });

    if (opt.control) {
        skip("commutator_identity", tol.identity, "control input has no tower beyond level 0");
        skip("telescope", tol.telescope, "control input has no tower beyond level 0");
        skip("annihilation", tol.annihilation, "control input has no tower beyond level 0");
    } else {
        run("commutator_identity", tol.identity, [&](ProjectorTower const& t, Worst& w) {
            for (int k = 1; k <= t.depth(); ++k) {
                w.update(commutators(t, k).identity_residual, [&] { return describe(t.base, k); });
            }
        });
        run("telescope", tol.telescope, [&](ProjectorTower const& t, Worst& w) {
            for (int k = 1; k <= t.depth(); ++k) w.update(telescope_check(t, k), [&] { return describe(t.base, k); });
        });
        run("annihilation", tol.annihilation, [&](ProjectorTower const& t, Worst& w) {
            w.update(annihilation_residual(t), [&] { return describe(t.base); });
        });
    }

    run("weierstrass_derivative", tol.identity, [&](ProjectorTower const& t, Worst& w) {
        for (int k : levels) w.update(weierstrass_derivative_residual(t, k), [&] { return describe(t.base, k); });
    });

    run("lax_residual", tol.residual, [&](ProjectorTower const& t, Worst& w) {
        for (int k : levels)
            for (complex lambda : cfg.lambda_values)
                w.update(lax_residual(t, k, lambda), [&] { return describe(t.base, k, lambda); });
    });

    run("wavefunction_inverse", tol.inverse, [&](ProjectorTower const& t, Worst& w) {
        for (int k : levels)
            for (complex lambda : cfg.lambda_values) {
                Wavefunction const wf = sym_tafel_phi(t, k, lambda);
                auto const id = Eigen::MatrixXcd::Identity(n, n);
                w.update(max_entry(wf.phi.value() * wf.phi_inv.value() - id),
                         [&] { return describe(t.base, k, lambda); });
            }
    });

    run("wavefunction_asymptotic", tol.asymptotic, [&](ProjectorTower const& t, Worst& w) {
        complex const large{1e6, 0.0};
        for (int k : levels) {
            Wavefunction const wf = sym_tafel_phi(t, k, large);
            w.update(max_entry(wf.phi.value() - Eigen::MatrixXcd::Identity(n, n)),
                     [&] { return describe(t.base, k, large); });
        }
    });

    run("sym_tafel_equivalence", tol.identity, [&](ProjectorTower const& t, Worst& w) {
        for (int k : levels)
            for (complex lambda : cfg.lambda_values)
                w.update(sym_tafel_equivalence_residual(t, k, lambda), [&] { return describe(t.base, k, lambda); });
    });

    run("lambda_independence", tol.lambda_independence, [&](ProjectorTower const& t, Worst& w) {
        for (int k : levels) {
            complex const l0 = cfg.lambda_values.front();
            Eigen::MatrixXcd const ref = ((1.0 - l0 * l0) / 2.0) * sym_tafel_immersion(t, k, l0).value();
            for (complex lambda : cfg.lambda_values) {
                Eigen::MatrixXcd const x = ((1.0 - lambda * lambda) / 2.0) * sym_tafel_immersion(t, k, lambda).value();
                w.update(max_entry(x - ref), [&] { return describe(t.base, k, lambda); });
            }
        }
    });

    run("conformality", tol.conformality, [&](ProjectorTower const& t, Worst& w) {
        for (int k : levels) {
            w.update(induced_metric(weierstrass_closed(t, k).X).conformality_defect(),
                     [&] { return describe(t.base, k); });
        }
    });

    return report;
}

// ---------------------------------------------------------------------------------------------
// surface
// ---------------------------------------------------------------------------------------------

inline std::string csv_header(int n)
{
    std::string h = "re_xi,im_xi";
    for (int a = 1; a <= n * n - 1; ++a) h += ",x_" + std::to_string(a);
    h += ",g,K,conf_defect\n";
    return h;
}

inline std::string surface_csv(SurfaceGrid const& s, int n)
{
    std::string out = csv_header(n);
    for (auto const& p : s.points) {
        out += format_double(p.xi.real());
        out += ',';
        out += format_double(p.xi.imag());
        for (Eigen::Index a = 0; a < p.x.size(); ++a) {
            out += ',';
            out += format_double(p.x(a));
        }
        out += ',' + format_double(p.g) + ',' + format_double(p.K) + ',' + format_double(p.conf_defect) + '\n';
    }
    return out;
}

inline json excluded_json(std::vector<ExcludedNode> const& excluded)
{
    json arr = json::array();
    for (auto const& e : excluded) arr.push_back({{"node", e.node}, {"xi", complex_json(e.xi)}, {"reason", e.reason}});
    return arr;
}

inline constexpr double kSpanTolerance = 1e-8;

inline json surface_summary(SurfaceGrid const& s)
{
    json j;
    j["k"] = s.k;
    j["rows"] = s.points.size();
    j["excluded"] = excluded_json(s.excluded);
    if (s.points.size() >= 2) {
        auto const xs = s.coordinates();
        j["span_rank"] = span_rank(xs, kSpanTolerance);
    }
    if (!s.points.empty()) {
        double kmin = s.points.front().K, kmax = kmin, conf = 0.0, tower = 0.0;
        for (auto const& p : s.points) {
            kmin = std::min(kmin, p.K);
            kmax = std::max(kmax, p.K);
            conf = std::max(conf, p.conf_defect);
            tower = std::max(tower, p.tower_defect);
        }
        j["residuals"] = {{"max_conf_defect", conf}, {"max_projector_axiom_residual", tower},
                          {"K_min", kmin}, {"K_max", kmax}};
    }
    return j;
}

inline json surface_json(SurfaceGrid const& s, RunConfig const& cfg)
{
    json j;
    j["config"] = cfg.source;
    j["summary"] = surface_summary(s);
    json pts = json::array();
    for (auto const& p : s.points) {
        json x = json::array();
        for (Eigen::Index a = 0; a < p.x.size(); ++a) x.push_back(p.x(a));
        pts.push_back({{"xi", complex_json(p.xi)}, {"x", std::move(x)}, {"g", p.g}, {"K", p.K},
                       {"conf_defect", p.conf_defect}});
    }
    j["points"] = std::move(pts);
    return j;
}

/// Wavefront OBJ: one vertex per included node (three selected coordinates), quads over grid cells
/// whose four corners were all included.
inline std::string surface_obj(SurfaceGrid const& s, int n, std::array<int, 3> coords)
{
    std::string out = "# cpnsurf surface level k=" + std::to_string(s.k) + ", N=" + std::to_string(n) + "\n";
    out += "# vertices are coordinates (x_" + std::to_string(coords[0]) + ", x_" + std::to_string(coords[1]) + ", x_"
           + std::to_string(coords[2]) + ") of R^" + std::to_string(n * n - 1) + "\n";
    std::vector<long> vertex_of(s.grid.size(), 0);
    long next = 1;
    for (auto const& p : s.points) {
        vertex_of[p.node] = next++;
        out += "v " + format_double(p.x(coords[0] - 1)) + ' ' + format_double(p.x(coords[1] - 1)) + ' '
               + format_double(p.x(coords[2] - 1)) + '\n';
    }
    auto const nre = static_cast<std::size_t>(s.grid.n_re);
    auto const nim = static_cast<std::size_t>(s.grid.n_im);
    for (std::size_t j = 0; j + 1 < nim; ++j)
        for (std::size_t i = 0; i + 1 < nre; ++i) {
            long const a = vertex_of[j * nre + i];
            long const b = vertex_of[j * nre + i + 1];
            long const c = vertex_of[(j + 1) * nre + i + 1];
            long const e = vertex_of[(j + 1) * nre + i];
            if (a && b && c && e) {
                out += "f " + std::to_string(a) + ' ' + std::to_string(b) + ' ' + std::to_string(c) + ' '
                       + std::to_string(e) + '\n';
            }
        }
    return out;
}

inline void write_file(std::filesystem::path const& path, std::string const& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

/// Writes surface_k<k>.csv (and .json / .obj when configured) per level; returns a run summary.
inline json cmd_surface(RunConfig const& cfg, std::filesystem::path const& out_dir, unsigned jobs = 1)
{
    std::filesystem::create_directories(out_dir);
    HolomorphicVector const f = cfg.holomorphic_data();
    json summary = json::array();
    for (int k : cfg.levels) {
        SurfaceGrid const s = build_surface_grid(f, k, cfg.grid, jobs);
        std::string const stem = "surface_k" + std::to_string(k);
        json entry = surface_summary(s);
        json files = json::array();
        write_file(out_dir / (stem + ".csv"), surface_csv(s, cfg.n));
        files.push_back(stem + ".csv");
        if (cfg.output.wants(OutputFormat::json)) {
            write_file(out_dir / (stem + ".json"), surface_json(s, cfg).dump(2) + "\n");
            files.push_back(stem + ".json");
        }
        if (cfg.output.wants(OutputFormat::obj)) {
            write_file(out_dir / (stem + ".obj"), surface_obj(s, cfg.n, cfg.output.obj_coordinates));
            files.push_back(stem + ".obj");
        }
        entry["files"] = std::move(files);
        summary.push_back(std::move(entry));
    }
    return json{{"N", cfg.n}, {"output", out_dir.string()}, {"levels", std::move(summary)}};
}

// ---------------------------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------------------------

struct CompareResult {
    json table;
    bool passed = true;
};

/// Straight path from `from` to `to`, and the L-shaped path through (Re to, Im from).
inline std::vector<complex> straight_path(complex from, complex to) { return {from, to}; }
inline std::vector<complex> l_path(complex from, complex to) { return {from, {to.real(), from.imag()}, to}; }

inline CompareResult cmd_compare(RunConfig const& cfg, unsigned jobs = 1)
{
    HolomorphicVector const f = cfg.holomorphic_data();
    std::vector<complex> const nodes = cfg.grid.nodes();
    int const top = *std::max_element(cfg.levels.begin(), cfg.levels.end());

    struct NodeRows {
        json sym_tafel = json::array();
        json integration = json::array();
        double st_worst = 0.0;
        double int_worst = 0.0;
    };
    auto const rows = parallel_map<NodeRows>(nodes.size(), jobs, [&](std::size_t i) {
        NodeRows r;
        complex const xi = nodes[i];
        ProjectorTower const t = build_tower(f, top, xi, tower_order(top, 1));
        ProjectorTower const t0 = build_tower(f, top, cfg.base_point, tower_order(top, 1));
        for (int k : cfg.levels) {
            for (complex lambda : cfg.lambda_values) {
                double const res = sym_tafel_equivalence_residual(t, k, lambda);
                r.st_worst = std::max(r.st_worst, res);
                r.sym_tafel.push_back({{"k", k}, {"lambda", complex_json(lambda)}, {"xi", complex_json(xi)},
                                       {"residual", res}});
            }
            Eigen::MatrixXcd const diff = weierstrass_closed(t, k).value() - weierstrass_closed(t0, k).value();
            auto const straight = straight_path(cfg.base_point, xi);
            auto const bent = l_path(cfg.base_point, xi);
            Eigen::MatrixXcd const a = weierstrass_integrate(f, k, straight, cfg.quadrature);
            Eigen::MatrixXcd const b = weierstrass_integrate(f, k, bent, cfg.quadrature);
            double const res = max_entry(a - diff);
            double const path = max_entry(a - b);
            r.int_worst = std::max({r.int_worst, res, path});
            r.integration.push_back({{"k", k},
                                     {"xi", complex_json(xi)},
                                     {"base_point", complex_json(cfg.base_point)},
                                     {"residual", res},
                                     {"path_independence", path}});
        }
        return r;
    });

    CompareResult out;
    json st = json::array();
    json integ = json::array();
    double st_worst = 0.0;
    double int_worst = 0.0;
    for (auto const& r : rows) {
        for (auto const& row : r.sym_tafel) st.push_back(row);
        for (auto const& row : r.integration) integ.push_back(row);
        st_worst = std::max(st_worst, r.st_worst);
        int_worst = std::max(int_worst, r.int_worst);
    }
    out.passed = st_worst <= cfg.tolerances.identity && int_worst <= cfg.tolerances.integration;
    out.table = json{{"N", cfg.n},
                     {"max_sym_tafel_residual", st_worst},
                     {"max_integration_residual", int_worst},
                     {"tolerances", {{"sym_tafel", cfg.tolerances.identity}, {"integration", cfg.tolerances.integration}}},
                     {"pass", out.passed},
                     {"sym_tafel", std::move(st)},
                     {"integration", std::move(integ)}};
    return out;
}

// ---------------------------------------------------------------------------------------------
// curvature
// ---------------------------------------------------------------------------------------------

inline constexpr double kCurvatureOracleTolerance = 1e-5;

/// Per-level Gaussian curvature from jets, cross-checked against finite differences of ln g,
/// plus the level-pair comparison table for the full tower.
inline CompareResult cmd_curvature(RunConfig const& cfg, unsigned jobs = 1)
{
    HolomorphicVector const f = cfg.holomorphic_data();
    CompareResult out;
    json levels = json::array();
    for (int k : cfg.levels) {
        SurfaceGrid const s = build_surface_grid(f, k, cfg.grid, jobs);
        // The oracle runs on interior nodes only; near the rectangle's corners g is small and
        // the step-1e-4 stencil on ln g is roundoff-limited.
        auto const fd = parallel_map<std::optional<double>>(s.points.size(), jobs, [&](std::size_t i) {
            auto const& p = s.points[i];
            if (!cfg.grid.interior(p.node)) return std::optional<double>{};
            return std::optional<double>{curvature_finite_difference(f, k, p.xi)};
        });
        json pts = json::array();
        double worst = 0.0;
        double conf = 0.0;
        double sum = 0.0;
        std::size_t oracle_points = 0;
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            auto const& p = s.points[i];
            conf = std::max(conf, p.conf_defect);
            sum += p.K;
            json row{{"xi", complex_json(p.xi)}, {"K", p.K}, {"K_fd", nullptr}, {"g", p.g},
                     {"conf_defect", p.conf_defect}};
            if (fd[i]) {
                worst = std::max(worst, std::abs(p.K - *fd[i]));
                row["K_fd"] = *fd[i];
                ++oracle_points;
            }
            pts.push_back(std::move(row));
        }
        json entry = surface_summary(s);
        entry["K_mean"] = s.points.empty() ? 0.0 : sum / static_cast<double>(s.points.size());
        entry["max_jet_vs_fd"] = worst;
        entry["oracle_points"] = oracle_points;
        entry["max_conf_defect"] = conf;
        entry["points"] = std::move(pts);
        bool const ok = worst <= kCurvatureOracleTolerance && conf <= cfg.tolerances.conformality;
        entry["pass"] = ok;
        out.passed = out.passed && ok;
        levels.push_back(std::move(entry));
    }

    SameObjectReport const same = same_object_check(f, cfg.grid.nodes(), jobs);
    json pairs = json::array();
    for (auto const& p : same.pairs) {
        pairs.push_back({{"k1", p.k1}, {"k2", p.k2}, {"translation_residual", p.residuals.translation_residual},
                         {"isometry_residual", p.residuals.isometry_residual}});
    }
    out.table = json{{"N", cfg.n},
                     {"pass", out.passed},
                     {"levels", std::move(levels)},
                     {"level_pairs", {{"nodes_used", same.nodes_used}, {"excluded", excluded_json(same.excluded)},
                                      {"pairs", std::move(pairs)}}}};
    return out;
}

} // namespace cpnsurf
