// cpnsurf: harmonic maps S^2 -> CP^{N-1}, their Weierstrass / Sym-Tafel surfaces, and checks.

#include <cpnsurf/commands.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

void emit(cpnsurf::json const& doc, std::optional<std::filesystem::path> const& dir, std::string const& name)
{
    std::string const text = doc.dump(2) + "\n";
    std::cout << text;
    if (dir) {
        std::filesystem::create_directories(*dir);
        cpnsurf::write_file(*dir / (name + ".json"), text);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"cpnsurf - surfaces of CP^{N-1} sigma-model solutions"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    int jobs = 0;
    bool control = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--jobs", jobs, "worker threads (default: $CPNSURF_JOBS or hardware concurrency)");
        sub->add_option("--output", output_dir, "output directory");
    };

    auto* verify = app.add_subcommand("verify", "check every identity on the configured grid");
    add_common(verify);
    verify->add_flag("--control", control, "use the non-harmonic control vector (1, xi + conj(xi)); checks must fail");

    auto* surface = app.add_subcommand("surface", "write surface coordinates, metric and curvature per level");
    add_common(surface);

    auto* compare = app.add_subcommand("compare", "tabulate Sym-Tafel vs Weierstrass and contour-integral residuals");
    add_common(compare);

    auto* curvature = app.add_subcommand("curvature", "Gaussian curvature per level, jets vs finite differences");
    add_common(curvature);

    CLI11_PARSE(app, argc, argv);

    try {
        cpnsurf::RunConfig const cfg = cpnsurf::load_config(config_path);
        unsigned const workers = cpnsurf::resolve_jobs(jobs);
        std::optional<std::filesystem::path> dir;
        if (!output_dir.empty()) dir = output_dir;

        if (verify->parsed()) {
            auto const report = cpnsurf::cmd_verify(cfg, {control, workers});
            emit(report.to_json(), dir, "verify");
            return report.passed() ? 0 : 1;
        }
        if (surface->parsed()) {
            std::filesystem::path const out = dir ? *dir : std::filesystem::path(cfg.output.path);
            std::cout << cpnsurf::cmd_surface(cfg, out, workers).dump(2) << "\n";
            return 0;
        }
        if (compare->parsed()) {
            auto const res = cpnsurf::cmd_compare(cfg, workers);
            emit(res.table, dir, "compare");
            return res.passed ? 0 : 1;
        }
        if (curvature->parsed()) {
            auto const res = cpnsurf::cmd_curvature(cfg, workers);
            emit(res.table, dir, "curvature");
            return res.passed ? 0 : 1;
        }
    } catch (cpnsurf::ConfigError const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
