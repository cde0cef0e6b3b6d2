#pragma once

/// \file config.hpp
/// \brief Run configuration: a JSON document with exact decimal strings for numeric data.
///
/// Real numbers may be given as JSON numbers, decimal strings ("-0.25") or
/// [numerator, denominator] pairs. Complex numbers are a real, or {"re": ..., "im": ...}.

#include "errors.hpp"
#include "holo.hpp"
#include "immersion.hpp"
#include "surface.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cpnsurf {

using json = nlohmann::ordered_json;

struct Tolerances {
    double identity = 1e-10;             ///< commutator identity, Weierstrass derivative, Sym-Tafel equivalence
    double residual = 1e-8;              ///< EL and Lax residuals
    double integration = 1e-7;           ///< contour integral vs closed-form difference
    double projector = 1e-9;             ///< projector axioms
    double telescope = 1e-9;             ///< induction identities
    double annihilation = 1e-8;          ///< |P+^N f| relative
    double inverse = 1e-12;              ///< phi phi^{-1} = I
    double asymptotic = 1e-5;            ///< |phi(lambda = 1e6) - I|
    double lambda_independence = 1e-11;  ///< spread of (1-lambda^2)/2 X_ST over lambda
    double conformality = 1e-10;         ///< |g_xixi|
};

enum class OutputFormat { csv, json, obj };

struct OutputSpec {
    std::vector<OutputFormat> formats{OutputFormat::csv};
    std::string path = "out";
    std::array<int, 3> obj_coordinates{1, 2, 3};  ///< 1-based coordinate indices used as OBJ vertices

    bool wants(OutputFormat f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }
};

struct RunConfig {
    int n = 3;
    bool veronese_data = true;
    std::optional<HolomorphicVector> explicit_data;
    std::vector<int> levels{0};
    GridSpec grid;
    std::vector<complex> lambda_values;
    Tolerances tolerances;
    QuadratureOptions quadrature;
    complex base_point{};
    OutputSpec output;
    json source;  ///< the parsed document, echoed into JSON outputs

    HolomorphicVector holomorphic_data() const { return veronese_data ? veronese(n) : *explicit_data; }
};

namespace detail {

[[noreturn]] inline void field_error(std::string const& field, std::string const& msg)
{
    throw ConfigError("config field '" + field + "': " + msg);
}

inline double parse_real(json const& v, std::string const& field)
{
    try {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) return parse_decimal(v.get<std::string>());
        if (v.is_array() && v.size() == 2) {
            auto const part = [&](json const& p) {
                return p.is_string() ? p.get<std::string>() : p.dump();
            };
            return parse_rational(part(v[0]), part(v[1]));
        }
    } catch (ConfigError const& e) {
        field_error(field, e.what());
    }
    field_error(field, "expected a number, decimal string or [numerator, denominator] pair");
}

inline complex parse_complex(json const& v, std::string const& field)
{
    if (v.is_object()) {
        for (auto const& [key, _] : v.items()) {
            if (key != "re" && key != "im") field_error(field, "unknown key '" + key + "' in complex number");
        }
        double const re = v.contains("re") ? parse_real(v["re"], field + ".re") : 0.0;
        double const im = v.contains("im") ? parse_real(v["im"], field + ".im") : 0.0;
        return {re, im};
    }
    return {parse_real(v, field), 0.0};
}

inline int parse_int(json const& v, std::string const& field)
{
    if (!v.is_number_integer()) field_error(field, "expected an integer");
    return v.get<int>();
}

inline void reject_unknown(json const& obj, std::string const& field, std::initializer_list<char const*> known)
{
    for (auto const& [key, _] : obj.items()) {
        bool ok = false;
        for (char const* k : known) ok = ok || key == k;
        if (!ok) field_error(field.empty() ? key : field + "." + key, "unknown key");
    }
}

inline OutputFormat parse_format(json const& v, std::string const& field)
{
    if (!v.is_string()) field_error(field, "expected \"csv\", \"json\" or \"obj\"");
    auto const s = v.get<std::string>();
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    if (s == "obj") return OutputFormat::obj;
    field_error(field, "unknown output format \"" + s + "\"");
}

} // namespace detail

inline RunConfig parse_config(json const& doc)
{
    using namespace detail;
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown(doc, "", {"N", "holomorphic_data", "levels", "grid", "lambda_values", "tolerances",
                             "quadrature", "base_point", "output"});
    RunConfig cfg;
    cfg.source = doc;

    if (!doc.contains("N")) field_error("N", "missing");
    cfg.n = parse_int(doc["N"], "N");
    if (cfg.n < 2) field_error("N", "must be >= 2");
    if (cfg.n - 1 + 3 > kMaxJetOrder) field_error("N", "too large for the jet order cap");

    if (doc.contains("holomorphic_data")) {
        json const& h = doc["holomorphic_data"];
        std::string type = h.is_string() ? h.get<std::string>() : "";
        if (h.is_object()) {
            reject_unknown(h, "holomorphic_data", {"type", "components"});
            if (!h.contains("type") || !h["type"].is_string()) field_error("holomorphic_data.type", "missing");
            type = h["type"].get<std::string>();
        }
        if (type == "veronese") {
            cfg.veronese_data = true;
        } else if (type == "explicit") {
            if (!h.contains("components") || !h["components"].is_array()) {
                field_error("holomorphic_data.components", "expected a list of coefficient lists");
            }
            json const& comps = h["components"];
            if (static_cast<int>(comps.size()) != cfg.n) {
                field_error("holomorphic_data.components",
                            "has " + std::to_string(comps.size()) + " entries but N = " + std::to_string(cfg.n));
            }
            std::vector<ComplexPolynomial> polys;
            for (std::size_t i = 0; i < comps.size(); ++i) {
                std::string const field = "holomorphic_data.components[" + std::to_string(i) + "]";
                if (!comps[i].is_array()) field_error(field, "expected a coefficient list (index = power of xi)");
                std::vector<complex> coeffs;
                for (std::size_t j = 0; j < comps[i].size(); ++j) {
                    coeffs.push_back(parse_complex(comps[i][j], field + "[" + std::to_string(j) + "]"));
                }
                polys.emplace_back(std::move(coeffs));
            }
            try {
                cfg.explicit_data.emplace(std::move(polys));
            } catch (std::invalid_argument const& e) {
                field_error("holomorphic_data", e.what());
            }
            cfg.veronese_data = false;
        } else {
            field_error("holomorphic_data", "expected \"veronese\" or {\"type\": \"explicit\", ...}");
        }
    }

    if (doc.contains("levels")) {
        if (!doc["levels"].is_array() || doc["levels"].empty()) field_error("levels", "expected a non-empty list");
        cfg.levels.clear();
        for (std::size_t i = 0; i < doc["levels"].size(); ++i) {
            std::string const field = "levels[" + std::to_string(i) + "]";
            int const k = parse_int(doc["levels"][i], field);
            if (k < 0 || k > cfg.n - 2) field_error(field, "surface level must satisfy 0 <= k <= N-2");
            cfg.levels.push_back(k);
        }
    }

    if (doc.contains("grid")) {
        json const& g = doc["grid"];
        if (!g.is_object()) field_error("grid", "expected an object");
        reject_unknown(g, "grid", {"re_min", "re_max", "im_min", "im_max", "n_re", "n_im"});
        if (g.contains("re_min")) cfg.grid.re_min = parse_real(g["re_min"], "grid.re_min");
        if (g.contains("re_max")) cfg.grid.re_max = parse_real(g["re_max"], "grid.re_max");
        if (g.contains("im_min")) cfg.grid.im_min = parse_real(g["im_min"], "grid.im_min");
        if (g.contains("im_max")) cfg.grid.im_max = parse_real(g["im_max"], "grid.im_max");
        if (g.contains("n_re")) cfg.grid.n_re = parse_int(g["n_re"], "grid.n_re");
        if (g.contains("n_im")) cfg.grid.n_im = parse_int(g["n_im"], "grid.n_im");
        try {
            cfg.grid.validate();
        } catch (std::invalid_argument const& e) {
            field_error("grid", e.what());
        }
    }

    if (!doc.contains("lambda_values") || !doc["lambda_values"].is_array() || doc["lambda_values"].empty()) {
        field_error("lambda_values", "expected a non-empty list of spectral parameters");
    }
    for (std::size_t i = 0; i < doc["lambda_values"].size(); ++i) {
        std::string const field = "lambda_values[" + std::to_string(i) + "]";
        complex const lambda = parse_complex(doc["lambda_values"][i], field);
        try {
            require_regular_lambda(lambda);
        } catch (PoleError const& e) {
            field_error(field, e.what());
        }
        cfg.lambda_values.push_back(lambda);
    }

    if (doc.contains("tolerances")) {
        json const& t = doc["tolerances"];
        if (!t.is_object()) field_error("tolerances", "expected an object");
        reject_unknown(t, "tolerances", {"identity", "residual", "integration", "projector", "telescope",
                                         "annihilation", "inverse", "asymptotic", "lambda_independence",
                                         "conformality"});
        auto set = [&](char const* key, double& slot) {
            if (!t.contains(key)) return;
            slot = parse_real(t[key], std::string("tolerances.") + key);
            if (!(slot > 0.0)) field_error(std::string("tolerances.") + key, "must be positive");
        };
        set("identity", cfg.tolerances.identity);
        set("residual", cfg.tolerances.residual);
        set("integration", cfg.tolerances.integration);
        set("projector", cfg.tolerances.projector);
        set("telescope", cfg.tolerances.telescope);
        set("annihilation", cfg.tolerances.annihilation);
        set("inverse", cfg.tolerances.inverse);
        set("asymptotic", cfg.tolerances.asymptotic);
        set("lambda_independence", cfg.tolerances.lambda_independence);
        set("conformality", cfg.tolerances.conformality);
    }

    if (doc.contains("quadrature")) {
        json const& q = doc["quadrature"];
        if (!q.is_object()) field_error("quadrature", "expected an object");
        reject_unknown(q, "quadrature", {"order", "max_refine"});
        if (q.contains("order")) cfg.quadrature.order = parse_int(q["order"], "quadrature.order");
        if (q.contains("max_refine")) cfg.quadrature.max_refine = parse_int(q["max_refine"], "quadrature.max_refine");
        if (cfg.quadrature.order < 8) field_error("quadrature.order", "must be >= 8");
        if (cfg.quadrature.max_refine < 1 || cfg.quadrature.max_refine > 20) {
            field_error("quadrature.max_refine", "must be in [1, 20]");
        }
    }

    if (doc.contains("base_point")) cfg.base_point = parse_complex(doc["base_point"], "base_point");

    if (doc.contains("output")) {
        json const& o = doc["output"];
        if (!o.is_object()) field_error("output", "expected an object");
        reject_unknown(o, "output", {"format", "path", "obj_coordinates"});
        if (o.contains("format")) {
            cfg.output.formats.clear();
            if (o["format"].is_array()) {
                for (std::size_t i = 0; i < o["format"].size(); ++i) {
                    cfg.output.formats.push_back(parse_format(o["format"][i], "output.format[" + std::to_string(i) + "]"));
                }
            } else {
                cfg.output.formats.push_back(parse_format(o["format"], "output.format"));
            }
            if (!cfg.output.wants(OutputFormat::csv)) cfg.output.formats.insert(cfg.output.formats.begin(), OutputFormat::csv);
        }
        if (o.contains("path")) {
            if (!o["path"].is_string()) field_error("output.path", "expected a string");
            cfg.output.path = o["path"].get<std::string>();
        }
        if (o.contains("obj_coordinates")) {
            json const& c = o["obj_coordinates"];
            if (!c.is_array() || c.size() != 3) field_error("output.obj_coordinates", "expected three indices");
            int const dim = cfg.n * cfg.n - 1;
            for (std::size_t i = 0; i < 3; ++i) {
                int const idx = parse_int(c[i], "output.obj_coordinates[" + std::to_string(i) + "]");
                if (idx < 1 || idx > dim) {
                    field_error("output.obj_coordinates[" + std::to_string(i) + "]",
                                "coordinate index must be in 1.." + std::to_string(dim));
                }
                cfg.output.obj_coordinates[i] = idx;
            }
        }
    }
    return cfg;
}

inline RunConfig parse_config_text(std::string const& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (json::parse_error const& e) {
        // nlohmann reports "line L, column C" in its message
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

inline RunConfig load_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace cpnsurf
