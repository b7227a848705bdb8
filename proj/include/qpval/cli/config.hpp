#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "qpval/affine.hpp"
#include "qpval/arbitrage.hpp"
#include "qpval/core/json.hpp"
#include "qpval/montecarlo.hpp"
#include "qpval/products.hpp"

namespace qpval::cli {

inline constexpr int schema_version = 1;

// Top-level keys of the shared config; each command reads the sections it needs.
inline void check_top_level(const Json& cfg)
{
    require_known_keys(cfg,
                       {"schema_version", "seed", "stream", "model", "stock", "intensities", "product", "mc", "market",
                        "insurance", "construction", "validation"},
                       "config");
    if (cfg.contains("schema_version") && cfg["schema_version"] != schema_version)
        throw InputError("unsupported schema_version " + cfg["schema_version"].dump());
}

inline Json load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path + "'");
    Json cfg;
    try {
        cfg = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("config '" + path + "' is not valid JSON: " + e.what());
    }
    check_top_level(cfg);
    return cfg;
}

inline std::size_t index_from_json(const Json& j, const std::string& what)
{
    // Values built in code are signed even when non-negative.
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0))
        throw InputError("'" + what + "' must be a non-negative integer");
    return j.get<std::size_t>();
}

inline bool bool_from_json(const Json& j, const std::string& what)
{
    if (!j.is_boolean()) throw InputError("'" + what + "' must be true or false");
    return j.get<bool>();
}

inline std::string string_from_json(const Json& j, const std::string& what)
{
    if (!j.is_string()) throw InputError("'" + what + "' must be a string");
    return j.get<std::string>();
}

// Gaussian model, stock and named intensities.
struct ModelContext {
    affine::GaussianFactorModel model;
    affine::StockSpec stock;
    std::map<std::string, affine::IntensitySpec> intensities;

    const affine::IntensitySpec& intensity(const std::string& name) const
    {
        const auto it = intensities.find(name);
        if (it == intensities.end()) throw InputError("unknown intensity '" + name + "'");
        return it->second;
    }
};

inline ModelContext model_context_from_json(const Json& cfg)
{
    auto stock = affine::stock_from_json(require(cfg, "stock", "config"));
    auto model = affine::gaussian_from_json(require(cfg, "model", "config"), stock);
    if (stock.loading.size() != static_cast<Eigen::Index>(model.public_dim()))
        throw InputError("stock loading 'a' must have one entry per public factor");
    ModelContext ctx{std::move(model), std::move(stock), {}};
    if (cfg.contains("intensities")) {
        const Json& ints = cfg["intensities"];
        if (!ints.is_object()) throw InputError("'intensities' must map names to intensity objects");
        for (const auto& [name, spec] : ints.items())
            ctx.intensities.emplace(name, affine::intensity_from_json(spec, ctx.model.initial_state(), "intensities." + name));
    }
    return ctx;
}

inline stopping::Copula2 copula_from_json(const Json& j)
{
    require_known_keys(j, {"kind", "theta"}, "copula");
    const auto kind = stopping::copula_kind_from_string(string_from_json(require(j, "kind", "copula"), "copula.kind"));
    if (kind == stopping::CopulaKind::independence) {
        if (j.contains("theta")) throw InputError("the independence copula takes no 'theta'");
        return stopping::Copula2::independence();
    }
    const double theta = number_from_json(require(j, "theta", "copula"), "copula.theta");
    return kind == stopping::CopulaKind::clayton ? stopping::Copula2::clayton(theta) : stopping::Copula2::frank(theta);
}

inline mc::McOptions mc_options_from_json(const Json& cfg)
{
    mc::McOptions opt;
    if (!cfg.contains("mc")) return opt;
    const Json& j = cfg["mc"];
    require_known_keys(j, {"n", "inner", "antithetic", "mode", "workers"}, "mc");
    if (j.contains("n")) opt.n = index_from_json(j["n"], "mc.n");
    if (j.contains("inner")) opt.inner = index_from_json(j["inner"], "mc.inner");
    if (j.contains("antithetic")) opt.antithetic = bool_from_json(j["antithetic"], "mc.antithetic");
    if (j.contains("workers")) opt.workers = static_cast<unsigned>(index_from_json(j["workers"], "mc.workers"));
    if (j.contains("mode")) {
        const auto mode = string_from_json(j["mode"], "mc.mode");
        if (mode == "structural") opt.mode = mc::NestedMode::structural;
        else if (mode == "density") opt.mode = mc::NestedMode::density;
        else throw InputError("mc.mode must be 'structural' or 'density'");
    }
    return opt;
}

enum class Method { automatic, affine, monte_carlo };

struct LongevityRequest {
    products::LongevityMixture mixture;
    std::vector<products::CohortObservation> observations;
};

// A priced product: either one of the affine/MC product specs or a longevity mixture update.
struct ProductRequest {
    std::optional<products::ProductSpec> spec;
    std::optional<LongevityRequest> longevity;
    std::string name;
    Method method = Method::automatic;
    std::optional<affine::Vec> z_t; // defaults to the model's initial state
};

inline ProductRequest product_from_json(const Json& j, const ModelContext* ctx)
{
    const auto kind = string_from_json(require(j, "kind", "product"), "product.kind");
    ProductRequest req;
    req.name = kind;
    if (kind == "longevity") {
        require_known_keys(j, {"kind", "hazards", "weights", "observations"}, "product");
        LongevityRequest lr;
        lr.mixture.hazards = require(j, "hazards", "product").get<std::vector<std::vector<double>>>();
        lr.mixture.weights = require(j, "weights", "product").get<std::vector<double>>();
        if (j.contains("observations"))
            for (const auto& o : j["observations"]) {
                require_known_keys(o, {"alive", "deaths"}, "product.observations");
                lr.observations.push_back({index_from_json(require(o, "alive", "observation"), "alive"),
                                           index_from_json(require(o, "deaths", "observation"), "deaths")});
            }
        lr.mixture.validate();
        req.longevity = std::move(lr);
        return req;
    }
    if (ctx == nullptr) throw InputError("product '" + kind + "' needs 'model' and 'stock' sections");

    const auto times = [&](std::size_t& t, std::size_t& horizon) {
        t = index_from_json(require(j, "t", "product"), "product.t");
        horizon = index_from_json(require(j, "horizon", "product"), "product.horizon");
    };
    const auto survival_mode = [&]() {
        if (!j.contains("mode")) return affine::SurvivalMode::strict;
        const auto m = string_from_json(j["mode"], "product.mode");
        if (m == "strict") return affine::SurvivalMode::strict;
        if (m == "lagged") return affine::SurvivalMode::lagged;
        throw InputError("product.mode must be 'strict' or 'lagged'");
    };
    const std::initializer_list<const char*> common = {"kind", "t", "horizon", "method", "z_t"};
    const auto allow = [&](std::initializer_list<const char*> extra) {
        std::vector<std::string> keys(common.begin(), common.end());
        keys.insert(keys.end(), extra.begin(), extra.end());
        for (const auto& [key, value] : j.items())
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw InputError("unknown key '" + key + "' in product");
    };

    std::size_t t = 0, horizon = 0;
    if (kind == "survival") {
        allow({"intensity", "mode"});
        times(t, horizon);
        req.spec = products::SurvivalClaimSpec{ctx->stock, ctx->intensity(string_from_json(require(j, "intensity", "product"), "intensity")),
                                               t, horizon, survival_mode()};
    } else if (kind == "two_time_block") {
        allow({"first", "second", "split", "mode"});
        times(t, horizon);
        auto mode = affine::TwoTimeMode::unprimed;
        if (j.contains("mode")) {
            const auto m = string_from_json(j["mode"], "product.mode");
            if (m == "primed") mode = affine::TwoTimeMode::primed;
            else if (m != "unprimed") throw InputError("product.mode must be 'unprimed' or 'primed'");
        }
        req.spec = products::TwoTimeBlockSpec{ctx->stock,
                                              ctx->intensity(string_from_json(require(j, "first", "product"), "first")),
                                              ctx->intensity(string_from_json(require(j, "second", "product"), "second")),
                                              t,
                                              index_from_json(require(j, "split", "product"), "product.split"),
                                              horizon,
                                              mode};
    } else if (kind == "surrender_option") {
        allow({"intensity"});
        times(t, horizon);
        req.spec = products::SurrenderOptionSpec{ctx->stock, ctx->intensity(string_from_json(require(j, "intensity", "product"), "intensity")),
                                                 t, horizon};
    } else if (kind == "va_surrender") {
        allow({"surrender", "mortality", "copula"});
        times(t, horizon);
        req.spec = products::VASurrenderSpec{ctx->stock,
                                             ctx->intensity(string_from_json(require(j, "surrender", "product"), "surrender")),
                                             ctx->intensity(string_from_json(require(j, "mortality", "product"), "mortality")),
                                             j.contains("copula") ? copula_from_json(j["copula"]) : stopping::Copula2::independence(),
                                             t,
                                             horizon};
    } else if (kind == "scheduled") {
        allow({"intensity", "mode", "times", "amounts"});
        times(t, horizon);
        products::SurvivalClaimSpec benefit{ctx->stock, ctx->intensity(string_from_json(require(j, "intensity", "product"), "intensity")),
                                            t, horizon, survival_mode()};
        req.spec = products::ScheduledContract{
            benefit, products::PaymentSchedule(require(j, "times", "product").get<std::vector<double>>(),
                                               require(j, "amounts", "product").get<std::vector<double>>())};
    } else {
        throw InputError("unknown product kind '" + kind + "'");
    }
    if (t >= horizon) throw InputError("product needs t < horizon");

    if (j.contains("method")) {
        const auto m = string_from_json(j["method"], "product.method");
        if (m == "auto") req.method = Method::automatic;
        else if (m == "affine") req.method = Method::affine;
        else if (m == "monte_carlo") req.method = Method::monte_carlo;
        else throw InputError("product.method must be 'auto', 'affine' or 'monte_carlo'");
    }
    if (j.contains("z_t")) {
        req.z_t = affine::vec_from_json(j["z_t"], "product.z_t");
        if (req.z_t->size() != static_cast<Eigen::Index>(ctx->model.dim())) throw InputError("product.z_t has the wrong dimension");
    }
    return req;
}

} // namespace qpval::cli
