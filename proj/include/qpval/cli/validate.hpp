#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qpval/cli/config.hpp"

namespace qpval::cli {

// Additive change to the schedule entry at time start + step, applied to every closed form.
struct KappaCorruption {
    std::size_t step = 1;
    affine::Vec private_shift;
    affine::Vec public_shift;
};

struct ValidationSpec {
    std::size_t t = 0;
    std::size_t horizon = 12;
    std::size_t split = 6;
    std::size_t n = 200000;
    std::size_t min_n = 1000;
    bool antithetic = false;
    std::string surrender = "surrender";
    std::string mortality = "mortality";
    std::optional<affine::Vec> z_t;
    std::optional<KappaCorruption> corruption;
};

struct Comparison {
    std::string name;
    double closed_form = 0.0;
    double mc_mean = 0.0;
    double stderr = 0.0;
    double z = 0.0;
};

struct ValidationReport {
    std::vector<Comparison> comparisons;
    std::size_t n = 0;
    mc::RngSpec rng;
    bool underpowered = false;

    double max_abs_z() const
    {
        double m = 0.0;
        for (const auto& c : comparisons) m = std::max(m, std::abs(c.z));
        return m;
    }
    bool pass() const { return max_abs_z() <= 3.0; }
};

inline ValidationSpec validation_from_json(const Json& cfg, const ModelContext& ctx)
{
    ValidationSpec v;
    if (!cfg.contains("validation")) return v;
    const Json& j = cfg["validation"];
    require_known_keys(j, {"t", "horizon", "split", "n", "min_n", "antithetic", "surrender", "mortality", "z_t", "kappa_corruption"},
                       "validation");
    if (j.contains("t")) v.t = index_from_json(j["t"], "validation.t");
    if (j.contains("horizon")) v.horizon = index_from_json(j["horizon"], "validation.horizon");
    if (j.contains("split")) v.split = index_from_json(j["split"], "validation.split");
    if (j.contains("n")) v.n = index_from_json(j["n"], "validation.n");
    if (j.contains("min_n")) v.min_n = index_from_json(j["min_n"], "validation.min_n");
    if (j.contains("antithetic")) v.antithetic = bool_from_json(j["antithetic"], "validation.antithetic");
    if (j.contains("surrender")) v.surrender = string_from_json(j["surrender"], "validation.surrender");
    if (j.contains("mortality")) v.mortality = string_from_json(j["mortality"], "validation.mortality");
    if (j.contains("z_t")) v.z_t = affine::vec_from_json(j["z_t"], "validation.z_t");
    if (j.contains("kappa_corruption")) {
        const Json& c = j["kappa_corruption"];
        require_known_keys(c, {"step", "private", "public"}, "validation.kappa_corruption");
        KappaCorruption k;
        k.step = index_from_json(require(c, "step", "kappa_corruption"), "kappa_corruption.step");
        k.private_shift = c.contains("private") ? affine::vec_from_json(c["private"], "kappa_corruption.private")
                                                : affine::Vec::Zero(static_cast<Eigen::Index>(ctx.model.private_dim()));
        k.public_shift = c.contains("public") ? affine::vec_from_json(c["public"], "kappa_corruption.public")
                                              : affine::Vec::Zero(static_cast<Eigen::Index>(ctx.model.public_dim()));
        if (k.private_shift.size() != static_cast<Eigen::Index>(ctx.model.private_dim()) ||
            k.public_shift.size() != static_cast<Eigen::Index>(ctx.model.public_dim()))
            throw InputError("kappa_corruption shifts must match the factor dimensions");
        v.corruption = std::move(k);
    }
    if (v.t >= v.horizon || v.split < v.t || v.split >= v.horizon) throw InputError("validation needs t <= split < horizon and t < horizon");
    return v;
}

// Closed forms of the six products against one nested simulation on shared scenarios.
inline ValidationReport run_validation(const ModelContext& ctx, const ValidationSpec& v, mc::RngSpec rng)
{
    const auto& m = ctx.model;
    const auto& surrender = ctx.intensity(v.surrender);
    const auto& mortality = ctx.intensity(v.mortality);
    const affine::Vec z = v.z_t ? *v.z_t : m.initial_state();
    if (z.size() != static_cast<Eigen::Index>(m.dim())) throw InputError("validation.z_t has the wrong dimension");

    affine::SchedulePatch patch;
    if (v.corruption) {
        const auto c = *v.corruption;
        patch = [c](affine::KappaSchedule& k) {
            const auto s = k.start + c.step;
            if (s <= k.start || s > k.horizon()) return;
            k.at(s).private_weight += c.private_shift;
            k.at(s).public_weight += c.public_shift;
        };
    }

    using namespace products;
    const SurvivalClaimSpec strict{ctx.stock, surrender, v.t, v.horizon, affine::SurvivalMode::strict};
    const SurvivalClaimSpec lagged{ctx.stock, surrender, v.t, v.horizon, affine::SurvivalMode::lagged};
    const TwoTimeBlockSpec unprimed{ctx.stock, surrender, mortality, v.t, v.split, v.horizon, affine::TwoTimeMode::unprimed};
    const TwoTimeBlockSpec primed{ctx.stock, surrender, mortality, v.t, v.split, v.horizon, affine::TwoTimeMode::primed};
    const SurrenderOptionSpec option{ctx.stock, surrender, v.t, v.horizon};
    const VASurrenderSpec va{ctx.stock, surrender, mortality, stopping::Copula2::independence(), v.t, v.horizon};

    ValidationReport rep;
    rep.n = v.n;
    rep.rng = rng;
    rep.underpowered = v.n < v.min_n;
    rep.comparisons = {{"survival_strict", price(m, strict, z, patch)},
                       {"survival_lagged", price(m, lagged, z, patch)},
                       {"two_time_unprimed", price(m, unprimed, z, patch)},
                       {"two_time_primed", price(m, primed, z, patch)},
                       {"surrender_option", price_surrender_option(m, option, z, patch)},
                       {"va_surrender", price_va_surrender_affine(m, va, z, patch)}};

    mc::NestedConfig cfg;
    cfg.start = v.t;
    cfg.horizon = v.horizon;
    cfg.z_start = z;
    cfg.outer = v.n;
    cfg.antithetic = v.antithetic;
    const auto est = mc::estimate_on_shared_paths(m,
                                                  {mc::make_payoff(strict), mc::make_payoff(lagged), mc::make_payoff(unprimed),
                                                   mc::make_payoff(primed), mc::make_payoff(option), mc::make_payoff(va)},
                                                  cfg, rng);
    for (std::size_t i = 0; i < est.size(); ++i) {
        auto& c = rep.comparisons[i];
        c.mc_mean = est[i].mean;
        c.stderr = est[i].stderr;
        c.z = c.stderr > 0.0 ? (c.mc_mean - c.closed_form) / c.stderr : (c.mc_mean == c.closed_form ? 0.0 : INFINITY);
    }
    return rep;
}

inline Json to_json(const ValidationReport& r)
{
    Json rows = Json::array();
    for (const auto& c : r.comparisons)
        rows.push_back(Json{{"name", c.name}, {"closed_form", c.closed_form}, {"mc_mean", c.mc_mean}, {"stderr", c.stderr}, {"z", c.z}});
    return Json{{"comparisons", std::move(rows)}, {"n", r.n},          {"seed", r.rng.seed},
                {"stream", r.rng.stream},         {"max_abs_z", r.max_abs_z()}, {"underpowered", r.underpowered}};
}

} // namespace qpval::cli
