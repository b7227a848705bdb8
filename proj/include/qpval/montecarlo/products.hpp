#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "qpval/montecarlo/nested.hpp"
#include "qpval/products/scheduled.hpp"
#include "qpval/products/specs.hpp"

namespace qpval::mc {

namespace detail {

// Running maximum of Lambda_s - Lambda_start, so that "alive after s" is threshold > value[s - start].
inline std::vector<double> hazard_levels(const Scenario& sc, const affine::IntensitySpec& intensity)
{
    auto c = cumulated_increments(sc, intensity);
    for (std::size_t k = 1; k < c.size(); ++k) c[k] = std::max(c[k], c[k - 1]);
    return c;
}

// First s in (start, last] at which the threshold is reached.
inline std::optional<std::size_t> first_crossing(const std::vector<double>& levels, std::size_t start, double threshold,
                                                 std::size_t last)
{
    for (std::size_t s = start + 1; s <= last; ++s)
        if (threshold <= levels[s - start]) return s;
    return std::nullopt;
}

inline double stock_at(const products::StockSpec& stock, const Scenario& sc, std::size_t s)
{
    const auto& z = sc.state(s);
    return stock.price(s, z.tail(stock.loading.size()));
}

} // namespace detail

inline Payoff make_payoff(const products::SurvivalClaimSpec& p)
{
    return [p](const Scenario& sc) {
        const auto lv = detail::hazard_levels(sc, p.intensity);
        const std::size_t alive_until = p.mode == affine::SurvivalMode::strict ? p.horizon : p.horizon - 1;
        return sc.first_threshold > lv[alive_until - sc.start] ? detail::stock_at(p.stock, sc, p.horizon) : 0.0;
    };
}

inline Payoff make_payoff(const products::TwoTimeBlockSpec& p)
{
    return [p](const Scenario& sc) {
        const auto l1 = detail::hazard_levels(sc, p.first);
        const auto l2 = detail::hazard_levels(sc, p.second);
        const bool unprimed = p.mode == affine::TwoTimeMode::unprimed;
        const std::size_t s1 = unprimed ? p.horizon : p.split;
        const std::size_t s2 = unprimed ? p.split : p.horizon;
        const bool alive = sc.first_threshold > l1[s1 - sc.start] && sc.second_threshold > l2[s2 - sc.start];
        return alive ? detail::stock_at(p.stock, sc, p.horizon) : 0.0;
    };
}

inline Payoff make_payoff(const products::SurrenderOptionSpec& p)
{
    return [p](const Scenario& sc) {
        const auto lv = detail::hazard_levels(sc, p.surrender);
        const auto at = detail::first_crossing(lv, sc.start, sc.first_threshold, p.horizon - 1);
        return at ? detail::stock_at(p.stock, sc, *at) : 0.0;
    };
}

inline Payoff make_payoff(const products::VASurrenderSpec& p)
{
    return [p](const Scenario& sc) {
        const auto l1 = detail::hazard_levels(sc, p.surrender);
        const auto l2 = detail::hazard_levels(sc, p.mortality);
        const auto at = detail::first_crossing(l1, sc.start, sc.first_threshold, p.horizon - 1);
        if (!at) return 0.0;
        // alive at the surrender date: no death crossing before it
        return sc.second_threshold > l2[*at - 1 - sc.start] ? detail::stock_at(p.stock, sc, *at) : 0.0;
    };
}

inline Payoff make_payoff(const products::ScheduledContract& c)
{
    const auto single = products::scheduled_to_single(c);
    const auto benefit = make_payoff(c.benefit);
    return [c, single, benefit](const Scenario& sc) {
        const auto lv = detail::hazard_levels(sc, c.benefit.intensity);
        const auto death = detail::first_crossing(lv, sc.start, sc.first_threshold, c.benefit.horizon);
        const double termination = static_cast<double>(death ? *death : c.benefit.horizon);
        return single.benefits(benefit(sc), termination);
    };
}

inline Payoff make_payoff(const products::ProductSpec& spec)
{
    return std::visit([](const auto& p) { return make_payoff(p); }, spec);
}

inline std::size_t valuation_time(const products::ProductSpec& spec)
{
    return std::visit(
        [](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, products::ScheduledContract>) return p.benefit.t;
            else return p.t;
        },
        spec);
}

inline std::size_t horizon_of(const products::ProductSpec& spec)
{
    return std::visit(
        [](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, products::ScheduledContract>) return p.benefit.horizon;
            else return p.horizon;
        },
        spec);
}

struct McOptions {
    std::size_t n = 200000;
    std::size_t inner = 1;
    bool antithetic = false;
    NestedMode mode = NestedMode::structural;
    unsigned workers = 1;
};

// Thresholds of the va product follow its copula; every other product has one time and uses
// independent thresholds.
inline QPEstimate estimate_product(const products::ProductSpec& spec, const affine::AffineModel& model, const Vec& z_t,
                                   const McOptions& opt, RngSpec rng)
{
    NestedConfig cfg;
    cfg.start = valuation_time(spec);
    cfg.horizon = horizon_of(spec);
    cfg.z_start = z_t;
    cfg.outer = opt.n;
    cfg.inner = opt.inner;
    cfg.antithetic = opt.antithetic;
    cfg.mode = opt.mode;
    cfg.workers = opt.workers;
    if (const auto* va = std::get_if<products::VASurrenderSpec>(&spec)) cfg.copula = va->copula;
    return estimate_qp_nested(model, make_payoff(spec), cfg, rng);
}

// Several payoffs evaluated on the same simulated scenarios (one estimate per payoff).
inline std::vector<QPEstimate> estimate_on_shared_paths(const affine::AffineModel& model, const std::vector<Payoff>& payoffs,
                                                        const NestedConfig& cfg, RngSpec spec)
{
    const auto& m = require_sampler(model);
    if (cfg.horizon <= cfg.start) throw DomainError("nested estimate needs horizon > start");
    const std::size_t k = payoffs.size();
    std::vector<std::vector<double>> samples(k, std::vector<double>(cfg.outer));
    for (std::size_t i = 0; i < cfg.outer; ++i) {
        std::vector<double> acc(k, 0.0);
        const auto visit = [&](const Scenario& sc, double w) {
            for (std::size_t j = 0; j < k; ++j) acc[j] += detail::checked(w * payoffs[j](sc), i, sc);
        };
        Stream rng(spec, static_cast<std::uint32_t>(i));
        detail::for_each_scenario(m, cfg, rng, visit);
        if (cfg.antithetic) {
            Stream mirror(spec, static_cast<std::uint32_t>(i));
            mirror.set_antithetic(true);
            detail::for_each_scenario(m, cfg, mirror, visit);
            for (auto& a : acc) a *= 0.5;
        }
        for (std::size_t j = 0; j < k; ++j) samples[j][i] = acc[j];
    }
    std::vector<QPEstimate> out;
    for (const auto& s : samples) out.push_back(summarize(s, spec));
    return out;
}

} // namespace qpval::mc
