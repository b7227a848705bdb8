#pragma once

#include <cmath>
#include <string>

#include "qpval/affine/pricing.hpp"
#include "qpval/montecarlo/products.hpp"
#include "qpval/products/specs.hpp"

namespace qpval::products {

struct ProductValue {
    double value = 0.0;
    double stderr = 0.0; // zero for closed forms
    std::string method;  // "affine" or "monte_carlo"
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

inline double price(const affine::AffineModel& model, const SurvivalClaimSpec& p, const affine::Vec& z_t,
                    const affine::SchedulePatch& patch = {})
{
    return affine::price_survival_claim(model, p.stock, p.intensity, p.t, p.horizon, z_t, p.mode, patch);
}

inline double price(const affine::AffineModel& model, const TwoTimeBlockSpec& p, const affine::Vec& z_t,
                    const affine::SchedulePatch& patch = {})
{
    return affine::price_two_time_block(model, p.stock, p.first, p.second, p.t, p.split, p.horizon, z_t, p.mode, patch);
}

// Sum over exercise dates i in (t, T) of the lagged-minus-strict survival values of S_i.
inline double price_surrender_option(const affine::AffineModel& model, const SurrenderOptionSpec& p, const affine::Vec& z_t,
                                     const affine::SchedulePatch& patch = {})
{
    if (p.t >= p.horizon) throw DomainError("surrender option needs t < T");
    double v = 0.0;
    for (std::size_t i = p.t + 1; i < p.horizon; ++i)
        v += affine::price_survival_claim(model, p.stock, p.surrender, p.t, i, z_t, SurvivalMode::lagged, patch) -
             affine::price_survival_claim(model, p.stock, p.surrender, p.t, i, z_t, SurvivalMode::strict, patch);
    return v;
}

// Closed form under conditionally independent thresholds. Per surrender date s:
//   E[S_s exp(-dL1_{s-1} - dL2_{s-1})] - E[S_s exp(-dL1_s - dL2_{s-1})]
// where dL = Lambda - Lambda_t. The first term is a lagged survival claim on the summed intensity,
// the second an unprimed two-time block with split s-1.
inline double price_va_surrender_affine(const affine::AffineModel& model, const VASurrenderSpec& p, const affine::Vec& z_t,
                                        const affine::SchedulePatch& patch = {})
{
    if (p.t >= p.horizon) throw DomainError("va surrender needs t < T");
    if (p.copula.kind() != stopping::CopulaKind::independence)
        throw CapabilityError("the affine route for the va surrender benefit needs the independence copula");
    IntensitySpec both{p.surrender.offset + p.mortality.offset, p.surrender.private_loading + p.mortality.private_loading,
                       p.surrender.public_loading + p.mortality.public_loading};
    double v = 0.0;
    for (std::size_t s = p.t + 1; s < p.horizon; ++s) {
        const double alive_before = affine::price_survival_claim(model, p.stock, both, p.t, s, z_t, SurvivalMode::lagged, patch);
        const double surrender_later =
            affine::price_two_time_block(model, p.stock, p.surrender, p.mortality, p.t, s - 1, s, z_t, TwoTimeMode::unprimed, patch);
        v += alive_before - surrender_later;
    }
    return v;
}

// Benefit value plus the expected refund of premiums not yet due at termination: a premium due at
// t_i in (t, T] is refunded when tau < t_i, i.e. unless tau > ceil(t_i) - 1.
inline double price_scheduled(const affine::AffineModel& model, const ScheduledContract& c, const affine::Vec& z_t)
{
    const auto& b = c.benefit;
    const StockSpec unit{0.0, affine::Vec::Zero(b.stock.loading.size())};
    double v = price(model, b, z_t);
    const auto& times = c.schedule.times();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double ti = times[i];
        if (ti <= static_cast<double>(b.t) || ti > static_cast<double>(b.horizon)) continue;
        const auto last_alive = static_cast<std::size_t>(std::ceil(ti)) - 1;
        const double alive =
            last_alive == b.t ? 1.0 : affine::price_survival_claim(model, unit, b.intensity, b.t, last_alive, z_t, SurvivalMode::strict);
        v += c.schedule.amounts()[i] * (1.0 - alive);
    }
    return v;
}

// Affine route for the independence copula, Monte Carlo otherwise.
inline ProductValue price_va_surrender(const affine::AffineModel& model, const VASurrenderSpec& p, const affine::Vec& z_t,
                                       const mc::McOptions& opt = {}, mc::RngSpec rng = {})
{
    if (p.copula.kind() == stopping::CopulaKind::independence)
        return {price_va_surrender_affine(model, p, z_t), 0.0, "affine", 0, 0, 0};
    const auto e = mc::estimate_product(p, model, z_t, opt, rng);
    return {e.mean, e.stderr, "monte_carlo", e.n, e.seed, e.stream};
}

} // namespace qpval::products
