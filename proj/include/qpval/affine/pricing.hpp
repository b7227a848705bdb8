#pragma once

#include <cmath>
#include <functional>

#include "qpval/affine/recursion.hpp"

namespace qpval::affine {

enum class SurvivalMode { strict, lagged };          // S_T 1{tau > T} or S_T 1{tau > T-1}
enum class TwoTimeMode { unprimed, primed };         // exp(-L1_T - L2_s) or exp(-L1_s - L2_T)

// Optional edit applied to a schedule before the recursion runs (used for negative controls).
using SchedulePatch = std::function<void(KappaSchedule&)>;

namespace detail {

inline KappaStep step(const Vec& x, const Vec& y) { return {x, y}; }

inline void check_times(std::size_t t, std::size_t horizon)
{
    if (t >= horizon) throw DomainError("valuation time must be before the horizon");
}

} // namespace detail

// exp(a0 T + sum_{s>t} constant(s) + loading(t+1) . z_t)
inline double evaluate_exponential(const RecursionTable& table, const StockSpec& stock, const Vec& z_t)
{
    return std::exp(stock.drift * static_cast<double>(table.horizon) + table.cumulative(table.start) +
                    table.loading_dot(table.start + 1, z_t));
}

// Schedule of the survival claim from t to T.
inline KappaSchedule survival_schedule(const StockSpec& stock, const IntensitySpec& intensity, std::size_t t,
                                       std::size_t horizon, SurvivalMode mode)
{
    detail::check_times(t, horizon);
    const Vec nb = -intensity.private_loading, nc = -intensity.public_loading;
    KappaSchedule k;
    k.start = t;
    k.steps.assign(horizon - t, detail::step(nb, nc));
    if (mode == SurvivalMode::strict) k.at(horizon) = detail::step(nb, stock.loading - intensity.public_loading);
    else k.at(horizon) = detail::step(Vec::Zero(nb.size()), stock.loading);
    return k;
}

// Given survival to t, E_QP[S_T 1{tau > T}] (strict) or E_QP[S_T 1{tau > T-1}] (lagged).
inline double price_survival_claim(const AffineModel& model, const StockSpec& stock, const IntensitySpec& intensity,
                                   std::size_t t, std::size_t horizon, const Vec& z_t, SurvivalMode mode,
                                   const SchedulePatch& patch = {})
{
    auto k = survival_schedule(stock, intensity, t, horizon, mode);
    if (patch) patch(k);
    return evaluate_exponential(run_recursion(model, k), stock, z_t);
}

// Schedule for exp(L1_t + L2_t) E_QP[S_T exp(-L1_T - L2_s)] with t <= s < T; the primed mode swaps
// the roles of the two intensities.
inline KappaSchedule two_time_schedule(const StockSpec& stock, const IntensitySpec& first, const IntensitySpec& second,
                                       std::size_t t, std::size_t s, std::size_t horizon, TwoTimeMode mode)
{
    detail::check_times(t, horizon);
    if (s < t || s >= horizon) throw DomainError("two-time block needs t <= s < T");
    const IntensitySpec& lasting = mode == TwoTimeMode::unprimed ? first : second;
    const Vec both_x = -(first.private_loading + second.private_loading);
    const Vec both_y = -(first.public_loading + second.public_loading);
    KappaSchedule k;
    k.start = t;
    k.steps.resize(horizon - t);
    for (std::size_t i = t + 1; i <= horizon; ++i) {
        if (i == horizon) k.at(i) = detail::step(-lasting.private_loading, stock.loading - lasting.public_loading);
        else if (i > s) k.at(i) = detail::step(-lasting.private_loading, -lasting.public_loading);
        else k.at(i) = detail::step(both_x, both_y);
    }
    return k;
}

inline double price_two_time_block(const AffineModel& model, const StockSpec& stock, const IntensitySpec& first,
                                   const IntensitySpec& second, std::size_t t, std::size_t s, std::size_t horizon,
                                   const Vec& z_t, TwoTimeMode mode, const SchedulePatch& patch = {})
{
    auto k = two_time_schedule(stock, first, second, t, s, horizon, mode);
    if (patch) patch(k);
    return evaluate_exponential(run_recursion(model, k), stock, z_t);
}

} // namespace qpval::affine
