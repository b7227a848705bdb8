#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qpval/core/error.hpp"
#include "qpval/montecarlo/estimate.hpp"

namespace qpval::products {

// Risk measure on a loss sample (larger is worse).
struct RiskMeasure {
    enum class Kind { expected_shortfall, standard_deviation };
    Kind kind = Kind::expected_shortfall;
    double level = 0.99; // tail probability for ES, multiplier for the std-dev principle

    static RiskMeasure expected_shortfall(double alpha) { return {Kind::expected_shortfall, alpha}; }
    static RiskMeasure standard_deviation(double k) { return {Kind::standard_deviation, k}; }

    double operator()(std::vector<double> losses) const
    {
        if (losses.empty()) throw DomainError("risk measure of an empty sample");
        const double n = static_cast<double>(losses.size());
        if (kind == Kind::standard_deviation) {
            const double mean = mc::pairwise_sum(losses) / n;
            std::vector<double> sq(losses.size());
            for (std::size_t i = 0; i < losses.size(); ++i) sq[i] = (losses[i] - mean) * (losses[i] - mean);
            return level * std::sqrt(mc::pairwise_sum(sq) / n);
        }
        if (!(level > 0.0 && level < 1.0)) throw DomainError("expected shortfall level must lie in (0, 1)");
        std::sort(losses.begin(), losses.end(), std::greater<>());
        const std::size_t tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((1.0 - level) * n - 1e-9)));
        return mc::pairwise_sum(losses.data(), tail) / static_cast<double>(tail);
    }
};

// One public scenario of the portfolio: the conditional mean of a single claim given all public
// information up to T, the gains of the chosen financial hedge, and the portfolio's individual claims.
struct MarginScenario {
    double conditional_mean = 0.0;
    double hedge_gains = 0.0;
    std::vector<double> claims;
};

struct RiskMarginReport {
    double base = 0.0;           // QP value at t
    double margin_joint = 0.0;   // rho(hedged public gap + pooling residual)
    double margin_public = 0.0;  // rho(hedged public gap)
    double margin_pooling = 0.0; // rho(pooling residual)
    double pooling_variance = 0.0;
    std::size_t scenarios = 0;
};

// Splits the per-policy commitment (1/n) sum X^i into base + public gap + pooling residual and
// applies rho to the two risky parts, jointly and separately.
inline RiskMarginReport risk_margin_decompose(const std::vector<MarginScenario>& scenarios, double base, const RiskMeasure& rho,
                                              std::size_t min_scenarios = 100)
{
    if (scenarios.size() < min_scenarios)
        throw DomainError("risk margin needs at least " + std::to_string(min_scenarios) + " scenarios, got " +
                          std::to_string(scenarios.size()));
    std::vector<double> gap(scenarios.size()), pooling(scenarios.size()), joint(scenarios.size());
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
        const auto& sc = scenarios[k];
        if (sc.claims.empty()) throw DomainError("scenario " + std::to_string(k) + " has no claims");
        const double avg = mc::pairwise_sum(sc.claims) / static_cast<double>(sc.claims.size());
        gap[k] = sc.conditional_mean - base + sc.hedge_gains;
        pooling[k] = avg - sc.conditional_mean;
        joint[k] = gap[k] + pooling[k];
    }
    RiskMarginReport r;
    r.base = base;
    r.scenarios = scenarios.size();
    r.margin_public = rho(gap);
    r.margin_pooling = rho(pooling);
    r.margin_joint = rho(joint);
    const double mean = mc::pairwise_sum(pooling) / static_cast<double>(pooling.size());
    std::vector<double> sq(pooling.size());
    for (std::size_t k = 0; k < pooling.size(); ++k) sq[k] = (pooling[k] - mean) * (pooling[k] - mean);
    r.pooling_variance = mc::pairwise_sum(sq) / static_cast<double>(pooling.size() - 1);
    return r;
}

} // namespace qpval::products
