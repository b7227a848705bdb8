#pragma once

#include <cmath>
#include <vector>

#include "qpval/core/error.hpp"

namespace qpval::products {

// Candidate mortality curves (hazard per period) with prior weights.
struct LongevityMixture {
    std::vector<std::vector<double>> hazards; // [curve][period]
    std::vector<double> weights;

    void validate() const
    {
        if (hazards.empty() || hazards.size() != weights.size()) throw StructuralError("mixture needs one weight per curve");
        double total = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] < 0.0) throw DomainError("mixture weights must be non-negative");
            total += weights[i];
            if (hazards[i].size() != hazards.front().size()) throw StructuralError("mortality curves differ in length");
            for (auto h : hazards[i])
                if (h < 0.0) throw DomainError("hazards must be non-negative");
        }
        if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture weights must sum to 1");
    }
};

struct CohortObservation {
    std::size_t alive = 0;
    std::size_t deaths = 0;
};

struct MixturePath {
    std::vector<std::vector<double>> weights; // [t][curve], t = 0..periods
    std::vector<double> intensity;            // sum_i weights[t][i] * hazard_i(t), t = 0..periods-1
};

// Bayes update with a binomial likelihood per period, q = 1 - exp(-hazard).
inline MixturePath mixture_update(const LongevityMixture& mix, const std::vector<CohortObservation>& observations)
{
    mix.validate();
    const std::size_t curves = mix.weights.size();
    if (observations.size() > mix.hazards.front().size()) throw StructuralError("more observations than curve periods");
    MixturePath path;
    path.weights.push_back(mix.weights);
    for (std::size_t t = 0; t < observations.size(); ++t) {
        const auto& obs = observations[t];
        if (obs.deaths > obs.alive) throw DomainError("deaths exceed the number alive at period " + std::to_string(t));
        const auto& prior = path.weights.back();
        double mixed = 0.0;
        for (std::size_t i = 0; i < curves; ++i) mixed += prior[i] * mix.hazards[i][t];
        path.intensity.push_back(mixed);

        std::vector<double> logpost(curves, -INFINITY);
        double top = -INFINITY;
        for (std::size_t i = 0; i < curves; ++i) {
            if (prior[i] <= 0.0) continue;
            const double h = mix.hazards[i][t];
            const double log_q = h > 0.0 ? std::log(-std::expm1(-h)) : -INFINITY;
            const double log_survive = -h;
            double ll = 0.0;
            if (obs.deaths > 0) ll += static_cast<double>(obs.deaths) * log_q;
            if (obs.alive > obs.deaths) ll += static_cast<double>(obs.alive - obs.deaths) * log_survive;
            logpost[i] = std::log(prior[i]) + ll;
            top = std::max(top, logpost[i]);
        }
        if (!std::isfinite(top)) throw NumericError("mixture posterior degenerate at period " + std::to_string(t));
        std::vector<double> post(curves, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < curves; ++i) {
            post[i] = std::isfinite(logpost[i]) ? std::exp(logpost[i] - top) : 0.0;
            total += post[i];
        }
        for (auto& w : post) w /= total;
        path.weights.push_back(std::move(post));
    }
    return path;
}

} // namespace qpval::products
