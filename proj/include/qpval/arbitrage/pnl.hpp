#pragma once

#include <vector>

#include "qpval/arbitrage/market.hpp"

namespace qpval::arbitrage {

// Contract sizes psi^i >= 0 across seekers at one issue time.
struct Allocation {
    std::size_t t = 0;
    std::vector<double> weights;

    double mass() const
    {
        double m = 0.0;
        for (double w : weights) m += w;
        return m;
    }
};

inline Allocation uniform_allocation(std::size_t t, std::size_t n) { return {t, std::vector<double>(n, 1.0 / static_cast<double>(n))}; }

// sum_k sum_i psi_k^i (p_k - X_k^i), with p_k the realised premium of allocation k and draws[k][i]
// the realised benefit of seeker i.
inline double insurance_pnl(const std::vector<Allocation>& allocations, const std::vector<double>& premiums,
                            const std::vector<std::vector<double>>& draws)
{
    if (premiums.size() != allocations.size()) throw InputError("one premium per allocation is required");
    double total = 0.0;
    for (std::size_t k = 0; k < allocations.size(); ++k) {
        const auto& a = allocations[k];
        for (std::size_t i = 0; i < a.weights.size(); ++i) {
            if (a.weights[i] < 0.0) throw DomainError("allocation weights must be non-negative");
            if (a.weights[i] == 0.0) continue;
            if (k >= draws.size() || i >= draws[k].size())
                throw InputError("missing benefit draw for seeker " + std::to_string(i) + " of allocation " + std::to_string(k));
            total += a.weights[i] * (premiums[k] - draws[k][i]);
        }
    }
    return total;
}

// Positions positions[s][k] in asset k held over (s, s+1], one value per outcome.
using Strategy = std::vector<std::vector<RandomVariable>>;

inline Strategy zero_strategy(const Market& market)
{
    return Strategy(market.horizon(), std::vector<RandomVariable>(market.num_assets(), RandomVariable(market.space_size(), Rational(0))));
}

inline void require_adapted(const Strategy& xi, const Market& market)
{
    if (xi.size() != market.horizon()) throw StructuralError("strategy needs one position per time 0.." + std::to_string(market.horizon() - 1));
    for (std::size_t s = 0; s < xi.size(); ++s) {
        if (xi[s].size() != market.num_assets()) throw StructuralError("strategy has the wrong number of assets at t=" + std::to_string(s));
        for (std::size_t k = 0; k < xi[s].size(); ++k)
            if (!market.filtration().at(s).is_measurable(xi[s][k]))
                throw AdaptednessError("position in asset " + std::to_string(k) + " at t=" + std::to_string(s) +
                                       " depends on information not yet public");
    }
}

// Gains sum_s xi_s . (S_{s+1} - S_s) per outcome.
inline RandomVariable financial_pnl(const Strategy& xi, const Market& market)
{
    require_adapted(xi, market);
    RandomVariable g(market.space_size(), Rational(0));
    const auto& prices = market.prices();
    for (std::size_t s = 0; s < xi.size(); ++s)
        for (std::size_t k = 0; k < market.num_assets(); ++k)
            for (std::size_t w = 0; w < g.size(); ++w) g[w] += xi[s][k][w] * (prices[s + 1][k][w] - prices[s][k][w]);
    return g;
}

inline Strategy from_blocks(const finite::BlockStrategy& blocks, const Market& market)
{
    auto xi = zero_strategy(market);
    for (std::size_t s = 0; s < blocks.size(); ++s)
        for (std::size_t b = 0; b < blocks[s].size(); ++b)
            for (auto w : market.filtration().at(s).block(b))
                for (std::size_t k = 0; k < market.num_assets(); ++k) xi[s][k][w] = blocks[s][b][k];
    return xi;
}

// Uniform boundedness of the masses and convergence of the mass sequence (Cauchy tail over the
// second half of the sequence).
struct AdmissibilityReport {
    bool bounded = true;
    bool converging = true;
    double max_mass = 0.0;
    double tail_spread = 0.0;
    bool ok() const { return bounded && converging; }
};

inline AdmissibilityReport check_admissible(const std::vector<Allocation>& sequence, double bound, double tol = 1e-9)
{
    AdmissibilityReport r;
    std::vector<double> masses;
    for (const auto& a : sequence) {
        for (double w : a.weights)
            if (w < 0.0) throw DomainError("allocation weights must be non-negative");
        masses.push_back(a.mass());
        r.max_mass = std::max(r.max_mass, masses.back());
    }
    r.bounded = r.max_mass <= bound + tol;
    for (std::size_t i = masses.size() / 2; i < masses.size(); ++i)
        r.tail_spread = std::max(r.tail_spread, std::abs(masses[i] - masses.back()));
    r.converging = r.tail_spread <= tol;
    return r;
}

} // namespace qpval::arbitrage
