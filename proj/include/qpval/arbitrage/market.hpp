#pragma once

#include <vector>

#include "qpval/finite.hpp"

namespace qpval::arbitrage {

using finite::Market;
using finite::Measure;
using finite::Partition;
using finite::RandomVariable;

// A contract offered at issue time t: benefits X_{t,T} >= 0 and the premium charged for it.
struct IssueContract {
    std::size_t t = 0;
    RandomVariable benefit;
    RandomVariable premium;
};

// Financial market plus the insurance contracts offered on it. Seekers' benefits are conditionally
// i.i.d. copies of `benefit` given the terminal public information.
struct InsuranceMarket {
    Market market;
    std::vector<IssueContract> contracts;

    void validate() const
    {
        const auto n = market.space_size();
        for (std::size_t k = 0; k < contracts.size(); ++k) {
            const auto& c = contracts[k];
            const auto where = "contract " + std::to_string(k);
            if (c.t >= market.horizon()) throw DomainError(where + " is issued at t=" + std::to_string(c.t) + ", not before the horizon");
            if (c.benefit.size() != n || c.premium.size() != n) throw StructuralError(where + " has values of the wrong length");
            for (const auto& x : c.benefit)
                if (x < 0) throw DomainError(where + " has negative benefits");
        }
    }
};

// E_P[X | terminal public information]: the limit of the average over many seekers.
inline RandomVariable pooled_benefit(const IssueContract& c, const Market& market)
{
    return finite::conditional_expectation(c.benefit, market.filtration().terminal(), market.reference());
}

} // namespace qpval::arbitrage
