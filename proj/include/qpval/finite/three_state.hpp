#pragma once

#include <algorithm>

#include "qpval/finite/space.hpp"

namespace qpval::finite {

// One-period market with three financial states (good, medium, bad) crossed with an insurance
// event (payment, no payment). Outcome order: gp, gn, mp, mn, bp, bn. S_0 = 1 and
// S_1 = 1.5, 1, 0.5; the numeraire is constant. Real-world weights are
// (0.1h, 0.9h, 0.2k, 0.8k, 0.4l, 0.6l) with h + k + l = 1.
struct ThreeStateMarket {
    OutcomeSpace space;
    Market market;
    RandomVariable payment;  // indicator of the insurance payment
    RandomVariable hybrid;   // payment times a call on S_1 struck at 0.7
};

inline ThreeStateMarket three_state_market(const Rational& h, const Rational& k, const Rational& l)
{
    if (h + k + l != 1) throw DomainError("state weights h, k, l must sum to 1");
    OutcomeSpace space({"gp", "gn", "mp", "mn", "bp", "bn"});
    const Rational tenth(1, 10);
    Measure p({tenth * h, 9 * tenth * h, 2 * tenth * k, 8 * tenth * k, 4 * tenth * l, 6 * tenth * l});
    Filtration filt({Partition::trivial(6), Partition(6, {{0, 1}, {2, 3}, {4, 5}})});
    const Rational s1g(3, 2), s1m(1), s1b(1, 2);
    std::vector<std::vector<RandomVariable>> prices{{RandomVariable(6, Rational(1))},
                                                     {RandomVariable{s1g, s1g, s1m, s1m, s1b, s1b}}};
    Market market(std::move(filt), std::move(p), std::move(prices));

    RandomVariable payment{1, 0, 1, 0, 1, 0};
    const Rational strike(7, 10);
    RandomVariable hybrid(6);
    for (std::size_t w = 0; w < 6; ++w) {
        const Rational intrinsic = market.prices()[1][0][w] - strike;
        hybrid[w] = payment[w] * (intrinsic > 0 ? intrinsic : Rational(0));
    }
    return {std::move(space), std::move(market), std::move(payment), std::move(hybrid)};
}

inline ThreeStateMarket three_state_complete() { return three_state_market(Rational(1, 2), 0, Rational(1, 2)); }
inline ThreeStateMarket three_state_incomplete() { return three_state_market(Rational(1, 3), Rational(1, 3), Rational(1, 3)); }

} // namespace qpval::finite
