#pragma once

#include <optional>
#include <vector>

#include "qpval/finite/linalg.hpp"
#include "qpval/finite/martingale.hpp"

namespace qpval::finite {

// Positions per time and public block: positions[s][block][asset]. Block-constant by construction,
// so the strategy is adapted to the public filtration.
using BlockStrategy = std::vector<std::vector<std::vector<Rational>>>;

struct HedgeResult {
    std::size_t t = 0;
    RandomVariable price;                       // value at t, constant on blocks of partition t
    std::vector<std::vector<Rational>> values;  // [s][block] value process for s >= t
    BlockStrategy strategy;                     // zero before t and on null blocks
};

namespace detail {

// Finds xi with increments[c] . xi >= targets[c] for every child. The system is feasible whenever
// the targets come from a one-step superhedging value.
inline std::vector<Rational> dominating_position(const RationalMatrix& increments, const std::vector<Rational>& targets,
                                                 std::size_t num_assets)
{
    const std::size_t n = increments.size();
    const auto basis = independent_rows(increments);
    const std::size_t r = basis.size();
    if (r == 0) {
        for (const auto& w : targets)
            if (w > 0) throw NumericError("no dominating position: target exceeds value on a flat node");
        return std::vector<Rational>(num_assets, Rational(0));
    }
    // Restrict xi to the span of the increments: xi = sum_j eta_j * increments[basis[j]].
    RationalMatrix gram(n, std::vector<Rational>(r));
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t j = 0; j < r; ++j) {
            Rational dot = 0;
            for (std::size_t k = 0; k < num_assets; ++k) dot += increments[c][k] * increments[basis[j]][k];
            gram[c][j] = dot;
        }
    std::optional<std::vector<Rational>> best;
    for_each_subset(n, r, [&](const std::vector<std::size_t>& tight) {
        RationalMatrix a(r);
        std::vector<Rational> rhs(r);
        for (std::size_t i = 0; i < r; ++i) {
            a[i] = gram[tight[i]];
            rhs[i] = targets[tight[i]];
        }
        auto eta = solve_unique(a, rhs);
        if (!eta) return true;
        for (std::size_t c = 0; c < n; ++c) {
            Rational lhs = 0;
            for (std::size_t j = 0; j < r; ++j) lhs += gram[c][j] * (*eta)[j];
            if (lhs < targets[c]) return true;
        }
        best = std::move(eta);
        return false;
    });
    if (!best) throw NumericError("no dominating position found for a superhedging node");
    std::vector<Rational> xi(num_assets, Rational(0));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < num_assets; ++k) xi[k] += (*best)[j] * increments[basis[j]][k];
    return xi;
}

// Value of h per terminal block; h must be constant on the positive-mass outcomes of each block.
inline std::vector<Rational> terminal_values(const RandomVariable& h, const Market& market)
{
    const auto& terminal = market.filtration().terminal();
    const auto& p = market.reference();
    if (h.size() != market.space_size()) throw StructuralError("claim has wrong length");
    std::vector<Rational> v(terminal.num_blocks(), Rational(0));
    for (std::size_t b = 0; b < terminal.num_blocks(); ++b) {
        std::optional<Rational> val;
        for (auto w : terminal.block(b)) {
            if (p[w] == 0) continue;
            if (val && *val != h[w])
                throw DomainError("claim is not measurable with respect to the terminal public information (block " +
                                  std::to_string(b) + ")");
            val = h[w];
        }
        if (val) v[b] = *val;
    }
    return v;
}

} // namespace detail

// Conditional superhedging price of a terminal public claim at time t, computed by backward
// induction of one-step suprema over local martingale laws, with an attaining strategy.
inline HedgeResult superhedge_price(const RandomVariable& h, const Market& market, std::size_t t,
                                    const MartingalePolytope& poly)
{
    const std::size_t horizon = market.horizon();
    if (t > horizon) throw DomainError("superhedge time beyond the horizon");
    if (!poly.has_equivalent) throw MarketArbitrageError("market admits arbitrage: no equivalent martingale measure");
    const auto& filt = market.filtration();
    const std::size_t d = market.num_assets();

    HedgeResult res;
    res.t = t;
    res.values.resize(horizon + 1);
    res.values[horizon] = detail::terminal_values(h, market);
    res.strategy.resize(horizon);
    for (std::size_t s = 0; s < horizon; ++s)
        res.strategy[s].assign(filt.at(s).num_blocks(), std::vector<Rational>(d, Rational(0)));

    for (std::size_t s = horizon; s-- > t;) {
        res.values[s].assign(filt.at(s).num_blocks(), Rational(0));
        for (std::size_t b = 0; b < filt.at(s).num_blocks(); ++b) {
            const auto& node = poly.nodes[s][b];
            if (!node.active) continue;
            std::optional<Rational> best;
            for (const auto& v : node.vertices) {
                Rational e = 0;
                for (std::size_t j = 0; j < node.children.size(); ++j) e += v[j] * res.values[s + 1][node.children[j]];
                if (!best || e > *best) best = e;
            }
            res.values[s][b] = *best;
            std::vector<Rational> targets(node.children.size());
            for (std::size_t j = 0; j < node.children.size(); ++j) targets[j] = res.values[s + 1][node.children[j]] - *best;
            res.strategy[s][b] = detail::dominating_position(node.increments, targets, d);
        }
    }
    res.price = expand_blocks(res.values[t], filt.at(t));
    return res;
}

inline HedgeResult superhedge_price(const RandomVariable& h, const Market& market, std::size_t t)
{
    return superhedge_price(h, market, t, martingale_measures(market));
}

// Largest price from which a strategy is dominated by h: -superhedge(-h), with the mirrored strategy.
inline HedgeResult subhedge_price(const RandomVariable& h, const Market& market, std::size_t t, const MartingalePolytope& poly)
{
    RandomVariable neg(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) neg[i] = -h[i];
    auto res = superhedge_price(neg, market, t, poly);
    for (auto& v : res.price) v = -v;
    for (auto& row : res.values)
        for (auto& v : row) v = -v;
    for (auto& per_time : res.strategy)
        for (auto& pos : per_time)
            for (auto& v : pos) v = -v;
    return res;
}

// Gains sum_{s>=t} xi_s . (S_{s+1} - S_s) of a block strategy, per outcome.
inline RandomVariable strategy_gains(const BlockStrategy& strategy, const Market& market, std::size_t t)
{
    const auto& filt = market.filtration();
    RandomVariable g(market.space_size(), Rational(0));
    for (std::size_t w = 0; w < g.size(); ++w)
        for (std::size_t s = t; s < market.horizon(); ++s) {
            const auto b = filt.at(s).block_of(w);
            for (std::size_t k = 0; k < market.num_assets(); ++k)
                g[w] += strategy[s][b][k] * (market.prices()[s + 1][k][w] - market.prices()[s][k][w]);
        }
    return g;
}

} // namespace qpval::finite
