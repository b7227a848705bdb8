#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "qpval/arbitrage/pnl.hpp"

namespace qpval::arbitrage {

enum class NifaStatus { certified, inconclusive };

struct NifaResult {
    NifaStatus status = NifaStatus::inconclusive;
    std::vector<Rational> witness; // terminal public block masses of Q when certified
    std::size_t candidates = 0;
};

struct IfaCertificate {
    std::size_t contract = 0;
    std::size_t t = 0;
    std::vector<std::size_t> trigger_blocks;     // blocks of the time-t partition where p_down > pi
    std::vector<Rational> premium_floor;         // per block of the time-t partition
    std::vector<Rational> superhedge;            // per block of the time-t partition
    std::vector<bool> replicable;                // super- and subhedging prices agree on the block
    finite::BlockStrategy strategy;              // superhedge of the pooled benefit, zero off the trigger set
    Rational trigger_probability = 0;
};

namespace detail {

inline void require_financial_no_arbitrage(const finite::MartingalePolytope& poly)
{
    if (poly.empty) throw MarketArbitrageError("financial market admits arbitrage: no martingale measure exists");
    if (!poly.has_equivalent) throw MarketArbitrageError("financial market admits arbitrage: no equivalent martingale measure exists");
}

// p_t <= E_{Q.P}[X | F_t] on every outcome of positive mass, for every contract.
inline bool premiums_covered(const InsuranceMarket& ins, const std::vector<Rational>& q)
{
    const auto& m = ins.market;
    const auto composed = finite::qp_compose(q, m.reference(), m.filtration().terminal());
    for (const auto& c : ins.contracts) {
        const auto value = finite::conditional_expectation(c.benefit, m.filtration().at(c.t), composed);
        for (std::size_t w = 0; w < value.size(); ++w)
            if (m.reference()[w] > 0 && c.premium[w] > value[w]) return false;
    }
    return true;
}

} // namespace detail

// Looks for an equivalent martingale measure under which every premium is at most the QP value of its
// benefits. Tries the equivalent vertices, then the barycenter of all vertices, then points
// approaching each vertex by repeated halving of the distance.
inline NifaResult check_nifa(const InsuranceMarket& ins, const finite::MartingalePolytope& poly, std::size_t depth = 40)
{
    ins.validate();
    detail::require_financial_no_arbitrage(poly);
    NifaResult r;
    const auto accept = [&](const std::vector<Rational>& q) {
        ++r.candidates;
        if (!finite::is_equivalent(poly, q) || !detail::premiums_covered(ins, q)) return false;
        r.status = NifaStatus::certified;
        r.witness = q;
        return true;
    };
    for (const auto& v : poly.vertices)
        if (accept(v)) return r;
    const auto centre = finite::barycenter(poly.vertices);
    if (accept(centre)) return r;
    for (const auto& v : poly.vertices) {
        Rational step(1, 2);
        for (std::size_t k = 0; k < depth; ++k, step /= 2) {
            std::vector<Rational> q(centre.size());
            for (std::size_t i = 0; i < q.size(); ++i) q[i] = v[i] + step * (centre[i] - v[i]);
            if (accept(q)) return r;
        }
    }
    return r;
}

inline NifaResult check_nifa(const InsuranceMarket& ins) { return check_nifa(ins, finite::martingale_measures(ins.market)); }

// Premium floor against superhedging price of the pooled benefit for one contract. The trigger set
// holds the blocks where the floor is strictly larger, or every block of positive mass when forced
// (used to run the construction on a market where it should not pay off).
inline IfaCertificate certificate_for(const InsuranceMarket& ins, std::size_t k, const finite::MartingalePolytope& poly,
                                      bool force = false)
{
    const auto& m = ins.market;
    const auto& c = ins.contracts.at(k);
    const auto& part = m.filtration().at(c.t);
    const auto pooled = pooled_benefit(c, m);
    const auto floor = finite::cond_ess_bounds(c.premium, part, m.reference());
    const auto super = finite::superhedge_price(pooled, m, c.t, poly);
    const auto sub = finite::subhedge_price(pooled, m, c.t, poly);

    IfaCertificate cert;
    cert.contract = k;
    cert.t = c.t;
    for (std::size_t b = 0; b < part.num_blocks(); ++b) {
        const auto w = part.block(b).front();
        cert.premium_floor.push_back(floor.lower[w]);
        cert.superhedge.push_back(super.price[w]);
        cert.replicable.push_back(super.price[w] == sub.price[w]);
        if (floor.defined[b] && (force || floor.lower[w] > super.price[w])) {
            cert.trigger_blocks.push_back(b);
            for (auto o : part.block(b)) cert.trigger_probability += m.reference()[o];
        }
    }

    // Trade only on descendants of the trigger blocks.
    cert.strategy = super.strategy;
    for (std::size_t s = 0; s < cert.strategy.size(); ++s)
        for (std::size_t b = 0; b < cert.strategy[s].size(); ++b) {
            const auto w = m.filtration().at(s).block(b).front();
            const bool on_trigger = s >= c.t && std::find(cert.trigger_blocks.begin(), cert.trigger_blocks.end(),
                                                          part.block_of(w)) != cert.trigger_blocks.end();
            if (!on_trigger)
                for (auto& x : cert.strategy[s][b]) x = 0;
        }
    return cert;
}

// First contract (in issue order) whose premium floor strictly exceeds the superhedging price of the
// pooled benefit on some block of positive mass.
inline std::optional<IfaCertificate> check_ifa(const InsuranceMarket& ins, const finite::MartingalePolytope& poly)
{
    ins.validate();
    detail::require_financial_no_arbitrage(poly);
    for (std::size_t k = 0; k < ins.contracts.size(); ++k) {
        auto cert = certificate_for(ins, k, poly);
        if (!cert.trigger_blocks.empty()) return cert;
    }
    return std::nullopt;
}

inline std::optional<IfaCertificate> check_ifa(const InsuranceMarket& ins) { return check_ifa(ins, finite::martingale_measures(ins.market)); }

} // namespace qpval::arbitrage
