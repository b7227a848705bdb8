#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qpval/arbitrage/theorem.hpp"
#include "qpval/montecarlo/estimate.hpp"
#include "qpval/montecarlo/rng.hpp"

namespace qpval::arbitrage {

struct ConstructionReport {
    std::size_t seekers = 0;
    std::size_t runs = 0;
    double min = 0.0;
    double mean = 0.0;
    double stderr = 0.0;
    double positive_fraction = 0.0;
    double trigger_probability = 0.0;
    double max_conditional_variance = 0.0; // of the benefit given the terminal public block
    double noise_band = 0.0;               // 4 sqrt(max variance / n)
};

namespace detail {

// Discrete law over a set of outcomes, sampled by inversion.
class OutcomeSampler {
public:
    OutcomeSampler() = default;
    OutcomeSampler(const std::vector<std::size_t>& outcomes, const Measure& mu)
    {
        double acc = 0.0;
        for (auto o : outcomes) {
            const double w = to_double(mu[o]);
            if (w <= 0.0) continue;
            acc += w;
            outcomes_.push_back(o);
            cumulative_.push_back(acc);
        }
        if (outcomes_.empty()) throw DomainError("cannot sample from a null set of outcomes");
    }
    std::size_t operator()(mc::Stream& rng) const
    {
        const double u = rng.uniform() * cumulative_.back();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return outcomes_[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), outcomes_.size() - 1)];
    }

private:
    std::vector<std::size_t> outcomes_;
    std::vector<double> cumulative_;
};

} // namespace detail

// Simulates the combined position of the certificate: on the trigger set, 1/n of a contract to each
// of n seekers whose benefits are drawn i.i.d. from P given the terminal public block, plus the
// superhedge of the pooled benefit. Each run draws the world from P.
inline ConstructionReport construct_arbitrage(const InsuranceMarket& ins, const IfaCertificate& cert, std::size_t seekers,
                                              std::size_t runs, mc::RngSpec spec)
{
    if (seekers == 0 || runs < 2) throw DomainError("construction needs at least one seeker and two runs");
    const auto& m = ins.market;
    const auto& c = ins.contracts.at(cert.contract);
    const auto& terminal = m.filtration().terminal();
    const auto& issue = m.filtration().at(cert.t);
    const auto gains = financial_pnl(from_blocks(cert.strategy, m), m);

    std::vector<std::size_t> all(m.space_size());
    for (std::size_t w = 0; w < all.size(); ++w) all[w] = w;
    const detail::OutcomeSampler world(all, m.reference());
    std::vector<detail::OutcomeSampler> seeker(terminal.num_blocks());
    ConstructionReport r;
    r.seekers = seekers;
    r.runs = runs;
    r.trigger_probability = to_double(cert.trigger_probability);
    for (std::size_t b = 0; b < terminal.num_blocks(); ++b) {
        Rational mass = 0, first = 0, second = 0;
        for (auto o : terminal.block(b)) {
            mass += m.reference()[o];
            first += m.reference()[o] * c.benefit[o];
            second += m.reference()[o] * c.benefit[o] * c.benefit[o];
        }
        if (mass == 0) continue;
        seeker[b] = detail::OutcomeSampler(terminal.block(b), m.reference());
        const Rational mean = first / mass;
        r.max_conditional_variance = std::max(r.max_conditional_variance, to_double(second / mass - mean * mean));
    }
    r.noise_band = 4.0 * std::sqrt(r.max_conditional_variance / static_cast<double>(seekers));

    std::vector<double> benefit(c.benefit.size()), premium(c.premium.size()), gain(gains.size());
    for (std::size_t w = 0; w < benefit.size(); ++w) {
        benefit[w] = to_double(c.benefit[w]);
        premium[w] = to_double(c.premium[w]);
        gain[w] = to_double(gains[w]);
    }
    const double share = 1.0 / static_cast<double>(seekers);
    std::vector<double> pnl(runs);
    for (std::size_t run = 0; run < runs; ++run) {
        mc::Stream rng(spec, static_cast<std::uint32_t>(run));
        const auto w = world(rng);
        if (std::find(cert.trigger_blocks.begin(), cert.trigger_blocks.end(), issue.block_of(w)) == cert.trigger_blocks.end()) {
            pnl[run] = 0.0;
            continue;
        }
        const auto& draw = seeker[terminal.block_of(w)];
        std::vector<double> claims(seekers);
        for (auto& x : claims) x = benefit[draw(rng)];
        pnl[run] = premium[w] - share * mc::pairwise_sum(claims) + gain[w];
    }
    const auto est = mc::summarize(pnl, spec);
    r.mean = est.mean;
    r.stderr = est.stderr;
    r.min = *std::min_element(pnl.begin(), pnl.end());
    r.positive_fraction =
        static_cast<double>(std::count_if(pnl.begin(), pnl.end(), [](double x) { return x > 0.0; })) / static_cast<double>(runs);
    return r;
}

} // namespace qpval::arbitrage
