#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpval/finite/space.hpp"

namespace qpval::finite {

// E_mu[X | part]. Blocks of mu-mass zero get the value 0; values on null sets never enter an expectation.
inline RandomVariable conditional_expectation(const RandomVariable& x, const Partition& part, const Measure& mu)
{
    if (x.size() != part.space_size() || mu.size() != part.space_size())
        throw StructuralError("conditional expectation: random variable, partition and measure sizes differ");
    std::vector<Rational> per_block(part.num_blocks());
    for (std::size_t b = 0; b < part.num_blocks(); ++b) {
        Rational mass = 0, integral = 0;
        for (auto w : part.block(b)) {
            mass += mu[w];
            integral += mu[w] * x[w];
        }
        per_block[b] = mass == 0 ? Rational(0) : integral / mass;
    }
    return expand_blocks(per_block, part);
}

// Composition of a public measure Q (given by its block masses on `public_info`) with the real-world
// measure P: the unique measure agreeing with Q on the public sigma-algebra whose conditional law
// given it is that of P. Weight of an outcome is P(w) * Q(B) / P(B) for its block B.
inline Measure qp_compose(const std::vector<Rational>& q_blocks, const Measure& p, const Partition& public_info)
{
    if (q_blocks.size() != public_info.num_blocks())
        throw StructuralError("public measure needs one mass per block");
    if (p.size() != public_info.space_size()) throw StructuralError("real-world measure size differs from the space");
    Rational q_total = 0;
    for (std::size_t b = 0; b < q_blocks.size(); ++b) {
        if (q_blocks[b] < 0) throw DomainError("public measure has negative mass on block " + std::to_string(b));
        q_total += q_blocks[b];
    }
    if (q_total != 1) throw DomainError("public measure masses sum to " + to_string(q_total) + ", not 1");

    const auto p_blocks = block_masses(p, public_info);
    std::vector<Rational> w(p.size());
    for (std::size_t b = 0; b < public_info.num_blocks(); ++b) {
        if ((q_blocks[b] == 0) != (p_blocks[b] == 0))
            throw DomainError("public measure and real-world measure are not equivalent on block " + std::to_string(b) +
                              " (Q=" + to_string(q_blocks[b]) + ", P=" + to_string(p_blocks[b]) + ")");
        if (p_blocks[b] == 0) continue;
        const Rational density = q_blocks[b] / p_blocks[b];
        for (auto o : public_info.block(b)) w[o] = p[o] * density;
    }
    return Measure(std::move(w));
}

inline Measure qp_compose(const Measure& q, const Measure& p, const Partition& public_info)
{
    return qp_compose(block_masses(q, public_info), p, public_info);
}

// One-period QP-rule: E_Q[ E_P[X | F] ].
inline Rational qp_expect(const RandomVariable& x, const std::vector<Rational>& q_blocks, const Measure& p,
                          const Partition& public_info)
{
    // Validates equivalence and normalisation exactly as the composition does.
    (void)qp_compose(q_blocks, p, public_info);
    const auto inner = conditional_expectation(x, public_info, p);
    Rational value = 0;
    for (std::size_t b = 0; b < public_info.num_blocks(); ++b)
        value += q_blocks[b] * inner[public_info.block(b).front()];
    return value;
}

inline Rational qp_expect(const RandomVariable& x, const Measure& q, const Measure& p, const Partition& public_info)
{
    return qp_expect(x, block_masses(q, public_info), p, public_info);
}

// QP valuation conditional on coarser public information: E_{Q.P}[X | coarse] = E_Q[ E_P[X | F] | coarse ].
inline RandomVariable qp_conditional(const RandomVariable& x, const std::vector<Rational>& q_blocks, const Measure& p,
                                     const Partition& public_info, const Partition& coarse)
{
    if (!public_info.refines(coarse)) throw StructuralError("conditioning information is not contained in the public information");
    return conditional_expectation(x, coarse, qp_compose(q_blocks, p, public_info));
}

struct EssentialBounds {
    RandomVariable upper;      // conditional essential supremum, block-constant
    RandomVariable lower;      // conditional essential infimum, block-constant
    std::vector<bool> defined; // false on blocks of mu-mass zero, where both bounds are reported as 0
};

// Per-block max and min of p over the outcomes of positive mu-mass.
inline EssentialBounds cond_ess_bounds(const RandomVariable& p, const Partition& part, const Measure& mu)
{
    if (p.size() != part.space_size() || mu.size() != part.space_size())
        throw StructuralError("essential bounds: sizes differ");
    std::vector<Rational> up(part.num_blocks()), down(part.num_blocks());
    std::vector<bool> defined(part.num_blocks(), false);
    for (std::size_t b = 0; b < part.num_blocks(); ++b) {
        std::optional<Rational> hi, lo;
        for (auto w : part.block(b)) {
            if (mu[w] == 0) continue;
            if (!hi || p[w] > *hi) hi = p[w];
            if (!lo || p[w] < *lo) lo = p[w];
        }
        if (hi) {
            up[b] = *hi;
            down[b] = *lo;
            defined[b] = true;
        }
    }
    return {expand_blocks(up, part), expand_blocks(down, part), std::move(defined)};
}

} // namespace qpval::finite
