#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qpval/core/error.hpp"
#include "qpval/core/rational.hpp"

namespace qpval::finite {

// Values of a random variable, one entry per outcome.
using RandomVariable = std::vector<Rational>;

class OutcomeSpace {
public:
    explicit OutcomeSpace(std::vector<std::string> labels) : labels_(std::move(labels))
    {
        if (labels_.empty()) throw StructuralError("outcome space must contain at least one outcome");
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (!index_.emplace(labels_[i], i).second)
                throw StructuralError("duplicate outcome label '" + labels_[i] + "'");
        }
    }

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

    std::size_t index_of(const std::string& label) const
    {
        auto it = index_.find(label);
        if (it == index_.end()) throw InputError("unknown outcome label '" + label + "'");
        return it->second;
    }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Probability measure on a finite outcome space; weights are non-negative and sum to exactly one.
class Measure {
public:
    Measure() = default;

    explicit Measure(std::vector<Rational> weights) : weights_(std::move(weights))
    {
        if (weights_.empty()) throw StructuralError("measure needs at least one weight");
        Rational total = 0;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            if (weights_[i] < 0)
                throw DomainError("negative weight " + to_string(weights_[i]) + " at outcome " + std::to_string(i));
            total += weights_[i];
        }
        if (total != 1) throw DomainError("measure weights sum to " + to_string(total) + ", not 1");
    }

    std::size_t size() const { return weights_.size(); }
    const Rational& operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<Rational>& weights() const { return weights_; }

    Rational mass(const std::vector<std::size_t>& outcomes) const
    {
        Rational m = 0;
        for (auto w : outcomes) m += weights_.at(w);
        return m;
    }

    Rational expectation(const RandomVariable& x) const
    {
        if (x.size() != weights_.size()) throw StructuralError("random variable and measure sizes differ");
        Rational e = 0;
        for (std::size_t i = 0; i < x.size(); ++i) e += weights_[i] * x[i];
        return e;
    }

    friend bool operator==(const Measure& a, const Measure& b) { return a.weights_ == b.weights_; }

private:
    std::vector<Rational> weights_;
};

// A sigma-algebra on a finite space, stored as the partition into its atoms.
class Partition {
public:
    Partition() = default;

    Partition(std::size_t space_size, std::vector<std::vector<std::size_t>> blocks)
        : blocks_(std::move(blocks)), block_of_(space_size, npos)
    {
        if (space_size == 0) throw StructuralError("partition of an empty space");
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            if (blocks_[b].empty()) throw StructuralError("partition block " + std::to_string(b) + " is empty");
            std::sort(blocks_[b].begin(), blocks_[b].end());
            for (auto w : blocks_[b]) {
                if (w >= space_size) throw StructuralError("partition references outcome " + std::to_string(w) + " outside the space");
                if (block_of_[w] != npos)
                    throw StructuralError("outcome " + std::to_string(w) + " appears in two partition blocks");
                block_of_[w] = b;
            }
        }
        for (std::size_t w = 0; w < space_size; ++w)
            if (block_of_[w] == npos) throw StructuralError("partition does not cover outcome " + std::to_string(w));
    }

    static Partition trivial(std::size_t n)
    {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        return Partition(n, {all});
    }

    static Partition discrete(std::size_t n)
    {
        std::vector<std::vector<std::size_t>> blocks(n);
        for (std::size_t i = 0; i < n; ++i) blocks[i] = {i};
        return Partition(n, std::move(blocks));
    }

    // Partition generated by the level sets of a labelling, blocks ordered by first occurrence.
    static Partition from_labels(const std::vector<std::size_t>& labels)
    {
        std::vector<std::vector<std::size_t>> blocks;
        std::unordered_map<std::size_t, std::size_t> seen;
        for (std::size_t w = 0; w < labels.size(); ++w) {
            auto [it, fresh] = seen.emplace(labels[w], blocks.size());
            if (fresh) blocks.emplace_back();
            blocks[it->second].push_back(w);
        }
        return Partition(labels.size(), std::move(blocks));
    }

    std::size_t space_size() const { return block_of_.size(); }
    std::size_t num_blocks() const { return blocks_.size(); }
    const std::vector<std::size_t>& block(std::size_t b) const { return blocks_.at(b); }
    const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
    std::size_t block_of(std::size_t outcome) const { return block_of_.at(outcome); }

    // True when every block of this partition lies inside a block of `coarser`.
    bool refines(const Partition& coarser) const
    {
        if (coarser.space_size() != space_size()) return false;
        for (const auto& blk : blocks_) {
            const auto target = coarser.block_of(blk.front());
            for (auto w : blk)
                if (coarser.block_of(w) != target) return false;
        }
        return true;
    }

    bool is_measurable(const RandomVariable& x) const
    {
        if (x.size() != space_size()) return false;
        for (const auto& blk : blocks_)
            for (auto w : blk)
                if (x[w] != x[blk.front()]) return false;
        return true;
    }

    friend bool operator==(const Partition& a, const Partition& b)
    {
        return a.block_of_.size() == b.block_of_.size() && a.refines(b) && b.refines(a);
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> blocks_;
    std::vector<std::size_t> block_of_;
};

inline Partition common_refinement(const Partition& a, const Partition& b)
{
    if (a.space_size() != b.space_size()) throw StructuralError("partitions live on different spaces");
    std::vector<std::size_t> labels(a.space_size());
    for (std::size_t w = 0; w < labels.size(); ++w) labels[w] = a.block_of(w) * b.num_blocks() + b.block_of(w);
    return Partition::from_labels(labels);
}

// Time-indexed refining sequence of partitions, t = 0..T.
class Filtration {
public:
    Filtration() = default;

    explicit Filtration(std::vector<Partition> partitions) : partitions_(std::move(partitions))
    {
        if (partitions_.empty()) throw StructuralError("filtration needs at least one partition");
        for (std::size_t t = 1; t < partitions_.size(); ++t) {
            if (partitions_[t].space_size() != partitions_[0].space_size())
                throw StructuralError("filtration partitions live on different spaces");
            if (!partitions_[t].refines(partitions_[t - 1]))
                throw StructuralError("partition at t=" + std::to_string(t) + " does not refine t=" + std::to_string(t - 1));
        }
    }

    std::size_t horizon() const { return partitions_.size() - 1; }
    std::size_t space_size() const { return partitions_.front().space_size(); }
    const Partition& at(std::size_t t) const { return partitions_.at(t); }
    const Partition& terminal() const { return partitions_.back(); }

private:
    std::vector<Partition> partitions_;
};

// Discounted asset prices adapted to a filtration, with the reference measure that fixes the null sets.
class Market {
public:
    Market() = default;

    // prices[t][k] is the discounted price of asset k at time t, one value per outcome.
    Market(Filtration filtration, Measure reference, std::vector<std::vector<RandomVariable>> prices)
        : filtration_(std::move(filtration)), reference_(std::move(reference)), prices_(std::move(prices))
    {
        const auto n = filtration_.space_size();
        if (reference_.size() != n) throw StructuralError("reference measure size differs from the outcome space");
        if (prices_.size() != filtration_.horizon() + 1)
            throw StructuralError("asset prices need one entry per time 0.." + std::to_string(filtration_.horizon()));
        num_assets_ = prices_.front().size();
        for (std::size_t t = 0; t < prices_.size(); ++t) {
            if (prices_[t].size() != num_assets_) throw StructuralError("asset count changes at t=" + std::to_string(t));
            for (std::size_t k = 0; k < num_assets_; ++k) {
                if (prices_[t][k].size() != n)
                    throw StructuralError("asset " + std::to_string(k) + " at t=" + std::to_string(t) + " has wrong length");
                if (!filtration_.at(t).is_measurable(prices_[t][k]))
                    throw StructuralError("asset " + std::to_string(k) + " is not measurable at t=" + std::to_string(t));
            }
        }
    }

    const Filtration& filtration() const { return filtration_; }
    const Measure& reference() const { return reference_; }
    std::size_t horizon() const { return filtration_.horizon(); }
    std::size_t num_assets() const { return num_assets_; }
    std::size_t space_size() const { return filtration_.space_size(); }

    // Price of asset k at time t on the given block of partition t.
    const Rational& price(std::size_t t, std::size_t k, std::size_t block) const
    {
        return prices_.at(t).at(k)[filtration_.at(t).block(block).front()];
    }
    const std::vector<std::vector<RandomVariable>>& prices() const { return prices_; }

private:
    Filtration filtration_;
    Measure reference_;
    std::vector<std::vector<RandomVariable>> prices_;
    std::size_t num_assets_ = 0;
};

// Masses of each block of a partition.
inline std::vector<Rational> block_masses(const Measure& mu, const Partition& part)
{
    if (mu.size() != part.space_size()) throw StructuralError("measure and partition sizes differ");
    std::vector<Rational> masses(part.num_blocks());
    for (std::size_t b = 0; b < part.num_blocks(); ++b) masses[b] = mu.mass(part.block(b));
    return masses;
}

// Expand per-block values to an outcome-level random variable.
inline RandomVariable expand_blocks(const std::vector<Rational>& per_block, const Partition& part)
{
    if (per_block.size() != part.num_blocks()) throw StructuralError("per-block vector has wrong length");
    RandomVariable x(part.space_size());
    for (std::size_t w = 0; w < x.size(); ++w) x[w] = per_block[part.block_of(w)];
    return x;
}

inline RandomVariable constant_rv(std::size_t n, const Rational& c) { return RandomVariable(n, c); }

inline RandomVariable operator+(const RandomVariable& a, const RandomVariable& b)
{
    if (a.size() != b.size()) throw StructuralError("random variable sizes differ");
    RandomVariable r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline RandomVariable operator-(const RandomVariable& a, const RandomVariable& b)
{
    if (a.size() != b.size()) throw StructuralError("random variable sizes differ");
    RandomVariable r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline RandomVariable operator*(const RandomVariable& a, const RandomVariable& b)
{
    if (a.size() != b.size()) throw StructuralError("random variable sizes differ");
    RandomVariable r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
    return r;
}

} // namespace qpval::finite
