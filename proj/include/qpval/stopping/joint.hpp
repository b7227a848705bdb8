#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "qpval/montecarlo/rng.hpp"
#include "qpval/stopping/copula.hpp"
#include "qpval/stopping/intensity.hpp"

namespace qpval::stopping {

// Two doubly stochastic times driven by cumulated intensities whose thresholds are coupled
// through a copula of (exp(-E1), exp(-E2)).
struct JointSurvival {
    IntensityPath first;
    IntensityPath second;
    Copula2 copula;

    std::size_t horizon() const { return std::min(first.horizon(), second.horizon()); }

    // P(first > s, second > t | F) = C(exp(-Lambda1_s), exp(-Lambda2_t)); index -1 means no
    // information yet (argument 1).
    double gamma(long s, long t) const
    {
        const double u = s < 0 ? 1.0 : std::exp(-first[static_cast<std::size_t>(s)]);
        const double v = t < 0 ? 1.0 : std::exp(-second[static_cast<std::size_t>(t)]);
        return copula(u, v);
    }
};

// Conditional probabilities of the cells known at time t: both alive (both_alive), second time
// at i with the first alive (second_at[i]), first at i with the second alive (first_at[i]) and
// both stopped at (i, j) (both_at[i][j]), for i, j = 0..t.
struct PartitionProbs {
    std::size_t t = 0;
    double both_alive = 0.0;
    std::vector<double> second_at;
    std::vector<double> first_at;
    std::vector<std::vector<double>> both_at;

    double total() const
    {
        double s = both_alive;
        for (auto v : second_at) s += v;
        for (auto v : first_at) s += v;
        for (const auto& row : both_at)
            for (auto v : row) s += v;
        return s;
    }
};

namespace detail {
inline double clamp_mass(double x)
{
    if (x < 0.0 && x >= -1e-14) return 0.0;
    return x;
}
} // namespace detail

inline PartitionProbs partition_probs(const JointSurvival& js, std::size_t t)
{
    if (t > js.horizon()) throw DomainError("partition time beyond the horizon");
    const long tt = static_cast<long>(t);
    PartitionProbs pp;
    pp.t = t;
    pp.both_alive = js.gamma(tt, tt);
    pp.second_at.resize(t + 1);
    pp.first_at.resize(t + 1);
    pp.both_at.assign(t + 1, std::vector<double>(t + 1));
    for (long i = 0; i <= tt; ++i) {
        pp.second_at[i] = detail::clamp_mass(js.gamma(tt, i - 1) - js.gamma(tt, i));
        pp.first_at[i] = detail::clamp_mass(js.gamma(i - 1, tt) - js.gamma(i, tt));
        for (long j = 0; j <= tt; ++j)
            pp.both_at[i][j] = detail::clamp_mass(js.gamma(i - 1, j - 1) - js.gamma(i, j - 1) - js.gamma(i - 1, j) + js.gamma(i, j));
    }
    return pp;
}

// Exponential thresholds (E1, E2) whose images exp(-E) have the copula's joint law.
inline std::pair<double, double> sample_thresholds(const Copula2& c, mc::Stream& rng)
{
    const double u = rng.uniform();
    const double w = rng.uniform();
    double v = c.conditional_inverse(u, w);
    v = std::clamp(v, 1e-300, 1.0);
    return {-std::log(u), -std::log(v)};
}

// Index of the period in which a threshold is crossed, or horizon+1 when it survives past t.
inline std::size_t crossing_cell(const IntensityPath& path, double threshold, std::size_t t)
{
    for (std::size_t i = 0; i <= t; ++i)
        if (threshold <= path[i]) return i;
    return t + 1;
}

// Samples n threshold pairs and returns the largest absolute gap between empirical cell
// frequencies and partition_probs at t, together with the largest binomial standard error.
struct PartitionCheck {
    double max_deviation = 0.0;
    double max_z = 0.0;        // deviation divided by its binomial standard error, over cells with mass
};

inline PartitionCheck empirical_partition_check(const JointSurvival& js, std::size_t t, std::size_t n, mc::RngSpec rng_spec)
{
    const auto pp = partition_probs(js, t);
    const std::size_t cells = t + 2;
    std::vector<std::vector<std::size_t>> counts(cells, std::vector<std::size_t>(cells, 0));
    for (std::size_t k = 0; k < n; ++k) {
        mc::Stream rng(rng_spec, static_cast<std::uint32_t>(k));
        const auto [e1, e2] = sample_thresholds(js.copula, rng);
        ++counts[crossing_cell(js.first, e1, t)][crossing_cell(js.second, e2, t)];
    }
    PartitionCheck out;
    const double nd = static_cast<double>(n);
    auto visit = [&](double p, std::size_t count) {
        const double dev = std::abs(static_cast<double>(count) / nd - p);
        out.max_deviation = std::max(out.max_deviation, dev);
        const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / nd);
        if (se > 0.0) out.max_z = std::max(out.max_z, dev / se);
        else if (dev > 0.0) out.max_z = std::numeric_limits<double>::infinity();
    };
    visit(pp.both_alive, counts[t + 1][t + 1]);
    for (std::size_t i = 0; i <= t; ++i) {
        visit(pp.second_at[i], counts[t + 1][i]);
        visit(pp.first_at[i], counts[i][t + 1]);
        for (std::size_t j = 0; j <= t; ++j) visit(pp.both_at[i][j], counts[i][j]);
    }
    return out;
}

} // namespace qpval::stopping
