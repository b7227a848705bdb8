#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "qpval/arbitrage/market.hpp"
#include "qpval/montecarlo/estimate.hpp"
#include "qpval/montecarlo/rng.hpp"

namespace qpval::arbitrage {

// Conditional law of one seeker's benefit on a conditioning cell: finitely many values.
struct ConditionalLaw {
    double probability = 0.0; // of the cell
    std::vector<double> values;
    std::vector<double> weights;

    double mean() const
    {
        double m = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) m += weights[i] * values[i];
        return m;
    }
    double variance() const
    {
        const double mu = mean();
        double v = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) v += weights[i] * (values[i] - mu) * (values[i] - mu);
        return v;
    }
    double draw(mc::Stream& rng) const
    {
        double u = rng.uniform();
        for (std::size_t i = 0; i + 1 < values.size(); ++i) {
            if (u < weights[i]) return values[i];
            u -= weights[i];
        }
        return values.back();
    }
};

inline ConditionalLaw bernoulli_law(double q, double probability = 1.0) { return {probability, {1.0, 0.0}, {q, 1.0 - q}}; }

// Law of X given each terminal public block of positive mass.
inline std::vector<ConditionalLaw> conditional_laws(const RandomVariable& x, const Market& market)
{
    const auto& part = market.filtration().terminal();
    const auto& p = market.reference();
    std::vector<ConditionalLaw> out;
    for (std::size_t b = 0; b < part.num_blocks(); ++b) {
        Rational mass = 0;
        for (auto o : part.block(b)) mass += p[o];
        if (mass == 0) continue;
        ConditionalLaw law;
        law.probability = to_double(mass);
        for (auto o : part.block(b)) {
            if (p[o] == 0) continue;
            law.values.push_back(to_double(x[o]));
            law.weights.push_back(to_double(p[o] / mass));
        }
        out.push_back(std::move(law));
    }
    return out;
}

struct SllnRow {
    std::size_t n = 0;
    double rms_error = 0.0;           // probability-weighted over cells
    double reference = 0.0;           // sqrt(E[conditional variance] / n)
    std::vector<double> cell_rms;
    std::vector<double> cell_reference;
};

struct SllnReport {
    std::vector<SllnRow> rows;
    std::optional<double> exponent; // slope of log rms error on log n; absent when an error is exactly 0
    std::optional<double> r_squared;
};

// Error of the average of n conditionally i.i.d. copies against the conditional mean, root mean
// square over `replicates` repetitions per cell.
inline SllnReport slln_experiment(const std::vector<ConditionalLaw>& cells, const std::vector<std::size_t>& grid,
                                  std::size_t replicates, mc::RngSpec spec)
{
    if (cells.empty() || grid.empty() || replicates == 0) throw DomainError("slln experiment needs cells, a grid and replicates");
    for (const auto& c : cells)
        if (!std::isfinite(c.variance())) throw NumericError("conditional variance is not finite");
    SllnReport rep;
    std::uint32_t substream = 0;
    for (auto n : grid) {
        if (n == 0) throw DomainError("grid sizes must be positive");
        SllnRow row;
        row.n = n;
        double total_p = 0.0, sq = 0.0, ref = 0.0;
        std::vector<double> draws(n);
        for (const auto& cell : cells) {
            const double mu = cell.mean();
            double acc = 0.0;
            for (std::size_t r = 0; r < replicates; ++r) {
                mc::Stream rng(spec, substream++);
                for (auto& d : draws) d = cell.draw(rng);
                const double err = mc::pairwise_sum(draws) / static_cast<double>(n) - mu;
                acc += err * err;
            }
            row.cell_rms.push_back(std::sqrt(acc / static_cast<double>(replicates)));
            row.cell_reference.push_back(std::sqrt(cell.variance() / static_cast<double>(n)));
            total_p += cell.probability;
            sq += cell.probability * row.cell_rms.back() * row.cell_rms.back();
            ref += cell.probability * cell.variance();
        }
        row.rms_error = std::sqrt(sq / total_p);
        row.reference = std::sqrt(ref / total_p / static_cast<double>(n));
        rep.rows.push_back(std::move(row));
    }
    if (rep.rows.size() >= 2 && std::all_of(rep.rows.begin(), rep.rows.end(), [](const SllnRow& r) { return r.rms_error > 0.0; })) {
        double mx = 0, my = 0;
        const double k = static_cast<double>(rep.rows.size());
        for (const auto& r : rep.rows) {
            mx += std::log(static_cast<double>(r.n)) / k;
            my += std::log(r.rms_error) / k;
        }
        double sxy = 0, sxx = 0, syy = 0;
        for (const auto& r : rep.rows) {
            const double dx = std::log(static_cast<double>(r.n)) - mx, dy = std::log(r.rms_error) - my;
            sxy += dx * dy;
            sxx += dx * dx;
            syy += dy * dy;
        }
        rep.exponent = sxy / sxx;
        rep.r_squared = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    }
    return rep;
}

} // namespace qpval::arbitrage
