#pragma once

#include <cmath>
#include <functional>
#include <sstream>

#include "qpval/montecarlo/estimate.hpp"
#include "qpval/montecarlo/paths.hpp"
#include "qpval/stopping/joint.hpp"

namespace qpval::mc {

// One simulated world seen from time `start`: factor path and the two exponential thresholds.
struct Scenario {
    std::size_t start = 0;
    const std::vector<Vec>* path = nullptr;
    double first_threshold = 0.0;
    double second_threshold = 0.0;

    std::size_t horizon() const { return start + path->size() - 1; }
    const Vec& state(std::size_t s) const { return (*path)[s - start]; }
};

using Payoff = std::function<double(const Scenario&)>;

enum class NestedMode {
    structural, // public path under Q, private factors and thresholds under P given it
    density,    // full path under P, weighted by the public-path likelihood ratio
};

struct NestedConfig {
    std::size_t start = 0;
    std::size_t horizon = 1;
    Vec z_start;
    std::size_t outer = 1000;  // independent samples (pairs when antithetic)
    std::size_t inner = 1;     // private-side draws per public path
    stopping::Copula2 copula;  // coupling of the two thresholds
    bool antithetic = false;
    NestedMode mode = NestedMode::structural;
    unsigned workers = 1;
};

namespace detail {

inline double checked(double v, std::size_t index, const Scenario& sc)
{
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "payoff is not finite on sample " << index << " (start state";
        for (Eigen::Index i = 0; i < sc.state(sc.start).size(); ++i) os << ' ' << sc.state(sc.start)[i];
        os << ", horizon state";
        for (Eigen::Index i = 0; i < sc.state(sc.horizon()).size(); ++i) os << ' ' << sc.state(sc.horizon())[i];
        os << ")";
        throw NumericError(os.str());
    }
    return v;
}

// Draws the scenarios behind one sample and calls visit(scenario, weight); the sample is the
// weighted sum of the payoff over the visited scenarios.
template <class Visit>
void for_each_scenario(const affine::GaussianFactorModel& m, const NestedConfig& cfg, Stream& rng, Visit&& visit)
{
    const std::size_t steps = cfg.horizon - cfg.start;
    const auto dy = static_cast<Eigen::Index>(m.public_dim());
    if (cfg.mode == NestedMode::density) {
        const auto z = sample_path(m, PathLaw::p, cfg.z_start, steps, rng);
        const auto [e1, e2] = stopping::sample_thresholds(cfg.copula, rng);
        visit(Scenario{cfg.start, &z, e1, e2}, std::exp(public_log_density_ratio(m, z)));
        return;
    }
    const auto y = public_path_q(m, cfg.z_start.tail(dy), steps, rng);
    const double w = 1.0 / static_cast<double>(cfg.inner);
    for (std::size_t j = 0; j < cfg.inner; ++j) {
        const auto z = fill_private(m, cfg.z_start, y, rng);
        const auto [e1, e2] = stopping::sample_thresholds(cfg.copula, rng);
        visit(Scenario{cfg.start, &z, e1, e2}, w);
    }
}

inline double one_sample(const affine::GaussianFactorModel& m, const Payoff& payoff, const NestedConfig& cfg, Stream& rng,
                         std::size_t index)
{
    double acc = 0.0;
    for_each_scenario(m, cfg, rng, [&](const Scenario& sc, double w) { acc += checked(w * payoff(sc), index, sc); });
    return acc;
}

} // namespace detail

// Estimates E_Q[ E_P[payoff | public path] ] from the configured start state.
inline QPEstimate estimate_qp_nested(const affine::AffineModel& model, const Payoff& payoff, const NestedConfig& cfg, RngSpec spec)
{
    const auto& m = require_sampler(model);
    if (cfg.horizon <= cfg.start) throw DomainError("nested estimate needs horizon > start");
    if (cfg.inner == 0) throw DomainError("nested estimate needs at least one inner draw");
    if (cfg.z_start.size() != static_cast<Eigen::Index>(m.dim())) throw StructuralError("start state has wrong dimension");
    std::vector<double> samples;
    parallel_fill(samples, cfg.outer, cfg.workers, [&](std::size_t i) {
        Stream rng(spec, static_cast<std::uint32_t>(i));
        const double plain = detail::one_sample(m, payoff, cfg, rng, i);
        if (!cfg.antithetic) return plain;
        Stream mirror(spec, static_cast<std::uint32_t>(i));
        mirror.set_antithetic(true);
        return 0.5 * (plain + detail::one_sample(m, payoff, cfg, mirror, i));
    });
    return summarize(samples, spec);
}

// Cumulated intensity increments Lambda_s - Lambda_start along a scenario path, s = start..T.
inline std::vector<double> cumulated_increments(const Scenario& sc, const affine::IntensitySpec& intensity)
{
    std::vector<double> out(sc.path->size(), 0.0);
    for (std::size_t k = 1; k < out.size(); ++k) out[k] = out[k - 1] + intensity.increment((*sc.path)[k]);
    return out;
}

// Fraction of steps with a negative intensity increment over n simulated paths under P.
inline double intensity_violation_rate(const affine::AffineModel& model, const affine::IntensitySpec& intensity,
                                       std::size_t horizon, std::size_t n, RngSpec spec)
{
    const auto& m = require_sampler(model);
    std::size_t bad = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng(spec, static_cast<std::uint32_t>(i));
        const auto z = sample_path(m, PathLaw::p, m.initial_state(), horizon, rng);
        for (std::size_t k = 1; k < z.size(); ++k, ++total)
            if (intensity.increment(z[k]) < 0.0) ++bad;
    }
    return total == 0 ? 0.0 : static_cast<double>(bad) / static_cast<double>(total);
}

} // namespace qpval::mc
