#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qpval/core/error.hpp"

namespace qpval::stopping {

// Cumulated intensity Lambda_0..Lambda_T along one path: starts at 0 and never decreases.
class IntensityPath {
public:
    IntensityPath() : cumulative_{0.0} {}

    explicit IntensityPath(std::vector<double> cumulative) : cumulative_(std::move(cumulative))
    {
        if (cumulative_.empty()) throw StructuralError("intensity path needs at least Lambda_0");
        if (cumulative_.front() != 0.0) throw DomainError("intensity path must start at 0");
        for (std::size_t t = 1; t < cumulative_.size(); ++t) {
            if (!std::isfinite(cumulative_[t])) throw DomainError("intensity path is not finite at t=" + std::to_string(t));
            if (cumulative_[t] < cumulative_[t - 1])
                throw DomainError("intensity path decreases at t=" + std::to_string(t));
        }
    }

    // Lambda_t = rate * t.
    static IntensityPath linear(double rate, std::size_t horizon)
    {
        std::vector<double> c(horizon + 1);
        for (std::size_t t = 0; t <= horizon; ++t) c[t] = rate * static_cast<double>(t);
        return IntensityPath(std::move(c));
    }

    static IntensityPath zero(std::size_t horizon) { return IntensityPath(std::vector<double>(horizon + 1, 0.0)); }

    std::size_t horizon() const { return cumulative_.size() - 1; }
    double operator[](std::size_t t) const { return cumulative_[t]; }
    const std::vector<double>& values() const { return cumulative_; }

private:
    std::vector<double> cumulative_;
};

// First t with Lambda_t >= threshold; T when the threshold is never reached.
inline std::size_t sample_time(const IntensityPath& intensity, double threshold)
{
    if (!(threshold > 0.0)) throw DomainError("exponential threshold must be positive");
    for (std::size_t t = 0; t <= intensity.horizon(); ++t)
        if (intensity[t] >= threshold) return t;
    return intensity.horizon();
}

// A doubly stochastic time: a cumulated intensity and the realized exponential threshold.
// Survival past t means the threshold lies above Lambda_t, which also gives survival past T.
struct DoublyStochasticTime {
    IntensityPath intensity;
    double threshold = 1.0;

    std::size_t time() const { return sample_time(intensity, threshold); }
    bool survives(std::size_t t) const { return threshold > intensity[t]; }
};

// Conditional survival probabilities G_t = exp(-Lambda_t).
inline std::vector<double> azema_survival(const IntensityPath& intensity)
{
    std::vector<double> g(intensity.horizon() + 1);
    for (std::size_t t = 0; t < g.size(); ++t) g[t] = std::exp(-intensity[t]);
    return g;
}

} // namespace qpval::stopping
