#pragma once

#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "qpval/core/error.hpp"
#include "qpval/core/json.hpp"
#include "qpval/montecarlo/rng.hpp"

namespace qpval::mc {

struct QPEstimate {
    double mean = 0.0;
    double stderr = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

inline Json to_json(const QPEstimate& e)
{
    return Json{{"mean", e.mean}, {"stderr", e.stderr}, {"n", e.n}, {"seed", e.seed}, {"stream", e.stream}};
}

// Pairwise (cascade) summation over a fixed tree: the result depends only on the values and
// their order, never on how they were produced.
inline double pairwise_sum(const double* x, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

inline QPEstimate summarize(const std::vector<double>& samples, RngSpec spec)
{
    const std::size_t n = samples.size();
    if (n < 2) throw DomainError("an estimate needs at least two samples");
    const double mean = pairwise_sum(samples) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (samples[i] - mean) * (samples[i] - mean);
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n, spec.seed, spec.stream};
}

// Fills out[i] = fn(i) for i < n. Each index owns its random substream, so the values (and the
// pairwise sums over them) do not depend on the number of workers.
inline void parallel_fill(std::vector<double>& out, std::size_t n, unsigned workers, const std::function<double(std::size_t)>& fn)
{
    out.assign(n, 0.0);
    if (workers <= 1 || n < 1024) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace qpval::mc
