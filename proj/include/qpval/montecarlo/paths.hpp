#pragma once

#include <vector>

#include "qpval/affine/model.hpp"
#include "qpval/montecarlo/rng.hpp"

namespace qpval::mc {

using affine::Mat;
using affine::Vec;

enum class PathLaw {
    p,  // real-world law of the full factor vector
    qp, // public factors under Q, private factors drawn from their P-law given the public path
};

inline const char* to_string(PathLaw law) { return law == PathLaw::p ? "P" : "QP"; }

inline const affine::GaussianFactorModel& require_sampler(const affine::AffineModel& model)
{
    const auto* g = dynamic_cast<const affine::GaussianFactorModel*>(&model);
    if (!g) throw CapabilityError("model has no path sampler; only the gaussian factor model can be simulated");
    return *g;
}

inline Vec standard_normals(Stream& rng, Eigen::Index n)
{
    Vec e(n);
    for (Eigen::Index i = 0; i < n; ++i) e[i] = rng.normal();
    return e;
}

// One step of the real-world dynamics.
inline Vec step_p(const affine::GaussianFactorModel& m, const Vec& z, Stream& rng)
{
    return m.drift() + m.transition() * z + m.noise_factor() * standard_normals(rng, static_cast<Eigen::Index>(m.dim()));
}

// Public factors one step under Q.
inline Vec step_public_q(const affine::GaussianFactorModel& m, const Vec& y, Stream& rng)
{
    const auto dy = static_cast<Eigen::Index>(m.public_dim());
    return m.q_drift() + m.public_transition() * y + m.public_factor() * standard_normals(rng, dy);
}

// Private factors at s given Z_{s-1} and Y_s, from the exact Gaussian conditional under P.
inline Vec step_private_given_public(const affine::GaussianFactorModel& m, const Vec& z_prev, const Vec& y_next, Stream& rng)
{
    const auto dx = static_cast<Eigen::Index>(m.private_dim());
    const auto dy = static_cast<Eigen::Index>(m.public_dim());
    if (dx == 0) return Vec(0);
    const Vec public_noise = y_next - m.p_public_drift() - m.public_transition() * z_prev.tail(dy);
    const Vec mean = m.drift().head(dx) + m.transition().topRows(dx) * z_prev + m.gain() * public_noise;
    return mean + m.residual_factor() * standard_normals(rng, dx);
}

// A path of public factors under Q from y_start over `steps` periods (entry 0 is y_start).
inline std::vector<Vec> public_path_q(const affine::GaussianFactorModel& m, const Vec& y_start, std::size_t steps, Stream& rng)
{
    std::vector<Vec> y(steps + 1);
    y[0] = y_start;
    for (std::size_t k = 1; k <= steps; ++k) y[k] = step_public_q(m, y[k - 1], rng);
    return y;
}

// Completes a public path with private factors drawn under P.
inline std::vector<Vec> fill_private(const affine::GaussianFactorModel& m, const Vec& z_start, const std::vector<Vec>& y, Stream& rng)
{
    const auto dx = static_cast<Eigen::Index>(m.private_dim());
    const auto dy = static_cast<Eigen::Index>(m.public_dim());
    std::vector<Vec> z(y.size());
    z[0] = z_start;
    for (std::size_t k = 1; k < y.size(); ++k) {
        z[k].resize(dx + dy);
        z[k].head(dx) = step_private_given_public(m, z[k - 1], y[k], rng);
        z[k].tail(dy) = y[k];
    }
    return z;
}

inline std::vector<Vec> sample_path(const affine::GaussianFactorModel& m, PathLaw law, const Vec& z_start, std::size_t steps, Stream& rng)
{
    if (law == PathLaw::p) {
        std::vector<Vec> z(steps + 1);
        z[0] = z_start;
        for (std::size_t k = 1; k <= steps; ++k) z[k] = step_p(m, z[k - 1], rng);
        return z;
    }
    const auto dy = static_cast<Eigen::Index>(m.public_dim());
    return fill_private(m, z_start, public_path_q(m, z_start.tail(dy), steps, rng), rng);
}

// n paths of the factor vector over times start..horizon.
struct PathBatch {
    PathLaw law = PathLaw::qp;
    std::size_t start = 0;
    std::size_t horizon = 0;
    std::size_t dim = 0;
    std::vector<std::vector<Vec>> paths; // [path][s - start]

    std::size_t size() const { return paths.size(); }
    const Vec& state(std::size_t path, std::size_t s) const { return paths.at(path).at(s - start); }
};

inline PathBatch simulate_paths(const affine::AffineModel& model, PathLaw law, std::size_t n, std::size_t start,
                                std::size_t horizon, const Vec& z_start, RngSpec spec)
{
    const auto& m = require_sampler(model);
    if (horizon < start) throw DomainError("simulation horizon before its start");
    if (z_start.size() != static_cast<Eigen::Index>(m.dim())) throw StructuralError("start state has wrong dimension");
    PathBatch batch{law, start, horizon, m.dim(), {}};
    batch.paths.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng(spec, static_cast<std::uint32_t>(i));
        batch.paths.push_back(sample_path(m, law, z_start, horizon - start, rng));
    }
    return batch;
}

// Log of dQ/dP on the public path: the ratio of the public transition densities.
inline double public_log_density_ratio(const affine::GaussianFactorModel& m, const std::vector<Vec>& z)
{
    const auto dy = static_cast<Eigen::Index>(m.public_dim());
    Eigen::LLT<Mat> llt(m.public_cov());
    if (llt.info() != Eigen::Success) throw DomainError("density weighting needs a positive definite public covariance");
    const Mat prec = llt.solve(Mat::Identity(m.public_cov().rows(), m.public_cov().cols()));
    const Vec gap = m.q_drift() - m.p_public_drift();
    double lr = 0.0;
    for (std::size_t k = 1; k < z.size(); ++k) {
        const Vec eps = z[k].tail(dy) - m.p_public_drift() - m.public_transition() * z[k - 1].tail(dy);
        lr += gap.dot(prec * eps) - 0.5 * gap.dot(prec * gap);
    }
    return lr;
}

} // namespace qpval::mc
