#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>

#include "qpval/core/error.hpp"

namespace qpval::affine {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// log E[exp(w . next) | state] = constant + loading . state
struct AffineExponent {
    double constant = 0.0;
    Vec loading;
};

// log E_P[exp(u . X_t) | Y_t, Z_{t-1}]
//   = constant + private_loading . X_{t-1} + public_loading . Y_t + lagged_public_loading . Y_{t-1}
struct SplitExponent {
    double constant = 0.0;
    Vec private_loading;
    Vec public_loading;
    Vec lagged_public_loading;
};

// Factor process Z = (X, Y): X is seen only by the insurer, Y drives the traded assets.
// Y is affine on its own under the pricing measure Q; X given Y is affine under P.
class AffineModel {
public:
    virtual ~AffineModel() = default;

    virtual std::size_t private_dim() const = 0;
    virtual std::size_t public_dim() const = 0;
    std::size_t dim() const { return private_dim() + public_dim(); }
    virtual const Vec& initial_state() const = 0;

    // One-step transform of Z under P.
    virtual AffineExponent p_transform(const Vec& w) const = 0;
    // One-step transform of Y under Q; the loading acts on Y.
    virtual AffineExponent q_transform(const Vec& v) const = 0;
    virtual SplitExponent conditional_split(const Vec& u) const = 0;

    // One-step transform of Z under the composed law (Y under Q, X | Y under P), when the model
    // knows it in closed form. Used to cross-check recursion tables.
    virtual std::optional<AffineExponent> qp_transform(const Vec&) const { return std::nullopt; }
};

// Gaussian VAR(1): Z_{t+1} = drift + transition Z_t + eps, eps ~ N(0, covariance). Under Q only the
// Y drift changes. Y must not load on X (transition's Y-X block is zero) so that Y is Markov in
// the public filtration.
class GaussianFactorModel final : public AffineModel {
public:
    GaussianFactorModel(std::size_t private_dim, Vec drift, Vec q_drift, Mat transition, Mat covariance, Vec initial)
        : dx_(private_dim), drift_(std::move(drift)), q_drift_(std::move(q_drift)), transition_(std::move(transition)),
          covariance_(std::move(covariance)), initial_(std::move(initial))
    {
        const auto d = drift_.size();
        if (static_cast<std::size_t>(d) <= dx_)
            throw StructuralError("gaussian model needs at least one public factor");
        dy_ = static_cast<std::size_t>(d) - dx_;
        if (q_drift_.size() != static_cast<Eigen::Index>(dy_)) throw StructuralError("q drift must have the public dimension");
        if (transition_.rows() != d || transition_.cols() != d) throw StructuralError("transition matrix has wrong shape");
        if (covariance_.rows() != d || covariance_.cols() != d) throw StructuralError("covariance matrix has wrong shape");
        if (initial_.size() != d) throw StructuralError("initial state has wrong dimension");
        if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw DomainError("covariance matrix is not symmetric");
        Eigen::SelfAdjointEigenSolver<Mat> eig(covariance_);
        if (eig.eigenvalues().minCoeff() < -1e-12) throw DomainError("covariance matrix is not positive semidefinite");
        if (dx_ > 0 && transition_.block(dx_, 0, dy_, dx_).cwiseAbs().maxCoeff() > 0.0)
            throw DomainError("public factors must not load on private factors in the transition matrix");

        // A singular public block is allowed (degenerate noise); the regression then uses the
        // pseudo-inverse and the Q drift may only move Y within the noise range.
        const Mat syy = public_cov();
        const Mat syy_pinv = Eigen::CompleteOrthogonalDecomposition<Mat>(syy).pseudoInverse();
        const Vec gap = q_drift_ - drift_.tail(dy_);
        if ((gap - syy * (syy_pinv * gap)).cwiseAbs().maxCoeff() > 1e-12)
            throw DomainError("q drift moves the public factors along a direction without noise");
        gain_ = covariance_.block(0, dx_, dx_, dy_) * syy_pinv; // Sigma_XY Sigma_YY^+
        residual_cov_ = covariance_.topLeftCorner(dx_, dx_) - gain_ * covariance_.block(dx_, 0, dy_, dx_);
        lag_gain_ = transition_.block(0, dx_, dx_, dy_) - gain_ * transition_.bottomRightCorner(dy_, dy_);
        noise_factor_ = factor_psd(covariance_);
        residual_factor_ = factor_psd(residual_cov_);
        public_factor_ = factor_psd(syy);
    }

    std::size_t private_dim() const override { return dx_; }
    std::size_t public_dim() const override { return dy_; }
    const Vec& initial_state() const override { return initial_; }

    const Vec& drift() const { return drift_; }
    const Vec& q_drift() const { return q_drift_; }
    const Mat& transition() const { return transition_; }
    const Mat& covariance() const { return covariance_; }
    Vec p_public_drift() const { return drift_.tail(dy_); }
    Mat public_transition() const { return transition_.bottomRightCorner(dy_, dy_); }
    Mat public_cov() const { return covariance_.bottomRightCorner(dy_, dy_); }
    // Regression of private noise on public noise, and the residual covariance.
    const Mat& gain() const { return gain_; }
    const Mat& residual_cov() const { return residual_cov_; }
    // Square-root factors for sampling.
    const Mat& noise_factor() const { return noise_factor_; }
    const Mat& residual_factor() const { return residual_factor_; }
    const Mat& public_factor() const { return public_factor_; }

    GaussianFactorModel with_q_drift(Vec q_drift) const
    {
        return {dx_, drift_, std::move(q_drift), transition_, covariance_, initial_};
    }
    GaussianFactorModel with_initial(Vec z) const { return {dx_, drift_, q_drift_, transition_, covariance_, std::move(z)}; }

    AffineExponent p_transform(const Vec& w) const override
    {
        check_dim(w, dim(), "P transform");
        return {w.dot(drift_) + 0.5 * w.dot(covariance_ * w), transition_.transpose() * w};
    }

    AffineExponent q_transform(const Vec& v) const override
    {
        check_dim(v, dy_, "Q transform");
        return {v.dot(q_drift_) + 0.5 * v.dot(public_cov() * v), public_transition().transpose() * v};
    }

    SplitExponent conditional_split(const Vec& u) const override
    {
        check_dim(u, dx_, "conditional split");
        SplitExponent s;
        s.constant = u.dot(drift_.head(dx_) - gain_ * drift_.tail(dy_)) + 0.5 * u.dot(residual_cov_ * u);
        s.private_loading = transition_.topLeftCorner(dx_, dx_).transpose() * u;
        s.public_loading = gain_.transpose() * u;
        s.lagged_public_loading = lag_gain_.transpose() * u;
        return s;
    }

    // Under the composed law the covariance is unchanged and the intercept moves by the Q-P drift
    // gap on Y, carried into X through the regression gain.
    std::optional<AffineExponent> qp_transform(const Vec& w) const override
    {
        check_dim(w, dim(), "QP transform");
        Vec shift(dim());
        const Vec gap = q_drift_ - drift_.tail(dy_);
        shift.head(dx_) = gain_ * gap;
        shift.tail(dy_) = gap;
        return AffineExponent{w.dot(drift_ + shift) + 0.5 * w.dot(covariance_ * w), transition_.transpose() * w};
    }

private:
    static void check_dim(const Vec& v, std::size_t n, const char* what)
    {
        if (v.size() != static_cast<Eigen::Index>(n))
            throw StructuralError(std::string(what) + " argument has dimension " + std::to_string(v.size()) + ", expected " +
                                  std::to_string(n));
    }

    // L with L L^T = m for a positive semidefinite m.
    static Mat factor_psd(const Mat& m)
    {
        if (m.size() == 0) return m;
        Eigen::SelfAdjointEigenSolver<Mat> eig(m);
        const Vec root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return eig.eigenvectors() * root.asDiagonal();
    }

    std::size_t dx_ = 0, dy_ = 0;
    Vec drift_, q_drift_;
    Mat transition_, covariance_;
    Vec initial_;
    Mat gain_, residual_cov_, lag_gain_;
    Mat noise_factor_, residual_factor_, public_factor_;
};

// Discounted stock S_t = exp(drift * t + loading . Y_t).
struct StockSpec {
    double drift = 0.0;
    Vec loading;

    double price(std::size_t t, const Vec& y) const { return std::exp(drift * static_cast<double>(t) + loading.dot(y)); }
};

// Cumulated intensity Lambda_t = offset + sum_{s<=t} (private_loading . X_s + public_loading . Y_s).
struct IntensitySpec {
    double offset = 0.0;
    Vec private_loading;
    Vec public_loading;

    double increment(const Vec& z) const
    {
        const auto dx = private_loading.size();
        return private_loading.dot(z.head(dx)) + public_loading.dot(z.tail(public_loading.size()));
    }
    bool is_zero() const
    {
        return private_loading.cwiseAbs().sum() == 0.0 && public_loading.cwiseAbs().sum() == 0.0;
    }
    // Offset that makes Lambda_0 = 0 from the given initial state.
    IntensitySpec anchored_at(const Vec& z0) const
    {
        IntensitySpec s = *this;
        s.offset = -increment(z0);
        return s;
    }
    static IntensitySpec zero(std::size_t dx, std::size_t dy) { return {0.0, Vec::Zero(dx), Vec::Zero(dy)}; }
};

struct MartingaleReport {
    bool pass = false;
    double constant_residual = 0.0; // A_Q(a) + a0
    double loading_residual = 0.0;  // max |B_Q(a) - a|
};

// The discounted stock is a Q-martingale iff A_Q(a) = -a0 and B_Q(a) = a.
inline MartingaleReport validate_martingale(const AffineModel& model, const StockSpec& stock, double tol = 1e-12)
{
    const auto e = model.q_transform(stock.loading);
    MartingaleReport r;
    r.constant_residual = e.constant + stock.drift;
    r.loading_residual = (e.loading - stock.loading).cwiseAbs().maxCoeff();
    r.pass = std::abs(r.constant_residual) <= tol && r.loading_residual <= tol;
    return r;
}

// Q drift along the stock loading that makes A_Q(a) = -a0 (minimum-norm solution).
inline Vec martingale_q_drift(const GaussianFactorModel& model, const StockSpec& stock)
{
    const Vec& a = stock.loading;
    const double aa = a.squaredNorm();
    if (aa == 0.0) throw DomainError("stock loading is zero; no drift solves the martingale condition");
    const double target = -(stock.drift + 0.5 * a.dot(model.public_cov() * a));
    return a * (target / aa);
}

} // namespace qpval::affine
