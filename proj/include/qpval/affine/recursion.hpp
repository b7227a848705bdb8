#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qpval/affine/model.hpp"

namespace qpval::affine {

// Exponent weights on (X_s, Y_s) for s = start+1..horizon.
struct KappaStep {
    Vec private_weight;
    Vec public_weight;
};

struct KappaSchedule {
    std::size_t start = 0;
    std::vector<KappaStep> steps; // steps[k] belongs to time start + 1 + k

    std::size_t horizon() const { return start + steps.size(); }
    const KappaStep& at(std::size_t s) const { return steps.at(s - start - 1); }
    KappaStep& at(std::size_t s) { return steps.at(s - start - 1); }
};

// Backward coefficients such that
//   E_QP[ exp(sum_{i=s}^{T} kappa_i . Z_i) | Z_{s-1} ] = exp(sum_{i=s}^{T} constant(i) + loading(s) . Z_{s-1}).
struct RecursionTable {
    std::size_t start = 0;
    std::size_t horizon = 0;
    std::vector<double> constant;     // [s - start - 1]
    std::vector<Vec> private_loading; // [s - start - 1]
    std::vector<Vec> public_loading;  // [s - start - 1]

    double constant_at(std::size_t s) const { return constant.at(s - start - 1); }
    // sum_{s=t+1}^{T} constant(s)
    double cumulative(std::size_t t) const
    {
        double c = 0.0;
        for (std::size_t s = t + 1; s <= horizon; ++s) c += constant_at(s);
        return c;
    }
    // loading(s) . z for z = (x, y)
    double loading_dot(std::size_t s, const Vec& z) const
    {
        const auto& px = private_loading.at(s - start - 1);
        const auto& py = public_loading.at(s - start - 1);
        return px.dot(z.head(px.size())) + py.dot(z.tail(py.size()));
    }
};

namespace detail {

inline void require_finite(double v, std::size_t s, const char* what)
{
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " is not finite at step s=" + std::to_string(s));
}

inline void require_finite(const Vec& v, std::size_t s, const char* what)
{
    if (!v.allFinite()) throw DomainError(std::string(what) + " is not finite at step s=" + std::to_string(s));
}

struct StepResult {
    double constant;
    Vec private_loading;
    Vec public_loading;
};

inline StepResult one_step(const AffineModel& model, const Vec& u, const Vec& v, std::size_t s)
{
    require_finite(u, s, "private exponent");
    require_finite(v, s, "public exponent");
    const auto split = model.conditional_split(u);
    const Vec public_arg = v + split.public_loading;
    const auto q = model.q_transform(public_arg);
    StepResult r{split.constant + q.constant, split.private_loading, q.loading + split.lagged_public_loading};
    require_finite(r.constant, s, "recursion constant");
    require_finite(r.private_loading, s, "private loading");
    require_finite(r.public_loading, s, "public loading");
    return r;
}

} // namespace detail

inline RecursionTable run_recursion(const AffineModel& model, const KappaSchedule& schedule)
{
    if (schedule.steps.empty()) throw DomainError("kappa schedule needs at least one step");
    RecursionTable table;
    table.start = schedule.start;
    table.horizon = schedule.horizon();
    const std::size_t n = schedule.steps.size();
    table.constant.resize(n);
    table.private_loading.resize(n);
    table.public_loading.resize(n);
    Vec carry_x = Vec::Zero(static_cast<Eigen::Index>(model.private_dim()));
    Vec carry_y = Vec::Zero(static_cast<Eigen::Index>(model.public_dim()));
    for (std::size_t s = table.horizon; s > table.start; --s) {
        const auto& k = schedule.at(s);
        if (k.private_weight.size() != carry_x.size() || k.public_weight.size() != carry_y.size())
            throw StructuralError("kappa step at s=" + std::to_string(s) + " has wrong dimensions");
        const auto r = detail::one_step(model, carry_x + k.private_weight, carry_y + k.public_weight, s);
        const auto idx = s - table.start - 1;
        table.constant[idx] = r.constant;
        table.private_loading[idx] = r.private_loading;
        table.public_loading[idx] = r.public_loading;
        carry_x = r.private_loading;
        carry_y = r.public_loading;
    }
    return table;
}

struct VerifierReport {
    double max_residual = 0.0;     // recursion relations re-evaluated step by step
    double max_qp_residual = 0.0;  // against the model's joint composed transform, when available
    bool joint_checked = false;
};

// Re-checks every stored step: the block relations, and (if the model exposes it) the one-step
// composed-law transform of the full factor vector.
inline VerifierReport verify_recursion(const AffineModel& model, const KappaSchedule& schedule, const RecursionTable& table)
{
    VerifierReport rep;
    const auto dx = static_cast<Eigen::Index>(model.private_dim());
    const auto dy = static_cast<Eigen::Index>(model.public_dim());
    auto scaled = [](double diff, double ref) { return std::abs(diff) / std::max(1.0, std::abs(ref)); };
    for (std::size_t s = table.horizon; s > table.start; --s) {
        const auto idx = s - table.start - 1;
        Vec u = schedule.at(s).private_weight, v = schedule.at(s).public_weight;
        if (s < table.horizon) {
            u += table.private_loading[idx + 1];
            v += table.public_loading[idx + 1];
        }
        const auto split = model.conditional_split(u);
        const auto q = model.q_transform(v + split.public_loading);
        rep.max_residual = std::max(rep.max_residual, scaled(table.constant[idx] - split.constant - q.constant, table.constant[idx]));
        for (Eigen::Index i = 0; i < dx; ++i)
            rep.max_residual = std::max(rep.max_residual, scaled(table.private_loading[idx][i] - split.private_loading[i],
                                                                 table.private_loading[idx][i]));
        for (Eigen::Index i = 0; i < dy; ++i)
            rep.max_residual =
                std::max(rep.max_residual, scaled(table.public_loading[idx][i] - q.loading[i] - split.lagged_public_loading[i],
                                                  table.public_loading[idx][i]));

        Vec w(dx + dy);
        w << u, v;
        if (auto joint = model.qp_transform(w)) {
            rep.joint_checked = true;
            rep.max_qp_residual = std::max(rep.max_qp_residual, scaled(table.constant[idx] - joint->constant, table.constant[idx]));
            for (Eigen::Index i = 0; i < dx; ++i)
                rep.max_qp_residual = std::max(rep.max_qp_residual,
                                               scaled(table.private_loading[idx][i] - joint->loading[i], joint->loading[i]));
            for (Eigen::Index i = 0; i < dy; ++i)
                rep.max_qp_residual = std::max(rep.max_qp_residual,
                                               scaled(table.public_loading[idx][i] - joint->loading[dx + i], joint->loading[dx + i]));
        }
    }
    return rep;
}

} // namespace qpval::affine
