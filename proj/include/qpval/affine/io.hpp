#pragma once

#include <vector>

#include "qpval/affine/model.hpp"
#include "qpval/core/json.hpp"

namespace qpval::affine {

inline Vec vec_from_json(const Json& j, const std::string& what)
{
    if (!j.is_array()) throw InputError("'" + what + "' must be an array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number_from_json(j[i], what);
    return v;
}

inline Mat mat_from_json(const Json& j, const std::string& what)
{
    if (!j.is_array() || j.empty()) throw InputError("'" + what + "' must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
            throw InputError("'" + what + "' rows must all have " + std::to_string(cols) + " entries");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = number_from_json(j[r][c], what);
    }
    return m;
}

inline Json to_json(const Vec& v)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}


inline StockSpec stock_from_json(const Json& j)
{
    require_known_keys(j, {"a0", "a"}, "stock");
    return {number_from_json(require(j, "a0", "stock"), "a0"), vec_from_json(require(j, "a", "stock"), "a")};
}

inline IntensitySpec intensity_from_json(const Json& j, const Vec& z0, const std::string& where)
{
    require_known_keys(j, {"b0", "b", "c"}, where);
    IntensitySpec s{0.0, vec_from_json(require(j, "b", where), where + ".b"), vec_from_json(require(j, "c", where), where + ".c")};
    if (static_cast<Eigen::Index>(s.private_loading.size() + s.public_loading.size()) != z0.size())
        throw InputError("'" + where + "' loadings do not match the factor dimensions");
    s = s.anchored_at(z0);
    if (j.contains("b0")) {
        const double b0 = number_from_json(j["b0"], where + ".b0");
        if (std::abs(b0 - s.offset) > 1e-12)
            throw InputError("'" + where + ".b0' must equal " + std::to_string(s.offset) + " so that the cumulated intensity starts at 0");
    }
    return s;
}

// {"kind":"gaussian","private_dim":d1,"mu":[...],"mu_q":[...],"theta":[[...]],"sigma":[[...]],"z0":[...]}.
// "mu_q": "martingale" solves the stock's martingale condition for the Q drift.
inline GaussianFactorModel gaussian_from_json(const Json& j, const StockSpec& stock)
{
    require_known_keys(j, {"kind", "private_dim", "mu", "mu_q", "theta", "sigma", "z0"}, "model");
    const auto kind = require(j, "kind", "model").get<std::string>();
    if (kind != "gaussian") throw CapabilityError("model kind '" + kind + "' is not supported (only 'gaussian')");
    const auto dx = require(j, "private_dim", "model").get<std::size_t>();
    Vec mu = vec_from_json(require(j, "mu", "model"), "model.mu");
    Mat theta = mat_from_json(require(j, "theta", "model"), "model.theta");
    Mat sigma = mat_from_json(require(j, "sigma", "model"), "model.sigma");
    Vec z0 = vec_from_json(require(j, "z0", "model"), "model.z0");
    const Json& mq = require(j, "mu_q", "model");
    const auto dy = static_cast<Eigen::Index>(mu.size()) - static_cast<Eigen::Index>(dx);
    if (mq.is_string()) {
        if (mq.get<std::string>() != "martingale") throw InputError("model.mu_q must be an array or \"martingale\"");
        GaussianFactorModel provisional(dx, mu, Vec::Zero(std::max<Eigen::Index>(dy, 0)), theta, sigma, z0);
        return provisional.with_q_drift(martingale_q_drift(provisional, stock));
    }
    return {dx, std::move(mu), vec_from_json(mq, "model.mu_q"), std::move(theta), std::move(sigma), std::move(z0)};
}

// The default two-factor setup: X an AR(1) intensity factor, Y a random walk driving the stock,
// correlated innovations. Surrender and mortality both load on X.
struct GaussianSetup {
    GaussianFactorModel model;
    StockSpec stock;
    IntensitySpec surrender;
    IntensitySpec mortality;
};

inline GaussianSetup default_gaussian_setup()
{
    const double sx = 0.01, sy = 0.05, rho = -0.3;
    Vec mu(2);
    mu << 0.025, 0.005;
    Mat theta(2, 2);
    theta << 0.5, 0.0, 0.0, 1.0;
    Mat sigma(2, 2);
    sigma << sx * sx, rho * sx * sy, rho * sx * sy, sy * sy;
    Vec z0(2);
    z0 << 0.05, 0.0;
    StockSpec stock{0.0, Vec::Constant(1, 1.0)};
    GaussianFactorModel provisional(1, mu, Vec::Zero(1), theta, sigma, z0);
    auto model = provisional.with_q_drift(martingale_q_drift(provisional, stock));
    IntensitySpec surrender = IntensitySpec{0.0, Vec::Constant(1, 1.0), Vec::Zero(1)}.anchored_at(z0);
    IntensitySpec mortality = IntensitySpec{0.0, Vec::Constant(1, 0.2), Vec::Zero(1)}.anchored_at(z0);
    return {std::move(model), stock, surrender, mortality};
}

} // namespace qpval::affine
