#pragma once

#include <cmath>
#include <string>

#include "qpval/core/error.hpp"

namespace qpval::stopping {

enum class CopulaKind { independence, clayton, frank };

inline std::string to_string(CopulaKind k)
{
    switch (k) {
    case CopulaKind::independence: return "independence";
    case CopulaKind::clayton: return "clayton";
    case CopulaKind::frank: return "frank";
    }
    return "?";
}

inline CopulaKind copula_kind_from_string(const std::string& s)
{
    if (s == "independence") return CopulaKind::independence;
    if (s == "clayton") return CopulaKind::clayton;
    if (s == "frank") return CopulaKind::frank;
    throw InputError("unknown copula kind '" + s + "'");
}

// Bivariate copula C(u, v) on [0,1]^2.
class Copula2 {
public:
    Copula2() = default;

    Copula2(CopulaKind kind, double theta) : kind_(kind), theta_(theta)
    {
        if (kind == CopulaKind::clayton && !(theta > 0.0)) throw DomainError("clayton copula needs theta > 0");
        if (kind == CopulaKind::frank && (theta == 0.0 || !std::isfinite(theta))) throw DomainError("frank copula needs theta != 0");
    }

    static Copula2 independence() { return {}; }
    static Copula2 clayton(double theta) { return {CopulaKind::clayton, theta}; }
    static Copula2 frank(double theta) { return {CopulaKind::frank, theta}; }

    CopulaKind kind() const { return kind_; }
    double theta() const { return theta_; }

    double operator()(double u, double v) const
    {
        check(u, v);
        if (u == 0.0 || v == 0.0) return 0.0;
        switch (kind_) {
        case CopulaKind::independence: return u * v;
        case CopulaKind::clayton: {
            // (u^-th + v^-th - 1)^(-1/th), written with expm1/log1p so small theta stays accurate.
            const double s = std::expm1(-theta_ * std::log(u)) + std::expm1(-theta_ * std::log(v));
            return std::exp(-std::log1p(s) / theta_);
        }
        case CopulaKind::frank: {
            const double num = std::expm1(-theta_ * u) * std::expm1(-theta_ * v);
            return -std::log1p(num / std::expm1(-theta_)) / theta_;
        }
        }
        return 0.0;
    }

    // dC/du (u, v): the conditional distribution function of V given U = u.
    double conditional(double u, double v) const
    {
        check(u, v);
        if (v == 0.0) return 0.0;
        if (v == 1.0) return 1.0;
        switch (kind_) {
        case CopulaKind::independence: return v;
        case CopulaKind::clayton: {
            if (u == 0.0) return 1.0;
            const double s = std::expm1(-theta_ * std::log(u)) + std::expm1(-theta_ * std::log(v));
            return std::exp((-theta_ - 1.0) * std::log(u) + (-1.0 / theta_ - 1.0) * std::log1p(s));
        }
        case CopulaKind::frank: {
            const double a = std::expm1(-theta_ * u), b = std::expm1(-theta_ * v);
            return std::exp(-theta_ * u) * b / (std::expm1(-theta_) + a * b);
        }
        }
        return 0.0;
    }

    // V with C(., .) joint law given U = u, from a uniform w: inverts the conditional distribution
    // function by bisection.
    double conditional_inverse(double u, double w) const
    {
        if (kind_ == CopulaKind::independence) return w;
        double lo = 0.0, hi = 1.0;
        while (hi - lo > 1e-13) {
            const double mid = 0.5 * (lo + hi);
            if (conditional(u, mid) < w) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }

private:
    static void check(double u, double v)
    {
        if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
            throw DomainError("copula argument outside [0,1]^2: (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }

    CopulaKind kind_ = CopulaKind::independence;
    double theta_ = 0.0;
};

} // namespace qpval::stopping
