#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qpval/affine/pricing.hpp"
#include "qpval/stopping/copula.hpp"

namespace qpval::products {

using affine::IntensitySpec;
using affine::StockSpec;
using affine::SurvivalMode;
using affine::TwoTimeMode;

// S_T 1{tau > T} (strict) or S_T 1{tau > T-1} (lagged), valued at t given survival to t.
struct SurvivalClaimSpec {
    StockSpec stock;
    IntensitySpec intensity;
    std::size_t t = 0;
    std::size_t horizon = 1;
    SurvivalMode mode = SurvivalMode::strict;
};

// Normalised two-time block exp(L1_t + L2_t) E[S_T exp(-L1_T - L2_s)] (primed: L1_s, L2_T).
struct TwoTimeBlockSpec {
    StockSpec stock;
    IntensitySpec first;
    IntensitySpec second;
    std::size_t t = 0;
    std::size_t split = 0; // s
    std::size_t horizon = 1;
    TwoTimeMode mode = TwoTimeMode::unprimed;
};

// Pays S_tau if the surrender time falls strictly between t and T.
struct SurrenderOptionSpec {
    StockSpec stock;
    IntensitySpec surrender;
    std::size_t t = 0;
    std::size_t horizon = 1;
};

// Pays S_sigma at surrender sigma when t < sigma < T and the insured is alive at sigma (sigma <= tau).
struct VASurrenderSpec {
    StockSpec stock;
    IntensitySpec surrender;
    IntensitySpec mortality;
    stopping::Copula2 copula;
    std::size_t t = 0;
    std::size_t horizon = 1;
};

// Premiums amounts[i] due at times[i]; A(t) is the total due up to and including t.
class PaymentSchedule {
public:
    PaymentSchedule() = default;
    PaymentSchedule(std::vector<double> times, std::vector<double> amounts) : times_(std::move(times)), amounts_(std::move(amounts))
    {
        if (times_.size() != amounts_.size()) throw StructuralError("payment schedule needs one amount per time");
        for (std::size_t i = 0; i < times_.size(); ++i) {
            if (amounts_[i] < 0.0) throw DomainError("premium amounts must be non-negative");
            if (i > 0 && times_[i] < times_[i - 1]) throw DomainError("payment times must be sorted");
        }
    }

    double cumulative(double t) const
    {
        double a = 0.0;
        for (std::size_t i = 0; i < times_.size(); ++i)
            if (times_[i] <= t) a += amounts_[i];
        return a;
    }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& amounts() const { return amounts_; }

private:
    std::vector<double> times_;
    std::vector<double> amounts_;
};

// Survival benefit financed by scheduled premiums that stop at the termination time.
struct ScheduledContract {
    SurvivalClaimSpec benefit;
    PaymentSchedule schedule;
};

using ProductSpec = std::variant<SurvivalClaimSpec, TwoTimeBlockSpec, SurrenderOptionSpec, VASurrenderSpec, ScheduledContract>;

inline std::string product_name(const ProductSpec& p)
{
    switch (p.index()) {
    case 0: return "survival";
    case 1: return "two_time_block";
    case 2: return "surrender_option";
    case 3: return "va_surrender";
    default: return "scheduled";
    }
}

} // namespace qpval::products
