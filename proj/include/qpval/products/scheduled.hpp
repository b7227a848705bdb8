#pragma once

#include <algorithm>

#include "qpval/products/specs.hpp"

namespace qpval::products {

// Benefits after folding the option to stop paying into the benefit side:
// X + A(T) - A(min(tau, T)).
struct ModifiedBenefits {
    PaymentSchedule schedule;
    double horizon = 0.0;

    double refund(double termination) const
    {
        return schedule.cumulative(horizon) - schedule.cumulative(std::min(termination, horizon));
    }
    double operator()(double benefit, double termination) const { return benefit + refund(termination); }
};

struct SinglePremiumForm {
    double premium = 0.0; // A(T)
    ModifiedBenefits benefits;
};

inline SinglePremiumForm scheduled_to_single(const PaymentSchedule& schedule, double horizon)
{
    return {schedule.cumulative(horizon), {schedule, horizon}};
}

inline SinglePremiumForm scheduled_to_single(const ScheduledContract& c)
{
    return scheduled_to_single(c.schedule, static_cast<double>(c.benefit.horizon));
}

} // namespace qpval::products
