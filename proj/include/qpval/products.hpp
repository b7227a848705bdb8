#pragma once

#include "qpval/products/longevity.hpp"
#include "qpval/products/pricing.hpp"
#include "qpval/products/risk_margin.hpp"
#include "qpval/products/scheduled.hpp"
#include "qpval/products/specs.hpp"
