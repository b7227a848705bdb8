#pragma once

#include "qpval/montecarlo/estimate.hpp"
#include "qpval/montecarlo/nested.hpp"
#include "qpval/montecarlo/paths.hpp"
#include "qpval/montecarlo/rng.hpp"
#include "qpval/montecarlo/products.hpp"
