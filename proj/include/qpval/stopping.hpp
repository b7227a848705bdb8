#pragma once

#include "qpval/stopping/copula.hpp"
#include "qpval/stopping/intensity.hpp"
#include "qpval/stopping/joint.hpp"
