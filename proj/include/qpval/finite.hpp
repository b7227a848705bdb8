#pragma once

#include "qpval/finite/space.hpp"
#include "qpval/finite/linalg.hpp"
#include "qpval/finite/expectation.hpp"
#include "qpval/finite/martingale.hpp"
#include "qpval/finite/superhedge.hpp"
#include "qpval/finite/io.hpp"
#include "qpval/finite/three_state.hpp"
