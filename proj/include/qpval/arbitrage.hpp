#pragma once

#include "qpval/arbitrage/market.hpp"
#include "qpval/arbitrage/pnl.hpp"
#include "qpval/arbitrage/theorem.hpp"
#include "qpval/arbitrage/construct.hpp"
#include "qpval/arbitrage/slln.hpp"
#include "qpval/arbitrage/io.hpp"
