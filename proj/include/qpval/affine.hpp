#pragma once

#include "qpval/affine/model.hpp"
#include "qpval/affine/pricing.hpp"
#include "qpval/affine/recursion.hpp"
#include "qpval/affine/io.hpp"
