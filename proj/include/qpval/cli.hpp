#pragma once

#include "qpval/cli/commands.hpp"
#include "qpval/cli/config.hpp"
#include "qpval/cli/reference.hpp"
#include "qpval/cli/validate.hpp"
