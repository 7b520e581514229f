// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "negabeta/algebraic.hpp"
#include "negabeta/context.hpp"
#include "negabeta/diagnostics.hpp"
#include "negabeta/digits.hpp"
#include "negabeta/errors.hpp"
#include "negabeta/fixed_point.hpp"
#include "negabeta/index_ext.hpp"
#include "negabeta/interval.hpp"
#include "negabeta/io.hpp"
#include "negabeta/pointset.hpp"
#include "negabeta/polynomial.hpp"
#include "negabeta/rational.hpp"
#include "negabeta/solver.hpp"
#include "negabeta/words.hpp"
