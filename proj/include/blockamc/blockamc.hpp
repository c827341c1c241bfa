// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header for the BlockAMC simulator: analog in-memory matrix
// computing primitives (MVM/INV crossbar circuits, ideal and resistive
// network models), block divide-and-conquer solvers, cost models and the
// Monte Carlo benchmark harness.
#pragma once

#include "blockamc/analog.hpp"
#include "blockamc/bench.hpp"
#include "blockamc/cost.hpp"
#include "blockamc/emit.hpp"
#include "blockamc/io.hpp"
#include "blockamc/mapping.hpp"
#include "blockamc/matgen.hpp"
#include "blockamc/plot.hpp"
#include "blockamc/random.hpp"
#include "blockamc/serialize.hpp"
#include "blockamc/solver.hpp"
#include "blockamc/types.hpp"

namespace blockamc {
inline constexpr const char* version = "0.1.0";
}
