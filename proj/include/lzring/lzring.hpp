#pragma once

// Umbrella header: population-transfer simulator for N two-level particles
// with first- and second-neighbor Ising couplings on a ring, swept through
// the Landau-Zener crossing.

#include "lzring/cli.hpp"
#include "lzring/config.hpp"
#include "lzring/dynamics.hpp"
#include "lzring/errors.hpp"
#include "lzring/io.hpp"
#include "lzring/model.hpp"
#include "lzring/observables.hpp"
#include "lzring/operators.hpp"
#include "lzring/sweep.hpp"
