#pragma once

// Umbrella header for the skewmc library: nonreversible MCMC kernels built
// from the generalized Metropolis-Hastings rule, invertible deterministic
// transforms, lifted samplers, and the verification toolkit.

#include "skewmc/chain_io.hpp"
#include "skewmc/core.hpp"
#include "skewmc/coupling.hpp"
#include "skewmc/diagnostics.hpp"
#include "skewmc/diffeo.hpp"
#include "skewmc/finite.hpp"
#include "skewmc/gmh.hpp"
#include "skewmc/l2hmc.hpp"
#include "skewmc/leapfrog.hpp"
#include "skewmc/maps.hpp"
#include "skewmc/numcheck.hpp"
#include "skewmc/rng.hpp"
#include "skewmc/samplers.hpp"
#include "skewmc/suites.hpp"
#include "skewmc/targets.hpp"
#include "skewmc/vec.hpp"
