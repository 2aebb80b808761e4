#pragma once

// Umbrella header for the whole library.

#include "ruvn/classic.hpp"
#include "ruvn/counts.hpp"
#include "ruvn/engine.hpp"
#include "ruvn/errors.hpp"
#include "ruvn/flags.hpp"
#include "ruvn/linalg.hpp"
#include "ruvn/matrix.hpp"
#include "ruvn/metrics.hpp"
#include "ruvn/regen.hpp"
#include "ruvn/rng.hpp"
#include "ruvn/shuffle.hpp"
#include "ruvn/sweep.hpp"
#include "ruvn/testbeds.hpp"
#include "ruvn/transition.hpp"
