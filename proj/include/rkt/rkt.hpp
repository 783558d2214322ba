#pragma once

// Umbrella header for the random-kernel time-series toolkit.

#include "rkt/digest.hpp"
#include "rkt/errors.hpp"
#include "rkt/feature_space.hpp"
#include "rkt/kernels.hpp"
#include "rkt/matrix.hpp"
#include "rkt/rng.hpp"
#include "rkt/robustness.hpp"
#include "rkt/sensing.hpp"
#include "rkt/series.hpp"
#include "rkt/sparsity.hpp"
#include "rkt/threading.hpp"
#include "rkt/version.hpp"
