// Umbrella header.

#pragma once

#include "binexp/dimension.hpp"
#include "binexp/estimator.hpp"
#include "binexp/exact_real.hpp"
#include "binexp/expansion.hpp"
#include "binexp/io.hpp"
#include "binexp/measure.hpp"
#include "binexp/report.hpp"
#include "binexp/rng.hpp"
#include "binexp/sampler.hpp"
#include "binexp/schedule.hpp"
