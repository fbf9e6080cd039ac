#pragma once

// Umbrella header: truncated Gauss sums, the two-level-spin pulse
// simulator, and the factor-sweep layer on top of both.

#include "gsum/nmr.hpp"
#include "gsum/sums.hpp"
#include "gsum/sweep.hpp"
#include "gsum/version.hpp"
