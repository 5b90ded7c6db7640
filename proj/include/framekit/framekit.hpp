#pragma once

// Umbrella header for the frame-erasure toolkit.

#include "framekit/bridging.hpp"
#include "framekit/dilation.hpp"
#include "framekit/duals.hpp"
#include "framekit/frame.hpp"
#include "framekit/io.hpp"
#include "framekit/linalg.hpp"
#include "framekit/mrc.hpp"
#include "framekit/rng.hpp"
#include "framekit/robustness.hpp"
#include "framekit/tolerance.hpp"
#include "framekit/verify.hpp"
