// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "stabint/angle_grid.hpp"
#include "stabint/density.hpp"
#include "stabint/error.hpp"
#include "stabint/fejer_riesz.hpp"
#include "stabint/interp_noiseless.hpp"
#include "stabint/interp_noisy.hpp"
#include "stabint/minimax.hpp"
#include "stabint/montecarlo.hpp"
#include "stabint/newton.hpp"
#include "stabint/periodic.hpp"
#include "stabint/problem.hpp"
#include "stabint/spow.hpp"
#include "stabint/trig_polynomial.hpp"
