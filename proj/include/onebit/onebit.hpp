#pragma once

#include "onebit/analytic.hpp"
#include "onebit/detector.hpp"
#include "onebit/errors.hpp"
#include "onebit/model.hpp"
#include "onebit/montecarlo.hpp"
#include "onebit/random.hpp"
#include "onebit/roc.hpp"
#include "onebit/signal.hpp"
