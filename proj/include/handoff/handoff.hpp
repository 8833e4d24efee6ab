#pragma once

#include "handoff/channel.hpp"
#include "handoff/config.hpp"
#include "handoff/csv.hpp"
#include "handoff/decision.hpp"
#include "handoff/error.hpp"
#include "handoff/estimator.hpp"
#include "handoff/neuralnet.hpp"
#include "handoff/rng.hpp"
#include "handoff/simulator.hpp"
