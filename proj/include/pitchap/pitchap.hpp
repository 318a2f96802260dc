#pragma once

#include "pitchap/aero_sizing.hpp"
#include "pitchap/blocks.hpp"
#include "pitchap/config.hpp"
#include "pitchap/dynamics.hpp"
#include "pitchap/errors.hpp"
#include "pitchap/loop_fields.hpp"
#include "pitchap/metrics.hpp"
#include "pitchap/sim_engine.hpp"
#include "pitchap/trace_io.hpp"
#include "pitchap/tuner.hpp"
