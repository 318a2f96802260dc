#pragma once

// Discrete-time loop blocks advanced at a fixed step.

#include "pitchap/actuator.hpp"
#include "pitchap/kalman.hpp"
#include "pitchap/lead_compensator.hpp"
#include "pitchap/noise.hpp"
#include "pitchap/pid.hpp"
