// geodiscord.hpp
// Umbrella header.

#pragma once

#include "channels.hpp"
#include "core_state.hpp"
#include "dynamics.hpp"
#include "io.hpp"
#include "lambda.hpp"
#include "measures.hpp"
#include "reference_states.hpp"
#include "sphere_search.hpp"
#include "xstate_analytic.hpp"
