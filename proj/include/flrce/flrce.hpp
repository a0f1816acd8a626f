#pragma once

// Umbrella header for the flrce simulator library.

#include "flrce/accounting.hpp"
#include "flrce/config.hpp"
#include "flrce/data.hpp"
#include "flrce/earlystop.hpp"
#include "flrce/errors.hpp"
#include "flrce/geometry.hpp"
#include "flrce/model.hpp"
#include "flrce/orchestrator.hpp"
#include "flrce/param_vector.hpp"
#include "flrce/relationship.hpp"
#include "flrce/results.hpp"
#include "flrce/rng.hpp"
#include "flrce/runner.hpp"
#include "flrce/selection.hpp"
