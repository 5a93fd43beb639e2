#pragma once

// Umbrella header for the dlcost library.

#include "dlcost/core_model.hpp"
#include "dlcost/cost_engine.hpp"
#include "dlcost/projection.hpp"
#include "dlcost/ecdf.hpp"
#include "dlcost/aggregate.hpp"
#include "dlcost/sweep.hpp"
#include "dlcost/trace.hpp"
#include "dlcost/corpus.hpp"
#include "dlcost/synth.hpp"
#include "dlcost/report.hpp"
