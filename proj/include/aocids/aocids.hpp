// Umbrella header for the full pipeline.

#pragma once

#include "aocids/csv.hpp"
#include "aocids/dataset.hpp"
#include "aocids/decision.hpp"
#include "aocids/eval.hpp"
#include "aocids/loss.hpp"
#include "aocids/model.hpp"
#include "aocids/online.hpp"
#include "aocids/rng.hpp"
