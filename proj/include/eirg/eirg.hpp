#pragma once

// Umbrella header for the whole library.

#include "eirg/cli.hpp"
#include "eirg/concentration.hpp"
#include "eirg/config.hpp"
#include "eirg/edge_list.hpp"
#include "eirg/error.hpp"
#include "eirg/experiment.hpp"
#include "eirg/graph_matrices.hpp"
#include "eirg/linalg.hpp"
#include "eirg/models.hpp"
#include "eirg/report.hpp"
#include "eirg/rng.hpp"
#include "eirg/walks.hpp"
