#pragma once

// Everything except the JSON helpers (roles/json_io.hpp).

#include "roles/approx_wl.hpp"
#include "roles/clustering.hpp"
#include "roles/cost.hpp"
#include "roles/error.hpp"
#include "roles/eval.hpp"
#include "roles/experiments.hpp"
#include "roles/graph.hpp"
#include "roles/partition.hpp"
#include "roles/rip.hpp"
#include "roles/spectral.hpp"
#include "roles/wl.hpp"
