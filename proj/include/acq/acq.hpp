#pragma once

#include "acq/core.hpp"
#include "acq/error.hpp"
#include "acq/experiments.hpp"
#include "acq/oracle.hpp"
#include "acq/path_solver.hpp"
#include "acq/poisson_analysis.hpp"
#include "acq/protocol_sim.hpp"
#include "acq/report.hpp"
#include "acq/rng.hpp"
