#pragma once

#include "bench.hpp"
#include "core_model.hpp"
#include "error.hpp"
#include "exact_oracle.hpp"
#include "heuristic_engine.hpp"
#include "init_allocation.hpp"
#include "instance_io.hpp"
#include "random.hpp"
#include "svg.hpp"
#include "tour_solver.hpp"
