#pragma once

#include "latnav/bvc.hpp"
#include "latnav/congestion.hpp"
#include "latnav/corridor.hpp"
#include "latnav/error.hpp"
#include "latnav/geometry.hpp"
#include "latnav/grid_map.hpp"
#include "latnav/io.hpp"
#include "latnav/lattice.hpp"
#include "latnav/planner.hpp"
#include "latnav/scenario.hpp"
#include "latnav/scenario_io.hpp"
#include "latnav/sim.hpp"
