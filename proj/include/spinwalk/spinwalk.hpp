#pragma once

#include "spinwalk/analysis.hpp"
#include "spinwalk/io.hpp"
#include "spinwalk/lattice.hpp"
#include "spinwalk/line_walk.hpp"
#include "spinwalk/numerics.hpp"
#include "spinwalk/reservoir.hpp"
#include "spinwalk/scatterer.hpp"
#include "spinwalk/series.hpp"
#include "spinwalk/tree.hpp"
