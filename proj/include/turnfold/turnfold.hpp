#pragma once

#include "turnfold/grid.hpp"
#include "turnfold/machine.hpp"
#include "turnfold/sim.hpp"
#include "turnfold/explore.hpp"
#include "turnfold/shapes.hpp"
#include "turnfold/compile.hpp"
#include "turnfold/io.hpp"
#include "turnfold/render.hpp"
