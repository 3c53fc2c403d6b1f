#pragma once

#include "coloring.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "generators.hpp"
#include "geometry.hpp"
#include "hypergraph.hpp"
#include "io.hpp"
#include "numeric.hpp"
#include "point.hpp"
#include "random.hpp"
#include "selection.hpp"
