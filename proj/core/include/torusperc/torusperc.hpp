#pragma once

#include "torusperc/dynamics.hpp"
#include "torusperc/errors.hpp"
#include "torusperc/graph_analysis.hpp"
#include "torusperc/graph_gen.hpp"
#include "torusperc/io.hpp"
#include "torusperc/meanfield.hpp"
#include "torusperc/parallel.hpp"
#include "torusperc/rng.hpp"
#include "torusperc/torus_model.hpp"
