// Umbrella header for the periodic rigidity kit.
#pragma once

#include "prk/decompose.hpp"
#include "prk/derived.hpp"
#include "prk/gain_conditions.hpp"
#include "prk/henneberg.hpp"
#include "prk/isomorphism.hpp"
#include "prk/json_io.hpp"
#include "prk/numeric.hpp"
#include "prk/orbit_graph.hpp"
#include "prk/rigidity.hpp"
#include "prk/sparsity.hpp"
#include "prk/svg.hpp"
#include "prk/tgain.hpp"
