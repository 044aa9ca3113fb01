#pragma once

// Umbrella header for the numerical library (the CLI lives in gvfls/cli.hpp).

#include "gvfls/config.hpp"
#include "gvfls/contour.hpp"
#include "gvfls/diagnostics.hpp"
#include "gvfls/distance.hpp"
#include "gvfls/edge_map.hpp"
#include "gvfls/grid.hpp"
#include "gvfls/gvf.hpp"
#include "gvfls/io.hpp"
#include "gvfls/levelset.hpp"
#include "gvfls/parallel.hpp"
#include "gvfls/segment.hpp"
#include "gvfls/stencil.hpp"
#include "gvfls/synth.hpp"
#include "gvfls/viscosity.hpp"
