#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/farfield.hpp"
#include "bubblelab/core/linalg.hpp"
#include "bubblelab/core/quadrature.hpp"
#include "bubblelab/core/types.hpp"

#include "bubblelab/geometry/generators.hpp"
#include "bubblelab/geometry/mesh.hpp"

#include "bubblelab/model/bubble.hpp"
#include "bubblelab/model/coefficient.hpp"
#include "bubblelab/model/contrast.hpp"
#include "bubblelab/model/effective.hpp"
#include "bubblelab/model/regime.hpp"

#include "bubblelab/cluster/cluster.hpp"
#include "bubblelab/cluster/density.hpp"
#include "bubblelab/cluster/domain.hpp"
#include "bubblelab/cluster/json.hpp"
#include "bubblelab/cluster/surface.hpp"
#include "bubblelab/cluster/validate.hpp"
#include "bubblelab/cluster/volumetric.hpp"

#include "bubblelab/pointscat/foldy_lax.hpp"

#include "bubblelab/volmedium/fft_convolution.hpp"
#include "bubblelab/volmedium/lippmann_schwinger.hpp"

#include "bubblelab/surfmedium/chart_mesh.hpp"
#include "bubblelab/surfmedium/layer.hpp"
#include "bubblelab/surfmedium/surface_solver.hpp"

#include "bubblelab/bemlimit/dirichlet.hpp"

#include "bubblelab/harness/config.hpp"
#include "bubblelab/harness/convergence.hpp"
#include "bubblelab/harness/rate_fit.hpp"
