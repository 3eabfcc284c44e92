#pragma once

#include "appendix.hpp"
#include "bounds.hpp"
#include "builtin_sets.hpp"
#include "claims.hpp"
#include "curvature.hpp"
#include "density.hpp"
#include "energy.hpp"
#include "geometry.hpp"
#include "json_io.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "run_config.hpp"
#include "scaled_real.hpp"
#include "segment_set.hpp"
#include "version.hpp"
