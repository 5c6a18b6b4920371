#pragma once

// Everything in the library (the CLI layer under symmkit/app/ is separate).

#include "symmkit/certificate.hpp"
#include "symmkit/config.hpp"
#include "symmkit/experiments.hpp"
#include "symmkit/geom.hpp"
#include "symmkit/polygon.hpp"
#include "symmkit/polygon_io.hpp"
#include "symmkit/process.hpp"
#include "symmkit/random.hpp"
#include "symmkit/raster.hpp"
#include "symmkit/sequences.hpp"
#include "symmkit/support_grid.hpp"
#include "symmkit/svg.hpp"
