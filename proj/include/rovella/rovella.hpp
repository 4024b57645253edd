#pragma once

// Umbrella header.
#include "rovella/core/errors.hpp"
#include "rovella/core/geometry.hpp"
#include "rovella/core/parallel.hpp"
#include "rovella/core/params.hpp"
#include "rovella/core/rng.hpp"
#include "rovella/core/rovella_map.hpp"
#include "rovella/experiment/config.hpp"
#include "rovella/experiment/io.hpp"
#include "rovella/experiment/observables.hpp"
#include "rovella/experiment/report.hpp"
#include "rovella/experiment/runner.hpp"
#include "rovella/measure/birkhoff.hpp"
#include "rovella/measure/conditions.hpp"
#include "rovella/measure/density.hpp"
#include "rovella/measure/orbit.hpp"
#include "rovella/measure/times.hpp"
#include "rovella/measure/ulam.hpp"
#include "rovella/norms/grid.hpp"
#include "rovella/norms/growth.hpp"
#include "rovella/norms/report.hpp"
#include "rovella/norms/step_function.hpp"
#include "rovella/stats/correlation.hpp"
#include "rovella/stats/dimension.hpp"
#include "rovella/stats/fit.hpp"
#include "rovella/stats/hitting.hpp"
#include "rovella/stats/loglaw.hpp"
#include "rovella/stats/series.hpp"
