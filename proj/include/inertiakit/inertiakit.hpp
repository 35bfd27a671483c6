#pragma once

#include "inertiakit/bench/metrics.hpp"
#include "inertiakit/bench/report.hpp"
#include "inertiakit/bench/runner.hpp"
#include "inertiakit/bench/scenario.hpp"
#include "inertiakit/dataset.hpp"
#include "inertiakit/est/dmd.hpp"
#include "inertiakit/est/osc.hpp"
#include "inertiakit/est/sysid.hpp"
#include "inertiakit/estimate.hpp"
#include "inertiakit/grid.hpp"
#include "inertiakit/json_io.hpp"
#include "inertiakit/signal/butterworth.hpp"
#include "inertiakit/signal/dft.hpp"
#include "inertiakit/signal/finite_diff.hpp"
#include "inertiakit/sim/kron.hpp"
#include "inertiakit/sim/powerflow.hpp"
#include "inertiakit/sim/simulate.hpp"
#include "inertiakit/types.hpp"
