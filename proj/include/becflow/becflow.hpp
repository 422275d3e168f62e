#pragma once

#include "becflow/bloch.hpp"
#include "becflow/config.hpp"
#include "becflow/dynamics.hpp"
#include "becflow/errors.hpp"
#include "becflow/fft.hpp"
#include "becflow/grid.hpp"
#include "becflow/groundstate.hpp"
#include "becflow/observables.hpp"
#include "becflow/potential.hpp"
#include "becflow/runner.hpp"
#include "becflow/snapshot.hpp"
#include "becflow/spectral.hpp"
#include "becflow/units.hpp"
