#pragma once

#include "qnsp/errors.hpp"
#include "qnsp/remainder_set.hpp"
#include "qnsp/spectral/field.hpp"
#include "qnsp/spectral/grid.hpp"
#include "qnsp/spectral/norms.hpp"
#include "qnsp/spectral/operators.hpp"
#include "qnsp/spectral/random.hpp"
#include "qnsp/spectral/snapshot.hpp"
#include "qnsp/solver/checkpoint.hpp"
#include "qnsp/solver/integrate.hpp"
#include "qnsp/solver/linear_block.hpp"
#include "qnsp/solver/params.hpp"
#include "qnsp/solver/physics.hpp"
#include "qnsp/solver/stepper.hpp"
#include "qnsp/hierarchy/compose.hpp"
#include "qnsp/hierarchy/correction.hpp"
#include "qnsp/hierarchy/extraction.hpp"
#include "qnsp/hierarchy/forcing.hpp"
#include "qnsp/hierarchy/initial_data.hpp"
#include "qnsp/hierarchy/limit.hpp"
#include "qnsp/hierarchy/profile_set.hpp"
#include "qnsp/hierarchy/time_series.hpp"
#include "qnsp/diagnostics/remainders.hpp"
#include "qnsp/diagnostics/series.hpp"
#include "qnsp/hierarchy/profile_io.hpp"
#include "qnsp/harness/config.hpp"
#include "qnsp/harness/fit.hpp"
#include "qnsp/harness/ladder.hpp"
#include "qnsp/harness/record.hpp"
#include "qnsp/harness/report.hpp"
