#pragma once

#include "core/builders.hpp"
#include "core/errors.hpp"
#include "core/pure_state.hpp"
#include "core/sector_basis.hpp"
#include "entanglement/entropy.hpp"
#include "experiment/csv.hpp"
#include "experiment/experiments.hpp"
#include "experiment/spec_parser.hpp"
#include "fit/scaling_fits.hpp"
#include "oracle/analytic.hpp"
#include "vcm/additive_operator.hpp"
#include "vcm/correlations.hpp"
#include "vcm/index_p.hpp"
#include "vcm/max_eigen.hpp"
#include "vcm/vcm_matrix.hpp"
