#pragma once

#include "hqmm/algebra.hpp"
#include "hqmm/analysis.hpp"
#include "hqmm/classical.hpp"
#include "hqmm/cluster.hpp"
#include "hqmm/core.hpp"
#include "hqmm/model_io.hpp"
#include "hqmm/mps.hpp"
#include "hqmm/quantum.hpp"
