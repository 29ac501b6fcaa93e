#pragma once

#include "blindhd/covariance.hpp"
#include "blindhd/errors.hpp"
#include "blindhd/experiments.hpp"
#include "blindhd/forward.hpp"
#include "blindhd/grid.hpp"
#include "blindhd/hyperpriors.hpp"
#include "blindhd/inference.hpp"
#include "blindhd/io.hpp"
#include "blindhd/numerics.hpp"
#include "blindhd/optimizer.hpp"
#include "blindhd/rng.hpp"
#include "blindhd/svg.hpp"
