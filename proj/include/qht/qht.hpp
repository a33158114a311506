// Umbrella header.
#pragma once

#include "qht/config.hpp"
#include "qht/density.hpp"
#include "qht/discrimination.hpp"
#include "qht/errors.hpp"
#include "qht/experiments.hpp"
#include "qht/linalg.hpp"
#include "qht/model.hpp"
#include "qht/optimize.hpp"
#include "qht/propagator.hpp"
