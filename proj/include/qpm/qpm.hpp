// qpm.hpp
// Umbrella header.

#pragma once

#include "qpm/chsh.hpp"
#include "qpm/complex_matrix.hpp"
#include "qpm/errors.hpp"
#include "qpm/json_io.hpp"
#include "qpm/measurement.hpp"
#include "qpm/spectral.hpp"
#include "qpm/states.hpp"
