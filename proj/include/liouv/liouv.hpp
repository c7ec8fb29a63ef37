#pragma once

#include "liouv/core.hpp"
#include "liouv/model.hpp"
#include "liouv/rapidity.hpp"
#include "liouv/lyapunov.hpp"
#include "liouv/normal_modes.hpp"
#include "liouv/spectra.hpp"
#include "liouv/combinatorics.hpp"
#include "liouv/oracle.hpp"
#include "liouv/random.hpp"
#include "liouv/analysis.hpp"
#include "liouv/io.hpp"
