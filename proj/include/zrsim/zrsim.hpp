#pragma once

#include "zrsim/types.hpp"        // IWYU pragma: export
#include "zrsim/utility.hpp"      // IWYU pragma: export
#include "zrsim/params.hpp"       // IWYU pragma: export
#include "zrsim/consumption.hpp"  // IWYU pragma: export
#include "zrsim/market.hpp"       // IWYU pragma: export
#include "zrsim/scenario.hpp"     // IWYU pragma: export
#include "zrsim/nash.hpp"         // IWYU pragma: export
#include "zrsim/best_response.hpp"  // IWYU pragma: export
#include "zrsim/dynamics.hpp"     // IWYU pragma: export
#include "zrsim/sweep.hpp"        // IWYU pragma: export
#include "zrsim/format.hpp"       // IWYU pragma: export
