#pragma once

// Umbrella header for the computational modules. The CLI and the HTTP
// service live in cli.hpp and serve.hpp and pull in their vendored deps.

#include "leafmatch/discrete.hpp"
#include "leafmatch/errors.hpp"
#include "leafmatch/ladder.hpp"
#include "leafmatch/leafgeom.hpp"
#include "leafmatch/linksim.hpp"
#include "leafmatch/rfcore.hpp"
#include "leafmatch/synth.hpp"
#include "leafmatch/touchstone.hpp"
#include "leafmatch/units.hpp"
