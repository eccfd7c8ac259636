#pragma once
// Umbrella header for the dressed-phase thermometry library.

#include "thermo/bec.hpp"
#include "thermo/constants.hpp"
#include "thermo/errors.hpp"
#include "thermo/estimation.hpp"
#include "thermo/io/config.hpp"
#include "thermo/io/csv.hpp"
#include "thermo/io/manifest.hpp"
#include "thermo/jc.hpp"
#include "thermo/metrology.hpp"
#include "thermo/pipelines.hpp"
#include "thermo/thermal.hpp"
