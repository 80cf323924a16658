#pragma once

// Numerical laboratory for the Newell-Whitehead equation f_t = lap f + a f - b f^3:
// sharp differential Harnack certification, gauge functions, the integrated
// Harnack estimate, traveling fronts and steady states.

#include "nwlab/config.hpp"
#include "nwlab/error.hpp"
#include "nwlab/field.hpp"
#include "nwlab/gauge.hpp"
#include "nwlab/harnack.hpp"
#include "nwlab/params.hpp"
#include "nwlab/solver.hpp"
#include "nwlab/waves.hpp"
