// lzsm.hpp: umbrella header

#pragma once

#include "lzsm/linalg.hpp"
#include "lzsm/hamiltonian.hpp"
#include "lzsm/dissipator.hpp"
#include "lzsm/integrator.hpp"
#include "lzsm/propagator.hpp"
#include "lzsm/phenomenological.hpp"
#include "lzsm/hightemp.hpp"
#include "lzsm/analysis.hpp"
#include "lzsm/sweep.hpp"
#include "lzsm/version.hpp"
