#pragma once

// Umbrella header for the whole library.

#include "lip/extended_real.hpp"
#include "lip/model.hpp"
#include "lip/functionals.hpp"
#include "lip/predictive.hpp"
#include "lip/solver.hpp"
#include "lip/dominator.hpp"
#include "lip/oracle.hpp"
#include "lip/io.hpp"
#include "lip/sweep.hpp"
