#pragma once

// Adaptive SPRT with likelihood-ratio allocation between two populations.

#include "asprt/errors.hpp"
#include "asprt/random.hpp"
#include "asprt/quadrature.hpp"
#include "asprt/distributions.hpp"
#include "asprt/analytics.hpp"
#include "asprt/allocation.hpp"
#include "asprt/stopping.hpp"
#include "asprt/montecarlo.hpp"
#include "asprt/config.hpp"
#include "asprt/report.hpp"
