#pragma once

#include "sqt/analytic.hpp"
#include "sqt/figures.hpp"
#include "sqt/io.hpp"
#include "sqt/langevin.hpp"
#include "sqt/params.hpp"
#include "sqt/quadrature.hpp"
#include "sqt/readout.hpp"
#include "sqt/spectra.hpp"
#include "sqt/version.hpp"
