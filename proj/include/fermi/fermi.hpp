#pragma once

// Everything at once.

#include "fermi/asymptotics.hpp"
#include "fermi/config.hpp"
#include "fermi/discretize.hpp"
#include "fermi/entropy_functionals.hpp"
#include "fermi/errors.hpp"
#include "fermi/geometry.hpp"
#include "fermi/kernels.hpp"
#include "fermi/quadrature.hpp"
#include "fermi/record.hpp"
#include "fermi/special.hpp"
#include "fermi/spectra.hpp"
#include "fermi/validate.hpp"
#include "fermi/widom.hpp"
