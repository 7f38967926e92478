#pragma once

#include "lagcalc/error.hpp"
#include "lagcalc/field.hpp"
#include "lagcalc/group.hpp"
#include "lagcalc/kernels.hpp"
#include "lagcalc/laguerre.hpp"
#include "lagcalc/parallel.hpp"
#include "lagcalc/quadrature.hpp"
#include "lagcalc/spectral.hpp"
#include "lagcalc/tensor.hpp"
#include "lagcalc/twisted.hpp"
