#pragma once

#include "diracbeams/core.hpp"
#include "diracbeams/special_functions.hpp"
#include "diracbeams/scalar_solutions.hpp"
#include "diracbeams/dirac.hpp"
#include "diracbeams/spectral.hpp"
#include "diracbeams/observables.hpp"
#include "diracbeams/validation.hpp"
#include "diracbeams/io.hpp"
