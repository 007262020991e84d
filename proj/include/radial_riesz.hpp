#pragma once

#include "radial_riesz/errors.hpp"
#include "radial_riesz/exponents.hpp"
#include "radial_riesz/grid.hpp"
#include "radial_riesz/io.hpp"
#include "radial_riesz/kernel.hpp"
#include "radial_riesz/kernel_table.hpp"
#include "radial_riesz/lab.hpp"
#include "radial_riesz/potential.hpp"
