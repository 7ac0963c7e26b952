#pragma once

#include "thermovalue/csv.hpp"
#include "thermovalue/dataset.hpp"
#include "thermovalue/error.hpp"
#include "thermovalue/model.hpp"
#include "thermovalue/stats.hpp"
#include "thermovalue/svg.hpp"
#include "thermovalue/thermo.hpp"
