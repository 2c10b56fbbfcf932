#pragma once

#include "siepi/calibration.hpp"
#include "siepi/config.hpp"
#include "siepi/epidemic.hpp"
#include "siepi/error.hpp"
#include "siepi/grid.hpp"
#include "siepi/intervention.hpp"
#include "siepi/processes.hpp"
#include "siepi/random.hpp"
#include "siepi/report.hpp"
#include "siepi/risk.hpp"
#include "siepi/scenario.hpp"
#include "siepi/sde.hpp"
#include "siepi/transforms.hpp"
