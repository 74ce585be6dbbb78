#pragma once

#include "nullmeas/distribution.hpp"
#include "nullmeas/info_measures.hpp"
#include "nullmeas/measurement.hpp"
#include "nullmeas/rates.hpp"
#include "nullmeas/scan.hpp"
#include "nullmeas/threshold.hpp"
#include "nullmeas/trajectory_mc.hpp"
