#pragma once

#include "pstflow/ac_powerflow.hpp"
#include "pstflow/case_io.hpp"
#include "pstflow/correction.hpp"
#include "pstflow/dc_atc.hpp"
#include "pstflow/error.hpp"
#include "pstflow/grid_model.hpp"
#include "pstflow/network_matrix.hpp"
#include "pstflow/report.hpp"
#include "pstflow/studies.hpp"
