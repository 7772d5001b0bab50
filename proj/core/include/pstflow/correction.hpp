#pragma once

#include <complex>

#include "pstflow/grid_model.hpp"

namespace pstflow {

struct CorrectionEvaluation {
    double angle_deg = 0.0;
    double factor = 1.0;
    bool clamped = false;  // angle fell outside the table's breakpoint range
};

// K(phi) by piecewise-linear interpolation. Breakpoints are reproduced
// exactly; angles beyond either end take the end factor.
CorrectionEvaluation interpolate_factor(const CorrectionTable& table, double angle_deg);

// IEC 60909-0 transformer correction: 0.95 * c_max / (1 + 0.6 * x_t).
double iec_correction_factor(double x_t_pu, double c_max);

// Rated-quantity reactance in ohms to per-unit on the transformer rating.
double per_unit_reactance(double x_ohm, double s_rated_mva, double v_rated_kv);

// k * z, scaling resistance and reactance together.
std::complex<double> corrected_impedance(std::complex<double> z, double k);

// The nine-point symmetric PST table (-152..152 degrees) shipped with the
// corpus cases. `id` names the returned table.
CorrectionTable reference_pst_table(std::string id = "pst_reference");

}  // namespace pstflow
