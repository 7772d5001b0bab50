#include "pstflow/correction.hpp"

#include <algorithm>

#include "pstflow/error.hpp"

namespace pstflow {

CorrectionEvaluation interpolate_factor(const CorrectionTable& table, double angle_deg) {
    const auto& pts = table.points;
    if (pts.empty()) {
        throw InvalidArgument("correction table '" + table.id + "' has no points");
    }
    if (angle_deg < pts.front().angle_deg) {
        return {angle_deg, pts.front().factor, true};
    }
    if (angle_deg > pts.back().angle_deg) {
        return {angle_deg, pts.back().factor, true};
    }
    // First breakpoint strictly greater than the angle; its predecessor is <= angle.
    auto hi = std::upper_bound(pts.begin(), pts.end(), angle_deg,
                               [](double a, const CorrectionPoint& p) { return a < p.angle_deg; });
    auto lo = std::prev(hi);
    if (lo->angle_deg == angle_deg || hi == pts.end()) {
        return {angle_deg, lo->factor, false};
    }
    const double t = (angle_deg - lo->angle_deg) / (hi->angle_deg - lo->angle_deg);
    return {angle_deg, lo->factor + t * (hi->factor - lo->factor), false};
}

double iec_correction_factor(double x_t_pu, double c_max) {
    if (x_t_pu < 0.0) {
        throw InvalidArgument("transformer reactance must be non-negative");
    }
    if (!(c_max > 0.0)) {
        throw InvalidArgument("c_max must be positive");
    }
    return 0.95 * c_max / (1.0 + 0.6 * x_t_pu);
}

double per_unit_reactance(double x_ohm, double s_rated_mva, double v_rated_kv) {
    if (!(s_rated_mva > 0.0) || !(v_rated_kv > 0.0)) {
        throw InvalidArgument("transformer rating must be positive");
    }
    // MVA / kV^2 = (1e6 VA) / (1e6 V^2): the SI scale factors cancel.
    return x_ohm * s_rated_mva / (v_rated_kv * v_rated_kv);
}

std::complex<double> corrected_impedance(std::complex<double> z, double k) {
    if (!(k > 0.0)) {
        throw InvalidArgument("correction factor must be positive");
    }
    return k * z;
}

CorrectionTable reference_pst_table(std::string id) {
    return {std::move(id),
            {{-152.0, 1.0},
             {-121.0, 0.62},
             {-85.0, 0.37},
             {-42.0, 0.21},
             {0.0, 0.15},
             {42.0, 0.21},
             {85.0, 0.37},
             {121.0, 0.62},
             {152.0, 1.0}}};
}

}  // namespace pstflow
