#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pstflow/grid_model.hpp"

namespace pstflow {

using Complex = std::complex<double>;

// Two-port admittances of one branch; side i is from_bus.
struct BranchStamp {
    Complex y_ii;
    Complex y_ik;
    Complex y_ki;
    Complex y_kk;
};

// Series impedance (r + jx) scaled by `factor`, behind an ideal transformer
// t = tap * exp(j*phase) on side i:
//   y_ii = y/T^2, y_ik = -y/conj(t), y_ki = -y/t, y_kk = y.
BranchStamp pst_branch_admittance(double r_pu, double x_pu, double tap_ratio,
                                  double phase_shift_deg, double factor);

// Impedance scale factor a branch carries in `net`: the interpolated table
// value when correction is on and the branch names a table, otherwise 1.
double branch_correction_factor(const Network& net, const Branch& branch, bool use_correction);

// Full stamp of an in-service branch including line charging (j*b/2 on each
// diagonal).
BranchStamp branch_stamp(const Network& net, const Branch& branch, bool use_correction);

// Sparse complex bus admittance matrix. Row/column positions follow BusIndex
// (ascending bus id).
class AdmittanceMatrix {
  public:
    explicit AdmittanceMatrix(std::vector<int> bus_ids);

    std::size_t size() const noexcept { return bus_ids_.size(); }
    const std::vector<int>& bus_ids() const noexcept { return bus_ids_; }

    Complex at(std::size_t row, std::size_t col) const;
    void add(std::size_t row, std::size_t col, Complex value);

    // Stored entries of one row, ordered by column.
    const std::map<std::size_t, Complex>& row(std::size_t r) const { return rows_.at(r); }
    std::size_t nonzeros() const noexcept;

    // Row-major n*n copy.
    std::vector<Complex> dense() const;

    // "i k re im" lines (bus ids, 12 significant digits) sorted by (i, k).
    std::string to_text() const;

  private:
    std::vector<int> bus_ids_;
    std::vector<std::map<std::size_t, Complex>> rows_;
};

AdmittanceMatrix assemble_ybus(const Network& net, bool use_correction);

// Real power over a lossless line: (v_i * v_k / x) * sin(theta_ik).
double line_real_power(double v_i_pu, double v_k_pu, double x_line_pu, double theta_ik_deg);

constexpr double deg_to_rad(double deg) noexcept { return deg * 0.017453292519943295; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 57.29577951308232; }

}  // namespace pstflow
