#include "pstflow/network_matrix.hpp"

#include <cmath>
#include <cstdio>

#include "pstflow/correction.hpp"
#include "pstflow/error.hpp"

namespace pstflow {

BranchStamp pst_branch_admittance(double r_pu, double x_pu, double tap_ratio,
                                  double phase_shift_deg, double factor) {
    if (r_pu * r_pu + x_pu * x_pu == 0.0) {
        throw InvalidArgument("zero branch impedance");
    }
    if (!(tap_ratio > 0.0)) {
        throw InvalidArgument("tap ratio must be positive");
    }
    if (!(factor > 0.0)) {
        throw InvalidArgument("correction factor must be positive");
    }
    const Complex y = 1.0 / (factor * Complex(r_pu, x_pu));
    const Complex t = std::polar(tap_ratio, deg_to_rad(phase_shift_deg));
    return {y / (tap_ratio * tap_ratio), -y / std::conj(t), -y / t, y};
}

double branch_correction_factor(const Network& net, const Branch& branch, bool use_correction) {
    if (!use_correction || !branch.transformer || !branch.transformer->correction_table) {
        return 1.0;
    }
    const auto& name = *branch.transformer->correction_table;
    const auto* table = net.find_table(name);
    if (!table) {
        throw InvalidArgument("branch " + std::to_string(branch.id) +
                              ": unresolvable correction table '" + name + "'");
    }
    return interpolate_factor(*table, branch.transformer->phase_shift_deg).factor;
}

BranchStamp branch_stamp(const Network& net, const Branch& branch, bool use_correction) {
    const double tap = branch.transformer ? branch.transformer->tap_ratio : 1.0;
    const double phase = branch.transformer ? branch.transformer->phase_shift_deg : 0.0;
    const double k = branch_correction_factor(net, branch, use_correction);
    auto stamp = pst_branch_admittance(branch.r_pu, branch.x_pu, tap, phase, k);
    const Complex charging(0.0, branch.b_pu / 2.0);
    stamp.y_ii += charging;
    stamp.y_kk += charging;
    return stamp;
}

AdmittanceMatrix::AdmittanceMatrix(std::vector<int> bus_ids)
    : bus_ids_(std::move(bus_ids)), rows_(bus_ids_.size()) {}

Complex AdmittanceMatrix::at(std::size_t row, std::size_t col) const {
    const auto& r = rows_.at(row);
    auto it = r.find(col);
    return it == r.end() ? Complex{} : it->second;
}

void AdmittanceMatrix::add(std::size_t row, std::size_t col, Complex value) {
    if (col >= bus_ids_.size()) {
        throw InvalidArgument("admittance column out of range");
    }
    rows_.at(row)[col] += value;
}

std::size_t AdmittanceMatrix::nonzeros() const noexcept {
    std::size_t n = 0;
    for (const auto& r : rows_) {
        n += r.size();
    }
    return n;
}

std::vector<Complex> AdmittanceMatrix::dense() const {
    const auto n = size();
    std::vector<Complex> out(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [j, v] : rows_[i]) {
            out[i * n + j] = v;
        }
    }
    return out;
}

namespace {

std::string format_g12(double v) {
    if (v == 0.0) {
        v = 0.0;  // drop the sign of negative zero
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string AdmittanceMatrix::to_text() const {
    std::string out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (const auto& [j, v] : rows_[i]) {
            out += std::to_string(bus_ids_[i]) + ' ' + std::to_string(bus_ids_[j]) + ' ' +
                   format_g12(v.real()) + ' ' + format_g12(v.imag()) + '\n';
        }
    }
    return out;
}

AdmittanceMatrix assemble_ybus(const Network& net, bool use_correction) {
    BusIndex index(net);
    AdmittanceMatrix ybus({index.ids().begin(), index.ids().end()});
    for (const auto& br : net.branches) {
        if (!br.in_service) {
            continue;
        }
        const auto i = index.position(br.from_bus);
        const auto k = index.position(br.to_bus);
        const auto s = branch_stamp(net, br, use_correction);
        ybus.add(i, i, s.y_ii);
        ybus.add(i, k, s.y_ik);
        ybus.add(k, i, s.y_ki);
        ybus.add(k, k, s.y_kk);
    }
    return ybus;
}

double line_real_power(double v_i_pu, double v_k_pu, double x_line_pu, double theta_ik_deg) {
    if (x_line_pu == 0.0) {
        throw InvalidArgument("line reactance must be non-zero");
    }
    return v_i_pu * v_k_pu / x_line_pu * std::sin(deg_to_rad(theta_ik_deg));
}

}  // namespace pstflow
