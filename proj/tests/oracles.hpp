#pragma once

// Reference computations used only by tests. Each one follows a different
// route from the library code it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "pstflow/dc_atc.hpp"
#include "pstflow/grid_model.hpp"
#include "pstflow/network_matrix.hpp"

namespace pstflow::oracle {

using cplx = std::complex<double>;

inline double table_factor(const CorrectionTable& t, double phi) {
    const auto& p = t.points;
    if (phi <= p.front().angle_deg) return p.front().factor;
    if (phi >= p.back().angle_deg) return p.back().factor;
    for (std::size_t s = 0; s + 1 < p.size(); ++s) {
        if (phi >= p[s].angle_deg && phi <= p[s + 1].angle_deg) {
            const double w = (phi - p[s].angle_deg) / (p[s + 1].angle_deg - p[s].angle_deg);
            return (1.0 - w) * p[s].factor + w * p[s + 1].factor;
        }
    }
    return p.back().factor;
}

// Two-port entries obtained by driving the circuit: ideal transformer
// V_i = t E, series admittance y between E and V_k, power-invariant current
// transfer I_i = i_line / conj(t). Column j of the matrix is the current
// response to a unit voltage on port j with the other port grounded.
struct CircuitStamp {
    cplx y_ii, y_ik, y_ki, y_kk;
};

inline CircuitStamp stamp_by_circuit(double r, double x, double tap, double phi_deg, double k) {
    const cplx z = k * cplx(r, x);
    const cplx t = tap * cplx(std::cos(phi_deg * M_PI / 180.0), std::sin(phi_deg * M_PI / 180.0));
    auto currents = [&](cplx vi, cplx vk) {
        const cplx e = vi / t;
        const cplx i_line = (e - vk) / z;
        return std::pair<cplx, cplx>{i_line / std::conj(t), -i_line};
    };
    const auto [a_ii, a_ki] = currents(1.0, 0.0);
    const auto [a_ik, a_kk] = currents(0.0, 1.0);
    return {a_ii, a_ik, a_ki, a_kk};
}

// Admittance map keyed by bus id, assembled from per-branch circuits.
inline std::map<std::pair<int, int>, cplx> admittance_by_circuit(const Network& net,
                                                                  bool use_correction) {
    std::map<std::pair<int, int>, cplx> y;
    for (const auto& br : net.branches) {
        if (!br.in_service) continue;
        double tap = 1.0, phi = 0.0, k = 1.0;
        if (br.transformer) {
            tap = br.transformer->tap_ratio;
            phi = br.transformer->phase_shift_deg;
            if (use_correction && br.transformer->correction_table) {
                k = table_factor(*net.find_table(*br.transformer->correction_table), phi);
            }
        }
        const auto s = stamp_by_circuit(br.r_pu, br.x_pu, tap, phi, k);
        const cplx half_b(0.0, br.b_pu / 2.0);
        y[{br.from_bus, br.from_bus}] += s.y_ii + half_b;
        y[{br.from_bus, br.to_bus}] += s.y_ik;
        y[{br.to_bus, br.from_bus}] += s.y_ki;
        y[{br.to_bus, br.to_bus}] += s.y_kk + half_b;
    }
    return y;
}

// Gauss-Seidel AC power flow. Returns voltages in ascending bus-id order.
inline std::vector<cplx> gauss_seidel(const Network& net, bool use_correction,
                                      double tol = 1e-13, int max_sweeps = 500000) {
    std::vector<int> ids;
    for (const auto& b : net.buses) ids.push_back(b.id);
    std::sort(ids.begin(), ids.end());
    const std::size_t n = ids.size();
    std::map<int, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos[ids[i]] = i;

    std::vector<std::vector<cplx>> y(n, std::vector<cplx>(n));
    for (const auto& [key, v] : admittance_by_circuit(net, use_correction)) {
        y[pos[key.first]][pos[key.second]] += v;
    }

    std::vector<double> p(n, 0.0), q(n, 0.0), vset(n, 1.0);
    std::vector<BusKind> kind(n);
    for (const auto& g : net.generators) {
        p[pos[g.bus]] += g.p_mw / net.base_mva;
        if (g.v_setpoint_pu) vset[pos[g.bus]] = *g.v_setpoint_pu;
    }
    for (const auto& l : net.loads) {
        p[pos[l.bus]] -= l.p_mw / net.base_mva;
        q[pos[l.bus]] -= l.q_mvar / net.base_mva;
    }
    for (const auto& b : net.buses) {
        kind[pos[b.id]] = b.kind;
        if (b.v_setpoint_pu) vset[pos[b.id]] = *b.v_setpoint_pu;
    }

    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = kind[i] == BusKind::pq ? cplx(1.0) : cplx(vset[i]);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (kind[i] == BusKind::slack) continue;
            cplx sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != i) sum += y[i][k] * v[k];
            }
            double qi = q[i];
            if (kind[i] == BusKind::pv) {
                qi = -std::imag(std::conj(v[i]) * (sum + y[i][i] * v[i]));
            }
            cplx vi = (cplx(p[i], -qi) / std::conj(v[i]) - sum) / y[i][i];
            if (kind[i] == BusKind::pv) vi = std::polar(vset[i], std::arg(vi));
            change = std::max(change, std::abs(vi - v[i]));
            v[i] = vi;
        }
        if (change < tol) break;
    }
    return v;
}

// Raises the transfer in `step_mw` increments, re-solving the DC flow on a
// modified copy of the case each time, until the first rating violation.
// Returns the last feasible level, or nullopt when `cap_mw` is reached.
inline std::optional<double> brute_force_atc(const Network& net, const TransferDefinition& transfer,
                                             bool use_correction, double step_mw = 0.1,
                                             double cap_mw = 20000.0) {
    auto feasible = [&](double level) {
        Network moved = net;
        for (const auto& s : transfer.sellers) moved.generators[s.index].p_mw += s.fraction * level;
        for (const auto& b : transfer.buyers) moved.loads[b.index].p_mw += b.fraction * level;
        const auto sol = dc_solve(moved, use_correction);
        for (std::size_t j = 0; j < net.branches.size(); ++j) {
            const auto& br = net.branches[j];
            if (br.in_service && br.rating_mva > 0 && std::abs(sol.flow_mw[j]) > br.rating_mva + 1e-9) {
                return false;
            }
        }
        return true;
    };
    if (!feasible(0.0)) return 0.0;
    for (int k = 1;; ++k) {
        const double level = k * step_mw;
        if (level > cap_mw) return std::nullopt;
        if (!feasible(level)) return (k - 1) * step_mw;
    }
}

}  // namespace pstflow::oracle
