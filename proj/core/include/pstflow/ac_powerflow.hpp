#pragma once

#include <complex>
#include <span>
#include <vector>

#include "pstflow/grid_model.hpp"
#include "pstflow/network_matrix.hpp"

namespace pstflow {

struct SolveOptions {
    double tolerance_pu = 1e-8;
    int max_iterations = 50;
    bool flat_start = true;
    bool enforce_q_limits = false;
    bool use_correction = true;
    // Warm start in BusIndex order; used only when flat_start is false.
    // Slack and pv magnitudes are reset to their setpoints.
    std::vector<Complex> initial_voltages;
};

struct BusResult {
    int id = 0;
    double vm_pu = 1.0;
    double va_deg = 0.0;
    double p_injection_mw = 0.0;   // net injection into the network
    double q_injection_mvar = 0.0;
};

struct BranchFlow {
    int id = 0;
    bool in_service = true;
    Complex s_from_mva;  // leaving from_bus into the branch
    Complex s_to_mva;    // leaving to_bus into the branch
    double current_pu = 0.0;  // |I| at the from end
    double loss_mw = 0.0;
    double loading_pct = 0.0;  // 0 for unrated branches

    double max_mva() const noexcept;
};

struct FlowSummary {
    std::vector<BranchFlow> branches;  // Network::branches order
    double total_loss_mw = 0.0;
};

// Buses are in BusIndex order; branches in Network::branches order.
struct PowerFlowSolution {
    std::vector<BusResult> buses;
    std::vector<BranchFlow> branches;
    double total_loss_mw = 0.0;
    double total_generation_mw = 0.0;  // scheduled plus slack output
    double total_load_mw = 0.0;
    int iterations = 0;
    double max_mismatch_pu = 0.0;
    bool converged = false;

    std::vector<Complex> voltages() const;
    const BusResult* find_bus(int id) const noexcept;
    const BranchFlow* find_branch(int id) const noexcept;
};

// Newton-Raphson in polar coordinates. Throws SolveError on divergence,
// singular Jacobian or a disconnected network.
PowerFlowSolution solve(const Network& net, const SolveOptions& opts = {});

// Branch flows for given bus voltages (BusIndex order, p.u.).
FlowSummary branch_flows(const Network& net, std::span<const Complex> voltages,
                         bool use_correction);

// Diagnostic loss r * Re{K(phi) e^{j phi}} * I^2 (p.u.). This is not what the
// solver reports; solved losses come from branch_flows.
double pst_angle_weighted_loss(double r_pu, const CorrectionTable& table, double phase_shift_deg,
                               double current_pu);

}  // namespace pstflow
