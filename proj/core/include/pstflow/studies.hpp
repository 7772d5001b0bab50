#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pstflow/ac_powerflow.hpp"
#include "pstflow/grid_model.hpp"

namespace pstflow {

enum class VoltageLimit { low, high };

struct VoltageViolation {
    int bus_id = 0;
    double vm_pu = 0.0;
    VoltageLimit limit = VoltageLimit::low;
    double deficit_pu = 0.0;  // distance beyond the violated limit, > 0
};

struct ThermalViolation {
    int branch_id = 0;
    double loading_pct = 0.0;
    double rating_mva = 0.0;
};

struct ViolationReport {
    std::vector<VoltageViolation> voltage;  // ascending bus id
    std::vector<ThermalViolation> thermal;  // case branch order

    std::size_t low_voltage_count() const noexcept;
    std::size_t high_voltage_count() const noexcept;
    std::size_t thermal_count() const noexcept { return thermal.size(); }
    bool empty() const noexcept { return voltage.empty() && thermal.empty(); }
};

// Strict comparisons: a bus exactly at vmin/vmax or a branch at exactly 100%
// is not a violation. Throws InvalidArgument for an unconverged solution.
ViolationReport scan_violations(const Network& net, const PowerFlowSolution& sol);

struct SweepOptions {
    int pst_branch = 0;
    double from_deg = 0.0;
    double to_deg = 0.0;
    double step_deg = 1.0;
    // Branch whose flow is reported and excluded from the extra-violation
    // count; defaults to the PST itself.
    std::optional<int> track_branch;
    std::vector<int> track_buses;
    SolveOptions solve;
    // Evaluate angle points on worker threads. Rows are identical either way.
    bool parallel = false;
};

struct SweepRow {
    double phase_shift_deg = 0.0;
    bool corrected = false;
    bool converged = false;
    std::string failure;  // solver message when !converged
    double target_flow_mw = 0.0;
    double target_loading_pct = 0.0;
    double total_loss_mw = 0.0;
    std::size_t extra_line_violations = 0;
    std::size_t low_v_count = 0;
    std::size_t high_v_count = 0;
    std::vector<double> tracked_vm_pu;  // SweepOptions::track_buses order
};

// Angle grid from_deg, from_deg + step, ... up to to_deg inclusive.
std::vector<double> sweep_angles(double from_deg, double to_deg, double step_deg);

// One row per (angle, corrected) pair, ordered by angle then uncorrected
// before corrected. Unconverged points become failed rows.
std::vector<SweepRow> angle_sweep(const Network& net, const SweepOptions& opts);

enum class ContingencyStatus { solved, islanded, failed };

struct ContingencyRecord {
    int outage_branch = 0;
    ContingencyStatus status = ContingencyStatus::failed;
    std::string failure;
    std::optional<ViolationReport> report;  // present iff solved
    double worst_voltage_pu = 0.0;   // lowest bus magnitude when solved
    double worst_loading_pct = 0.0;  // highest branch loading when solved

    bool converged() const noexcept { return status == ContingencyStatus::solved; }
    bool islanded() const noexcept { return status == ContingencyStatus::islanded; }
};

// N-1 screening: each outage is applied to a private copy of `net`.
std::vector<ContingencyRecord> contingency_scan(const Network& net, std::span<const int> outages,
                                                const SolveOptions& opts = {},
                                                bool parallel = false);

// Ids of every in-service branch, in case order.
std::vector<int> in_service_branch_ids(const Network& net);

}  // namespace pstflow
