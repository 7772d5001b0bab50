#include "pstflow/studies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>

#include "pstflow/error.hpp"

namespace pstflow {

std::size_t ViolationReport::low_voltage_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(voltage.begin(), voltage.end(), [](const auto& v) {
        return v.limit == VoltageLimit::low;
    }));
}

std::size_t ViolationReport::high_voltage_count() const noexcept {
    return voltage.size() - low_voltage_count();
}

ViolationReport scan_violations(const Network& net, const PowerFlowSolution& sol) {
    if (!sol.converged) {
        throw InvalidArgument("cannot scan an unconverged solution");
    }
    if (sol.branches.size() != net.branches.size()) {
        throw InvalidArgument("solution does not match the network");
    }
    ViolationReport report;
    for (const auto& b : sol.buses) {
        const auto* bus = net.find_bus(b.id);
        if (!bus) {
            throw InvalidArgument("solution does not match the network");
        }
        if (b.vm_pu < bus->vmin_pu) {
            report.voltage.push_back({b.id, b.vm_pu, VoltageLimit::low, bus->vmin_pu - b.vm_pu});
        } else if (b.vm_pu > bus->vmax_pu) {
            report.voltage.push_back({b.id, b.vm_pu, VoltageLimit::high, b.vm_pu - bus->vmax_pu});
        }
    }
    for (std::size_t j = 0; j < net.branches.size(); ++j) {
        const auto& br = net.branches[j];
        const auto& flow = sol.branches[j];
        if (!br.in_service || !br.is_rated()) {
            continue;
        }
        if (flow.max_mva() > br.rating_mva) {
            report.thermal.push_back({br.id, flow.loading_pct, br.rating_mva});
        }
    }
    return report;
}

std::vector<double> sweep_angles(double from_deg, double to_deg, double step_deg) {
    if (!(step_deg > 0.0)) {
        throw InvalidArgument("sweep step must be positive");
    }
    if (from_deg > to_deg) {
        throw InvalidArgument("sweep range is empty");
    }
    const auto count = static_cast<std::size_t>(std::floor((to_deg - from_deg) / step_deg + 1e-9)) + 1;
    std::vector<double> angles;
    angles.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        angles.push_back(from_deg + static_cast<double>(j) * step_deg);
    }
    return angles;
}

namespace {

// Evaluates `fn(i)` for i in [0, count) and returns results in index order.
template <typename T>
std::vector<T> evaluate_all(std::size_t count, bool parallel, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out;
    out.reserve(count);
    if (!parallel) {
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(fn(i));
        }
        return out;
    }
    std::vector<std::future<T>> pending;
    pending.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        pending.push_back(std::async(std::launch::async, fn, i));
    }
    for (auto& f : pending) {
        out.push_back(f.get());
    }
    return out;
}

SweepRow sweep_point(const Network& base, const SweepOptions& opts, int target, double phi,
                     bool corrected) {
    Network net = base;
    net.find_branch(opts.pst_branch)->transformer->phase_shift_deg = phi;

    SweepRow row;
    row.phase_shift_deg = phi;
    row.corrected = corrected;

    SolveOptions solve_opts = opts.solve;
    solve_opts.use_correction = corrected;
    PowerFlowSolution sol;
    try {
        sol = solve(net, solve_opts);
    } catch (const SolveError& e) {
        row.failure = e.what();
        return row;
    }
    row.converged = true;
    const auto* flow = sol.find_branch(target);
    row.target_flow_mw = flow->s_from_mva.real();
    row.target_loading_pct = flow->loading_pct;
    row.total_loss_mw = sol.total_loss_mw;

    const auto report = scan_violations(net, sol);
    row.extra_line_violations = static_cast<std::size_t>(std::count_if(
        report.thermal.begin(), report.thermal.end(),
        [target](const ThermalViolation& t) { return t.branch_id != target; }));
    row.low_v_count = report.low_voltage_count();
    row.high_v_count = report.high_voltage_count();
    for (int bus : opts.track_buses) {
        row.tracked_vm_pu.push_back(sol.find_bus(bus)->vm_pu);
    }
    return row;
}

}  // namespace

std::vector<SweepRow> angle_sweep(const Network& net, const SweepOptions& opts) {
    const auto* pst = net.find_branch(opts.pst_branch);
    if (!pst) {
        throw InvalidArgument("unknown PST branch " + std::to_string(opts.pst_branch));
    }
    if (!pst->is_transformer()) {
        throw InvalidArgument("branch " + std::to_string(opts.pst_branch) + " is not a transformer");
    }
    const int target = opts.track_branch.value_or(opts.pst_branch);
    if (!net.find_branch(target)) {
        throw InvalidArgument("unknown tracked branch " + std::to_string(target));
    }
    for (int bus : opts.track_buses) {
        if (!net.find_bus(bus)) {
            throw InvalidArgument("unknown tracked bus " + std::to_string(bus));
        }
    }
    const auto angles = sweep_angles(opts.from_deg, opts.to_deg, opts.step_deg);
    if (angles.front() < -90.0 || angles.back() > 90.0) {
        throw InvalidArgument("sweep angles must lie within [-90, 90] degrees");
    }

    return evaluate_all<SweepRow>(angles.size() * 2, opts.parallel, [&](std::size_t i) {
        return sweep_point(net, opts, target, angles[i / 2], i % 2 == 1);
    });
}

std::vector<int> in_service_branch_ids(const Network& net) {
    std::vector<int> ids;
    for (const auto& br : net.branches) {
        if (br.in_service) {
            ids.push_back(br.id);
        }
    }
    return ids;
}

std::vector<ContingencyRecord> contingency_scan(const Network& net, std::span<const int> outages,
                                                const SolveOptions& opts, bool parallel) {
    for (int id : outages) {
        const auto* br = net.find_branch(id);
        if (!br) {
            throw InvalidArgument("unknown outage branch " + std::to_string(id));
        }
        if (!br->in_service) {
            throw InvalidArgument("outage branch " + std::to_string(id) + " is already out of service");
        }
    }

    return evaluate_all<ContingencyRecord>(outages.size(), parallel, [&](std::size_t i) {
        ContingencyRecord rec;
        rec.outage_branch = outages[i];
        Network case_net = net;
        case_net.find_branch(outages[i])->in_service = false;
        if (!is_connected(case_net)) {
            rec.status = ContingencyStatus::islanded;
            return rec;
        }
        PowerFlowSolution sol;
        try {
            sol = solve(case_net, opts);
        } catch (const SolveError& e) {
            rec.status = ContingencyStatus::failed;
            rec.failure = e.what();
            return rec;
        }
        rec.status = ContingencyStatus::solved;
        rec.report = scan_violations(case_net, sol);
        rec.worst_voltage_pu = std::min_element(sol.buses.begin(), sol.buses.end(),
                                                [](const auto& a, const auto& b) {
                                                    return a.vm_pu < b.vm_pu;
                                                })->vm_pu;
        for (const auto& f : sol.branches) {
            rec.worst_loading_pct = std::max(rec.worst_loading_pct, f.loading_pct);
        }
        return rec;
    });
}

}  // namespace pstflow
