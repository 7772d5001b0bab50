#include "pstflow/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace pstflow::report {

using nlohmann::ordered_json;

namespace {

double round6(double v) {
    const double r = std::round(v * 1e6) / 1e6;
    return r == 0.0 ? 0.0 : r;
}

const char* flag(bool b) { return b ? "true" : "false"; }

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

const char* status_text(ContingencyStatus s) {
    switch (s) {
        case ContingencyStatus::solved:
            return "solved";
        case ContingencyStatus::islanded:
            return "islanded";
        case ContingencyStatus::failed:
            break;
    }
    return "failed";
}

}  // namespace

std::string fixed6(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", round6(value));
    return buf;
}

std::string solution_csv(const PowerFlowSolution& sol) {
    std::string out = "BUS\nid,vm_pu,va_deg\n";
    for (const auto& b : sol.buses) {
        out += std::to_string(b.id) + ',' + fixed6(b.vm_pu) + ',' + fixed6(b.va_deg) + '\n';
    }
    out += "BRANCH\nid,p_from_mw,q_from_mvar,p_to_mw,q_to_mvar,loading_pct\n";
    for (const auto& f : sol.branches) {
        out += std::to_string(f.id) + ',' + fixed6(f.s_from_mva.real()) + ',' +
               fixed6(f.s_from_mva.imag()) + ',' + fixed6(f.s_to_mva.real()) + ',' +
               fixed6(f.s_to_mva.imag()) + ',' + fixed6(f.loading_pct) + '\n';
    }
    return out;
}

std::string solution_json(const PowerFlowSolution& sol) {
    ordered_json j;
    j["converged"] = sol.converged;
    j["iterations"] = sol.iterations;
    j["max_mismatch_pu"] = sol.max_mismatch_pu;
    j["total_loss_mw"] = round6(sol.total_loss_mw);
    j["buses"] = ordered_json::array();
    for (const auto& b : sol.buses) {
        j["buses"].push_back({{"id", b.id}, {"vm_pu", round6(b.vm_pu)}, {"va_deg", round6(b.va_deg)}});
    }
    j["branches"] = ordered_json::array();
    for (const auto& f : sol.branches) {
        j["branches"].push_back({{"id", f.id},
                                 {"p_from_mw", round6(f.s_from_mva.real())},
                                 {"q_from_mvar", round6(f.s_from_mva.imag())},
                                 {"p_to_mw", round6(f.s_to_mva.real())},
                                 {"q_to_mvar", round6(f.s_to_mva.imag())},
                                 {"loading_pct", round6(f.loading_pct)}});
    }
    return dump(j);
}

std::string violations_csv(const ViolationReport& report) {
    std::string out = "SUMMARY\nlow_v_count,high_v_count,thermal_count\n";
    out += std::to_string(report.low_voltage_count()) + ',' +
           std::to_string(report.high_voltage_count()) + ',' +
           std::to_string(report.thermal_count()) + '\n';
    out += "VOLTAGE\nbus_id,vm_pu,limit,deficit_pu\n";
    for (const auto& v : report.voltage) {
        out += std::to_string(v.bus_id) + ',' + fixed6(v.vm_pu) + ',' +
               (v.limit == VoltageLimit::low ? "low" : "high") + ',' + fixed6(v.deficit_pu) + '\n';
    }
    out += "THERMAL\nbranch_id,loading_pct,rating_mva\n";
    for (const auto& t : report.thermal) {
        out += std::to_string(t.branch_id) + ',' + fixed6(t.loading_pct) + ',' +
               fixed6(t.rating_mva) + '\n';
    }
    return out;
}

namespace {

ordered_json violations_object(const ViolationReport& report) {
    ordered_json j;
    j["low_v_count"] = report.low_voltage_count();
    j["high_v_count"] = report.high_voltage_count();
    j["thermal_count"] = report.thermal_count();
    j["voltage"] = ordered_json::array();
    for (const auto& v : report.voltage) {
        j["voltage"].push_back({{"bus_id", v.bus_id},
                                {"vm_pu", round6(v.vm_pu)},
                                {"limit", v.limit == VoltageLimit::low ? "low" : "high"},
                                {"deficit_pu", round6(v.deficit_pu)}});
    }
    j["thermal"] = ordered_json::array();
    for (const auto& t : report.thermal) {
        j["thermal"].push_back({{"branch_id", t.branch_id},
                                {"loading_pct", round6(t.loading_pct)},
                                {"rating_mva", round6(t.rating_mva)}});
    }
    return j;
}

}  // namespace

std::string violations_json(const ViolationReport& report) { return dump(violations_object(report)); }

std::string sweep_csv(std::span<const SweepRow> rows, std::span<const int> track_buses) {
    std::string out =
        "phi_deg,corrected,target_flow_mw,target_loading_pct,total_loss_mw,extra_line_violations,"
        "low_v_count,high_v_count";
    for (int bus : track_buses) {
        out += ",vm_pu_" + std::to_string(bus);
    }
    out += '\n';
    for (const auto& r : rows) {
        out += fixed6(r.phase_shift_deg) + ',' + flag(r.corrected);
        if (!r.converged) {
            // Failure marker in every measured column.
            for (std::size_t c = 0; c < 6 + track_buses.size(); ++c) {
                out += ",failed";
            }
            out += '\n';
            continue;
        }
        out += ',' + fixed6(r.target_flow_mw) + ',' + fixed6(r.target_loading_pct) + ',' +
               fixed6(r.total_loss_mw) + ',' + std::to_string(r.extra_line_violations) + ',' +
               std::to_string(r.low_v_count) + ',' + std::to_string(r.high_v_count);
        for (double vm : r.tracked_vm_pu) {
            out += ',' + fixed6(vm);
        }
        out += '\n';
    }
    return out;
}

std::string sweep_json(std::span<const SweepRow> rows, std::span<const int> track_buses) {
    ordered_json j = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json row;
        row["phi_deg"] = round6(r.phase_shift_deg);
        row["corrected"] = r.corrected;
        row["converged"] = r.converged;
        if (!r.converged) {
            row["failure"] = r.failure;
            j.push_back(std::move(row));
            continue;
        }
        row["target_flow_mw"] = round6(r.target_flow_mw);
        row["target_loading_pct"] = round6(r.target_loading_pct);
        row["total_loss_mw"] = round6(r.total_loss_mw);
        row["extra_line_violations"] = r.extra_line_violations;
        row["low_v_count"] = r.low_v_count;
        row["high_v_count"] = r.high_v_count;
        ordered_json tracked = ordered_json::object();
        for (std::size_t b = 0; b < track_buses.size(); ++b) {
            tracked[std::to_string(track_buses[b])] = round6(r.tracked_vm_pu[b]);
        }
        row["vm_pu"] = std::move(tracked);
        j.push_back(std::move(row));
    }
    return dump(j);
}

std::string atc_csv(std::span<const AtcEntry> entries) {
    std::string out = "ATC\ntransfer_name,use_correction,atc_mw,binding_branch\n";
    for (const auto& e : entries) {
        out += e.transfer_name + ',' + flag(e.use_correction) + ',' +
               (e.result.atc_mw ? fixed6(*e.result.atc_mw) : "unbounded") + ',' +
               (e.result.binding_branch ? std::to_string(*e.result.binding_branch) : "") + '\n';
    }
    for (const auto& e : entries) {
        out += std::string("BRANCH use_correction=") + flag(e.use_correction) +
               "\nbranch_id,base_flow_mw,ptdf,headroom_mw\n";
        for (const auto& b : e.result.branches) {
            out += std::to_string(b.branch_id) + ',' + fixed6(b.base_flow_mw) + ',' +
                   fixed6(b.ptdf) + ',' + (b.headroom_mw ? fixed6(*b.headroom_mw) : "unbounded") +
                   '\n';
        }
    }
    return out;
}

std::string atc_json(std::span<const AtcEntry> entries) {
    ordered_json j = ordered_json::array();
    for (const auto& e : entries) {
        ordered_json entry;
        entry["transfer_name"] = e.transfer_name;
        entry["use_correction"] = e.use_correction;
        entry["atc_mw"] = e.result.atc_mw ? ordered_json(round6(*e.result.atc_mw)) : ordered_json("unbounded");
        entry["binding_branch"] =
            e.result.binding_branch ? ordered_json(*e.result.binding_branch) : ordered_json(nullptr);
        entry["branches"] = ordered_json::array();
        for (const auto& b : e.result.branches) {
            entry["branches"].push_back(
                {{"branch_id", b.branch_id},
                 {"base_flow_mw", round6(b.base_flow_mw)},
                 {"ptdf", round6(b.ptdf)},
                 {"headroom_mw",
                  b.headroom_mw ? ordered_json(round6(*b.headroom_mw)) : ordered_json("unbounded")}});
        }
        j.push_back(std::move(entry));
    }
    return dump(j);
}

std::string contingency_csv(std::span<const ContingencyRecord> records) {
    std::string out = "outage_branch,status,worst_voltage_pu,worst_loading_pct,violation_count\n";
    for (const auto& r : records) {
        out += std::to_string(r.outage_branch) + ',' + status_text(r.status);
        if (r.report) {
            out += ',' + fixed6(r.worst_voltage_pu) + ',' + fixed6(r.worst_loading_pct) + ',' +
                   std::to_string(r.report->voltage.size() + r.report->thermal.size());
        } else {
            out += ",,,";
        }
        out += '\n';
    }
    return out;
}

std::string contingency_json(std::span<const ContingencyRecord> records) {
    ordered_json j = ordered_json::array();
    for (const auto& r : records) {
        ordered_json rec;
        rec["outage_branch"] = r.outage_branch;
        rec["status"] = status_text(r.status);
        if (r.report) {
            rec["worst_voltage_pu"] = round6(r.worst_voltage_pu);
            rec["worst_loading_pct"] = round6(r.worst_loading_pct);
            rec["violations"] = violations_object(*r.report);
        } else if (!r.failure.empty()) {
            rec["failure"] = r.failure;
        }
        j.push_back(std::move(rec));
    }
    return dump(j);
}

std::string ybus_text(const AdmittanceMatrix& ybus) { return ybus.to_text(); }

std::string ybus_json(const AdmittanceMatrix& ybus) {
    ordered_json j = ordered_json::array();
    const auto& ids = ybus.bus_ids();
    for (std::size_t i = 0; i < ybus.size(); ++i) {
        for (const auto& [k, v] : ybus.row(i)) {
            j.push_back({ids[i], ids[k], v.real() == 0.0 ? 0.0 : v.real(),
                         v.imag() == 0.0 ? 0.0 : v.imag()});
        }
    }
    return dump(j);
}

}  // namespace pstflow::report
