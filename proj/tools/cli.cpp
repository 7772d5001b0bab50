#include "cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <vector>

#include "CLI11.hpp"
#include "pstflow/pstflow.hpp"

namespace pstflow::cli {

namespace {

enum class Format { csv, json };

struct Common {
    std::string case_path;
    std::string format = "csv";
    std::string output;
    bool no_correction = false;
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("case", common.case_path, "Case file (JSON)")->required();
    cmd->add_option("--format", common.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", common.output, "Write the report to PATH instead of stdout");
    cmd->add_flag("--no-correction", common.no_correction,
                  "Ignore impedance correction tables on every transformer");
}

void add_solver_flags(CLI::App* cmd, SolveOptions& opts) {
    cmd->add_option("--tol", opts.tolerance_pu, "Mismatch tolerance (p.u.)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", opts.max_iterations, "Newton iteration limit")
        ->check(CLI::Range(1, 1000000));
}

Network load(const Common& common) {
    auto net = load_case_file(common.case_path);
    return common.no_correction ? without_correction_tables(std::move(net)) : net;
}

int emit(const Common& common, const std::string& text, std::ostream& out, std::ostream& err) {
    if (common.output.empty()) {
        out << text;
        out.flush();
        return kOk;
    }
    std::ofstream file(common.output, std::ios::binary);
    if (!file) {
        err << "error: cannot write '" << common.output << "'\n";
        return kUsage;
    }
    file << text;
    return kOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"pstflow: power flow studies for phase-shifting transformers with impedance "
                 "correction tables",
                 "pstflow"};
    app.require_subcommand(1);

    Common common;
    SolveOptions solve_opts;

    auto* solve_cmd = app.add_subcommand("solve", "AC power flow; bus and branch report");
    add_common(solve_cmd, common);
    add_solver_flags(solve_cmd, solve_opts);

    auto* scan_cmd = app.add_subcommand("scan", "AC power flow followed by a violation scan");
    add_common(scan_cmd, common);
    add_solver_flags(scan_cmd, solve_opts);

    SweepOptions sweep;
    int track_branch = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "PST angle sweep with and without correction");
    add_common(sweep_cmd, common);
    add_solver_flags(sweep_cmd, solve_opts);
    sweep_cmd->add_option("--pst", sweep.pst_branch, "PST branch id")->required();
    sweep_cmd->add_option("--from", sweep.from_deg, "First angle (degrees)")->required();
    sweep_cmd->add_option("--to", sweep.to_deg, "Last angle (degrees)")->required();
    sweep_cmd->add_option("--step", sweep.step_deg, "Angle step (degrees)")
        ->check(CLI::PositiveNumber);
    auto* track_branch_opt =
        sweep_cmd->add_option("--track-branch", track_branch, "Branch whose flow is reported");
    sweep_cmd->add_option("--track-bus", sweep.track_buses, "Bus whose voltage is reported")
        ->allow_extra_args(true);

    std::string seller;
    std::string buyer;
    auto* atc_cmd = app.add_subcommand("atc", "DC available transfer capability between areas");
    add_common(atc_cmd, common);
    atc_cmd->add_option("--seller", seller, "Seller area")->required();
    atc_cmd->add_option("--buyer", buyer, "Buyer area")->required();

    bool all_branches = false;
    std::vector<int> outage_ids;
    auto* ctg_cmd = app.add_subcommand("contingency", "N-1 branch outage screening");
    add_common(ctg_cmd, common);
    add_solver_flags(ctg_cmd, solve_opts);
    auto* all_opt = ctg_cmd->add_flag("--all", all_branches, "Outage every in-service branch");
    auto* branch_opt = ctg_cmd->add_option("--branch", outage_ids, "Branch to outage")
                           ->allow_extra_args(true);
    all_opt->excludes(branch_opt);

    auto* ybus_cmd = app.add_subcommand("ybus", "Dump the bus admittance matrix");
    add_common(ybus_cmd, common);

    std::vector<const char*> argv{"pstflow"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    const bool json = common.format == "json";
    try {
        const Network net = load(common);
        solve_opts.use_correction = !common.no_correction;

        if (solve_cmd->parsed()) {
            const auto sol = solve(net, solve_opts);
            return emit(common, json ? report::solution_json(sol) : report::solution_csv(sol), out, err);
        }
        if (scan_cmd->parsed()) {
            const auto sol = solve(net, solve_opts);
            const auto viol = scan_violations(net, sol);
            return emit(common, json ? report::violations_json(viol) : report::violations_csv(viol),
                        out, err);
        }
        if (sweep_cmd->parsed()) {
            if (*track_branch_opt) {
                sweep.track_branch = track_branch;
            }
            sweep.solve = solve_opts;
            const auto rows = angle_sweep(net, sweep);
            return emit(common,
                        json ? report::sweep_json(rows, sweep.track_buses)
                             : report::sweep_csv(rows, sweep.track_buses),
                        out, err);
        }
        if (atc_cmd->parsed()) {
            const auto transfer = make_transfer(net, seller, buyer);
            std::vector<report::AtcEntry> entries;
            if (!common.no_correction) {
                entries.push_back({transfer.name, true, compute_atc(net, transfer, true)});
            }
            entries.push_back({transfer.name, false, compute_atc(net, transfer, false)});
            return emit(common, json ? report::atc_json(entries) : report::atc_csv(entries), out, err);
        }
        if (ctg_cmd->parsed()) {
            const auto ids = outage_ids.empty() ? in_service_branch_ids(net) : outage_ids;
            const auto records = contingency_scan(net, ids, solve_opts);
            return emit(common,
                        json ? report::contingency_json(records) : report::contingency_csv(records),
                        out, err);
        }
        if (ybus_cmd->parsed()) {
            const auto ybus = assemble_ybus(net, !common.no_correction);
            return emit(common, json ? report::ybus_json(ybus) : report::ybus_text(ybus), out, err);
        }
    } catch (const CaseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const SolveError& e) {
        err << "error: " << e.what() << "\n";
        return kAnalysisFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kAnalysisFailure;
    }
    return kUsage;
}

}  // namespace pstflow::cli
