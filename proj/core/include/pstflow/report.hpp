#pragma once

#include <span>
#include <string>
#include <vector>

#include "pstflow/ac_powerflow.hpp"
#include "pstflow/dc_atc.hpp"
#include "pstflow/network_matrix.hpp"
#include "pstflow/studies.hpp"

// Text serializations shared by the CLI and golden tests. Every number is
// written with six decimals (CSV) or rounded to six decimals (JSON); negative
// zero is normalized so repeated runs are byte-identical.
namespace pstflow::report {

std::string fixed6(double value);

std::string solution_csv(const PowerFlowSolution& sol);
std::string solution_json(const PowerFlowSolution& sol);

std::string violations_csv(const ViolationReport& report);
std::string violations_json(const ViolationReport& report);

std::string sweep_csv(std::span<const SweepRow> rows, std::span<const int> track_buses);
std::string sweep_json(std::span<const SweepRow> rows, std::span<const int> track_buses);

struct AtcEntry {
    std::string transfer_name;
    bool use_correction = true;
    AtcResult result;
};

std::string atc_csv(std::span<const AtcEntry> entries);
std::string atc_json(std::span<const AtcEntry> entries);

std::string contingency_csv(std::span<const ContingencyRecord> records);
std::string contingency_json(std::span<const ContingencyRecord> records);

// Same content as AdmittanceMatrix::to_text(), as a JSON array of
// [i, k, re, im] rows.
std::string ybus_text(const AdmittanceMatrix& ybus);
std::string ybus_json(const AdmittanceMatrix& ybus);

}  // namespace pstflow::report
