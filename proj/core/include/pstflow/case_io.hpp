#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pstflow/grid_model.hpp"

namespace pstflow {

// Parses a JSON case document. Unknown keys, malformed values, dangling
// references and any validate() error are reported as CaseError.
Network parse_case(std::string_view text);

Network load_case_file(const std::filesystem::path& path);

// Inverse of parse_case: parse_case(serialize_case(n)) == n for any valid n.
std::string serialize_case(const Network& net);

}  // namespace pstflow
