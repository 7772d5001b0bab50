#include "pstflow/case_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pstflow/error.hpp"

namespace pstflow {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw CaseError(where + ": unknown key '" + key + "'");
        }
    }
}

const json& require(const json& obj, const std::string& where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw CaseError(where + ": missing required key '" + key + "'");
    }
    return *it;
}

const json& require_object(const json& value, const std::string& where) {
    if (!value.is_object()) {
        throw CaseError(where + ": expected an object");
    }
    return value;
}

const json& require_array(const json& value, const std::string& where) {
    if (!value.is_array()) {
        throw CaseError(where + ": expected an array");
    }
    return value;
}

double as_number(const json& value, const std::string& where) {
    if (!value.is_number()) {
        throw CaseError(where + ": malformed number");
    }
    const double v = value.get<double>();
    if (!std::isfinite(v)) {
        throw CaseError(where + ": malformed number");
    }
    return v;
}

int as_id(const json& value, const std::string& where) {
    if (!value.is_number_integer()) {
        throw CaseError(where + ": malformed number (expected an integer id)");
    }
    const auto v = value.get<std::int64_t>();
    if (v <= 0 || v > std::numeric_limits<int>::max()) {
        throw CaseError(where + ": id must be a positive integer");
    }
    return static_cast<int>(v);
}

std::string as_text(const json& value, const std::string& where) {
    if (!value.is_string()) {
        throw CaseError(where + ": expected a string");
    }
    return value.get<std::string>();
}

double number_or(const json& obj, const std::string& where, const char* key, double fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : as_number(*it, where + "." + key);
}

std::optional<double> optional_number(const json& obj, const std::string& where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return std::nullopt;
    }
    return as_number(*it, where + "." + key);
}

BusKind parse_kind(const json& value, const std::string& where) {
    const auto text = as_text(value, where);
    if (text == "slack") {
        return BusKind::slack;
    }
    if (text == "pv") {
        return BusKind::pv;
    }
    if (text == "pq") {
        return BusKind::pq;
    }
    throw CaseError(where + ": unknown bus kind '" + text + "'");
}

bool parse_status(const json& value, const std::string& where) {
    if (value.is_boolean()) {
        return value.get<bool>();
    }
    if (value.is_string()) {
        const auto text = value.get<std::string>();
        if (text == "in") {
            return true;
        }
        if (text == "out") {
            return false;
        }
    }
    throw CaseError(where + ": status must be true/false or \"in\"/\"out\"");
}

Bus parse_bus(const json& obj, const std::string& where) {
    require_object(obj, where);
    reject_unknown_keys(obj, where,
                        {"id", "name", "area", "base_kv", "kind", "v_setpoint_pu", "vmin_pu",
                         "vmax_pu"});
    Bus bus;
    bus.id = as_id(require(obj, where, "id"), where + ".id");
    if (auto it = obj.find("name"); it != obj.end()) {
        bus.name = as_text(*it, where + ".name");
    }
    if (auto it = obj.find("area"); it != obj.end()) {
        bus.area = as_text(*it, where + ".area");
    }
    bus.base_kv = as_number(require(obj, where, "base_kv"), where + ".base_kv");
    bus.kind = parse_kind(require(obj, where, "kind"), where + ".kind");
    bus.v_setpoint_pu = optional_number(obj, where, "v_setpoint_pu");
    bus.vmin_pu = number_or(obj, where, "vmin_pu", 0.95);
    bus.vmax_pu = number_or(obj, where, "vmax_pu", 1.05);
    return bus;
}

TransformerExt parse_transformer(const json& obj, const std::string& where) {
    require_object(obj, where);
    reject_unknown_keys(obj, where, {"tap_ratio", "phase_shift_deg", "correction_table"});
    TransformerExt tx;
    tx.tap_ratio = number_or(obj, where, "tap_ratio", 1.0);
    tx.phase_shift_deg = number_or(obj, where, "phase_shift_deg", 0.0);
    if (auto it = obj.find("correction_table"); it != obj.end()) {
        tx.correction_table = as_text(*it, where + ".correction_table");
    }
    return tx;
}

Branch parse_branch(const json& obj, const std::string& where) {
    require_object(obj, where);
    reject_unknown_keys(obj, where,
                        {"id", "from_bus", "to_bus", "r_pu", "x_pu", "b_pu", "rating_mva",
                         "status", "transformer"});
    Branch br;
    br.id = as_id(require(obj, where, "id"), where + ".id");
    br.from_bus = as_id(require(obj, where, "from_bus"), where + ".from_bus");
    br.to_bus = as_id(require(obj, where, "to_bus"), where + ".to_bus");
    br.r_pu = as_number(require(obj, where, "r_pu"), where + ".r_pu");
    br.x_pu = as_number(require(obj, where, "x_pu"), where + ".x_pu");
    br.b_pu = number_or(obj, where, "b_pu", 0.0);
    br.rating_mva = number_or(obj, where, "rating_mva", 0.0);
    if (auto it = obj.find("status"); it != obj.end()) {
        br.in_service = parse_status(*it, where + ".status");
    }
    if (auto it = obj.find("transformer"); it != obj.end()) {
        br.transformer = parse_transformer(*it, where + ".transformer");
    }
    return br;
}

Generator parse_generator(const json& obj, const std::string& where) {
    require_object(obj, where);
    reject_unknown_keys(obj, where,
                        {"bus", "p_mw", "q_min_mvar", "q_max_mvar", "p_max_mw", "v_setpoint_pu"});
    Generator g;
    g.bus = as_id(require(obj, where, "bus"), where + ".bus");
    g.p_mw = number_or(obj, where, "p_mw", 0.0);
    g.q_min_mvar = number_or(obj, where, "q_min_mvar", -std::numeric_limits<double>::infinity());
    g.q_max_mvar = number_or(obj, where, "q_max_mvar", std::numeric_limits<double>::infinity());
    g.p_max_mw = number_or(obj, where, "p_max_mw", g.p_mw);
    g.v_setpoint_pu = optional_number(obj, where, "v_setpoint_pu");
    return g;
}

Load parse_load(const json& obj, const std::string& where) {
    require_object(obj, where);
    reject_unknown_keys(obj, where, {"bus", "p_mw", "q_mvar"});
    Load l;
    l.bus = as_id(require(obj, where, "bus"), where + ".bus");
    l.p_mw = number_or(obj, where, "p_mw", 0.0);
    l.q_mvar = number_or(obj, where, "q_mvar", 0.0);
    return l;
}

CorrectionTable parse_table(const json& obj, const std::string& where) {
    require_object(obj, where);
    reject_unknown_keys(obj, where, {"id", "points"});
    CorrectionTable table;
    table.id = as_text(require(obj, where, "id"), where + ".id");
    const auto& points = require_array(require(obj, where, "points"), where + ".points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string pw = where + ".points[" + std::to_string(i) + "]";
        const auto& p = points[i];
        if (!p.is_array() || p.size() != 2) {
            throw CaseError(pw + ": expected [angle_deg, factor]");
        }
        table.points.push_back({as_number(p[0], pw + "[0]"), as_number(p[1], pw + "[1]")});
    }
    return table;
}

template <typename T, typename Fn>
std::vector<T> parse_list(const json& root, const char* key, Fn parse_one) {
    std::vector<T> out;
    auto it = root.find(key);
    if (it == root.end()) {
        return out;
    }
    require_array(*it, key);
    out.reserve(it->size());
    for (std::size_t i = 0; i < it->size(); ++i) {
        out.push_back(parse_one((*it)[i], std::string(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < std::min(offset > 0 ? offset - 1 : 0, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}  // namespace

Network parse_case(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte);
        throw CaseError("syntax error at line " + std::to_string(line) + ", column " +
                            std::to_string(column) + " (byte " + std::to_string(e.byte) + ")",
                        e.byte, line, column);
    }

    require_object(root, "case");
    reject_unknown_keys(root, "case",
                        {"base_mva", "buses", "branches", "generators", "loads",
                         "correction_tables"});

    Network net;
    net.base_mva = as_number(require(root, "case", "base_mva"), "base_mva");
    net.buses = parse_list<Bus>(root, "buses", parse_bus);
    net.branches = parse_list<Branch>(root, "branches", parse_branch);
    net.generators = parse_list<Generator>(root, "generators", parse_generator);
    net.loads = parse_list<Load>(root, "loads", parse_load);
    net.correction_tables = parse_list<CorrectionTable>(root, "correction_tables", parse_table);

    const auto findings = validate(net);
    if (has_errors(findings)) {
        std::string message;
        for (const auto& f : findings) {
            if (f.severity != Severity::error) {
                continue;
            }
            if (!message.empty()) {
                message += "; ";
            }
            message += f.message;
        }
        throw CaseError(message);
    }
    return net;
}

Network load_case_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CaseError("cannot open case file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_case(buffer.str());
}

std::string serialize_case(const Network& net) {
    json root = json::object();
    root["base_mva"] = net.base_mva;

    json buses = json::array();
    for (const auto& b : net.buses) {
        json j = {{"id", b.id}, {"base_kv", b.base_kv}};
        if (!b.name.empty()) {
            j["name"] = b.name;
        }
        if (!b.area.empty()) {
            j["area"] = b.area;
        }
        j["kind"] = b.kind == BusKind::slack ? "slack" : b.kind == BusKind::pv ? "pv" : "pq";
        if (b.v_setpoint_pu) {
            j["v_setpoint_pu"] = *b.v_setpoint_pu;
        }
        j["vmin_pu"] = b.vmin_pu;
        j["vmax_pu"] = b.vmax_pu;
        buses.push_back(std::move(j));
    }
    root["buses"] = std::move(buses);

    json branches = json::array();
    for (const auto& br : net.branches) {
        json j = {{"id", br.id},     {"from_bus", br.from_bus}, {"to_bus", br.to_bus},
                  {"r_pu", br.r_pu}, {"x_pu", br.x_pu},         {"b_pu", br.b_pu},
                  {"rating_mva", br.rating_mva}, {"status", br.in_service}};
        if (br.transformer) {
            json tx = {{"tap_ratio", br.transformer->tap_ratio},
                       {"phase_shift_deg", br.transformer->phase_shift_deg}};
            if (br.transformer->correction_table) {
                tx["correction_table"] = *br.transformer->correction_table;
            }
            j["transformer"] = std::move(tx);
        }
        branches.push_back(std::move(j));
    }
    root["branches"] = std::move(branches);

    json generators = json::array();
    for (const auto& g : net.generators) {
        json j = {{"bus", g.bus}, {"p_mw", g.p_mw}, {"p_max_mw", g.p_max_mw}};
        if (std::isfinite(g.q_min_mvar)) {
            j["q_min_mvar"] = g.q_min_mvar;
        }
        if (std::isfinite(g.q_max_mvar)) {
            j["q_max_mvar"] = g.q_max_mvar;
        }
        if (g.v_setpoint_pu) {
            j["v_setpoint_pu"] = *g.v_setpoint_pu;
        }
        generators.push_back(std::move(j));
    }
    root["generators"] = std::move(generators);

    json loads = json::array();
    for (const auto& l : net.loads) {
        loads.push_back({{"bus", l.bus}, {"p_mw", l.p_mw}, {"q_mvar", l.q_mvar}});
    }
    root["loads"] = std::move(loads);

    json tables = json::array();
    for (const auto& t : net.correction_tables) {
        json points = json::array();
        for (const auto& p : t.points) {
            points.push_back({p.angle_deg, p.factor});
        }
        tables.push_back({{"id", t.id}, {"points", std::move(points)}});
    }
    root["correction_tables"] = std::move(tables);

    return root.dump(2) + "\n";
}

}  // namespace pstflow
