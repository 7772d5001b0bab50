#include "pstflow/grid_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "pstflow/error.hpp"

namespace pstflow {

const Bus* Network::find_bus(int id) const noexcept {
    auto it = std::find_if(buses.begin(), buses.end(), [id](const Bus& b) { return b.id == id; });
    return it == buses.end() ? nullptr : &*it;
}

const Branch* Network::find_branch(int id) const noexcept {
    auto it = std::find_if(branches.begin(), branches.end(),
                           [id](const Branch& b) { return b.id == id; });
    return it == branches.end() ? nullptr : &*it;
}

Branch* Network::find_branch(int id) noexcept {
    auto it = std::find_if(branches.begin(), branches.end(),
                           [id](const Branch& b) { return b.id == id; });
    return it == branches.end() ? nullptr : &*it;
}

const CorrectionTable* Network::find_table(const std::string& id) const noexcept {
    auto it = std::find_if(correction_tables.begin(), correction_tables.end(),
                           [&id](const CorrectionTable& t) { return t.id == id; });
    return it == correction_tables.end() ? nullptr : &*it;
}

BusIndex::BusIndex(const Network& net) {
    records_.resize(net.buses.size());
    std::iota(records_.begin(), records_.end(), std::size_t{0});
    std::stable_sort(records_.begin(), records_.end(), [&net](std::size_t a, std::size_t b) {
        return net.buses[a].id < net.buses[b].id;
    });
    ids_.reserve(records_.size());
    for (auto r : records_) {
        ids_.push_back(net.buses[r].id);
    }
}

std::optional<std::size_t> BusIndex::find(int id) const noexcept {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t BusIndex::position(int id) const {
    if (auto pos = find(id)) {
        return *pos;
    }
    throw InvalidArgument("unknown bus reference " + std::to_string(id));
}

namespace {

void add(std::vector<Finding>& out, std::string message, Severity severity = Severity::error) {
    out.push_back({severity, std::move(message)});
}

std::string bus_tag(int id) { return "bus " + std::to_string(id); }
std::string branch_tag(int id) { return "branch " + std::to_string(id); }

void check_buses(const Network& net, std::vector<Finding>& out) {
    std::set<int> seen;
    for (const auto& bus : net.buses) {
        if (!seen.insert(bus.id).second) {
            add(out, "duplicate bus id " + std::to_string(bus.id));
        }
        if (bus.id <= 0) {
            add(out, bus_tag(bus.id) + ": id must be positive");
        }
        if (!(bus.base_kv > 0.0)) {
            add(out, bus_tag(bus.id) + ": base_kv must be positive");
        }
        if (!(bus.vmin_pu < bus.vmax_pu)) {
            add(out, bus_tag(bus.id) + ": vmin_pu must be below vmax_pu");
        }
        if (bus.v_setpoint_pu && !(*bus.v_setpoint_pu > 0.0)) {
            add(out, bus_tag(bus.id) + ": v_setpoint_pu must be positive");
        }
    }
}

void check_tables(const Network& net, std::vector<Finding>& out) {
    std::set<std::string> seen;
    for (const auto& table : net.correction_tables) {
        const std::string tag = "correction table '" + table.id + "'";
        if (!seen.insert(table.id).second) {
            add(out, "duplicate correction table id '" + table.id + "'");
        }
        if (table.points.size() < 2) {
            add(out, tag + ": table has fewer than 2 points");
        }
        for (std::size_t i = 1; i < table.points.size(); ++i) {
            if (!(table.points[i].angle_deg > table.points[i - 1].angle_deg)) {
                add(out, tag + ": table angles not strictly increasing");
                break;
            }
        }
        for (const auto& p : table.points) {
            if (!(p.factor > 0.0) || !std::isfinite(p.factor)) {
                add(out, tag + ": table factors must be positive");
                break;
            }
        }
    }
}

void check_branches(const Network& net, std::vector<Finding>& out) {
    std::set<int> seen;
    for (const auto& br : net.branches) {
        const std::string tag = branch_tag(br.id);
        if (!seen.insert(br.id).second) {
            add(out, "duplicate branch id " + std::to_string(br.id));
        }
        if (br.id <= 0) {
            add(out, tag + ": id must be positive");
        }
        if (!net.find_bus(br.from_bus)) {
            add(out, tag + ": unknown bus reference " + std::to_string(br.from_bus));
        }
        if (!net.find_bus(br.to_bus)) {
            add(out, tag + ": unknown bus reference " + std::to_string(br.to_bus));
        }
        if (br.from_bus == br.to_bus) {
            add(out, tag + ": from_bus equals to_bus");
        }
        if (br.r_pu < 0.0) {
            add(out, tag + ": negative resistance");
        }
        if (br.r_pu * br.r_pu + br.x_pu * br.x_pu == 0.0) {
            add(out, tag + ": zero impedance");
        }
        if (br.rating_mva < 0.0) {
            add(out, tag + ": negative rating");
        }
        if (const auto& tx = br.transformer) {
            if (!(tx->tap_ratio > 0.0)) {
                add(out, tag + ": tap_ratio must be positive");
            }
            if (!(tx->phase_shift_deg >= -90.0 && tx->phase_shift_deg <= 90.0)) {
                add(out, tag + ": phase_shift_deg outside [-90, 90]");
            }
            if (tx->correction_table && !net.find_table(*tx->correction_table)) {
                add(out, tag + ": unknown correction table '" + *tx->correction_table + "'");
            }
        }
    }
}

void check_injections(const Network& net, std::vector<Finding>& out) {
    for (std::size_t i = 0; i < net.generators.size(); ++i) {
        const auto& g = net.generators[i];
        const std::string tag = "generator " + std::to_string(i);
        if (!net.find_bus(g.bus)) {
            add(out, tag + ": unknown bus reference " + std::to_string(g.bus));
        }
        if (g.q_min_mvar > g.q_max_mvar) {
            add(out, tag + ": q_min_mvar exceeds q_max_mvar");
        }
        if (g.p_max_mw < g.p_mw) {
            add(out, tag + ": p_max_mw below p_mw");
        }
    }
    for (std::size_t i = 0; i < net.loads.size(); ++i) {
        if (!net.find_bus(net.loads[i].bus)) {
            add(out, "load " + std::to_string(i) + ": unknown bus reference " +
                         std::to_string(net.loads[i].bus));
        }
    }
}

void check_slack(const Network& net, std::vector<Finding>& out) {
    if (net.buses.empty()) {
        return;
    }
    const auto slack_total = std::count_if(net.buses.begin(), net.buses.end(),
                                           [](const Bus& b) { return b.kind == BusKind::slack; });
    if (slack_total == 0) {
        add(out, "no slack bus");
        return;
    }
    // Island analysis needs resolvable branch endpoints; skip it otherwise.
    for (const auto& br : net.branches) {
        if (!net.find_bus(br.from_bus) || !net.find_bus(br.to_bus)) {
            return;
        }
    }
    BusIndex index(net);
    if (std::adjacent_find(index.ids().begin(), index.ids().end()) != index.ids().end()) {
        return;
    }
    const auto labels = island_labels(net, index);
    const std::size_t islands =
        labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<int> slack_count(islands, 0);
    std::vector<int> first_bus(islands, 0);
    for (std::size_t pos = labels.size(); pos-- > 0;) {
        first_bus[labels[pos]] = index.id_at(pos);
        if (net.buses[index.record(pos)].kind == BusKind::slack) {
            ++slack_count[labels[pos]];
        }
    }
    for (std::size_t isl = 0; isl < islands; ++isl) {
        if (slack_count[isl] == 0) {
            add(out, "no slack bus in island containing bus " + std::to_string(first_bus[isl]));
        } else if (slack_count[isl] > 1) {
            add(out, "multiple slack buses in island containing bus " +
                         std::to_string(first_bus[isl]));
        }
    }
}

}  // namespace

std::vector<Finding> validate(const Network& net) {
    std::vector<Finding> out;
    if (!(net.base_mva > 0.0)) {
        add(out, "base_mva must be positive");
    }
    if (net.buses.empty()) {
        add(out, "network has no buses");
    }
    check_buses(net, out);
    check_tables(net, out);
    check_branches(net, out);
    check_injections(net, out);
    check_slack(net, out);
    return out;
}

bool has_errors(std::span<const Finding> findings) noexcept {
    return std::any_of(findings.begin(), findings.end(),
                       [](const Finding& f) { return f.severity == Severity::error; });
}

double to_per_unit(double mw_or_mvar, double base_mva) {
    if (!(base_mva > 0.0)) {
        throw InvalidArgument("base_mva must be positive");
    }
    return mw_or_mvar / base_mva;
}

std::vector<std::size_t> island_labels(const Network& net, const BusIndex& index) {
    const std::size_t n = index.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto root = [&parent](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const auto& br : net.branches) {
        if (!br.in_service) {
            continue;
        }
        auto a = root(index.position(br.from_bus));
        auto b = root(index.position(br.to_bus));
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label_of_root(n, unset);
    std::vector<std::size_t> labels(n);
    std::size_t next = 0;
    for (std::size_t v = 0; v < n; ++v) {
        auto r = root(v);
        if (label_of_root[r] == unset) {
            label_of_root[r] = next++;
        }
        labels[v] = label_of_root[r];
    }
    return labels;
}

bool is_connected(const Network& net) {
    BusIndex index(net);
    if (index.size() == 0) {
        return false;
    }
    const auto labels = island_labels(net, index);
    return std::all_of(labels.begin(), labels.end(), [](std::size_t l) { return l == 0; });
}

Network without_correction_tables(Network net) {
    for (auto& br : net.branches) {
        if (br.transformer) {
            br.transformer->correction_table.reset();
        }
    }
    return net;
}

}  // namespace pstflow
