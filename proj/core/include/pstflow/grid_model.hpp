#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pstflow {

enum class BusKind { slack, pv, pq };

struct Bus {
    int id = 0;
    std::string name;
    std::string area;
    double base_kv = 0.0;
    BusKind kind = BusKind::pq;
    std::optional<double> v_setpoint_pu;  // meaningful for slack and pv buses
    double vmin_pu = 0.95;
    double vmax_pu = 1.05;

    bool operator==(const Bus&) const = default;
};

struct TransformerExt {
    double tap_ratio = 1.0;
    double phase_shift_deg = 0.0;
    std::optional<std::string> correction_table;

    bool operator==(const TransformerExt&) const = default;
};

// Series branch between from_bus (side i, tap side) and to_bus (side k).
// Impedances are per-unit on the network MVA base.
struct Branch {
    int id = 0;
    int from_bus = 0;
    int to_bus = 0;
    double r_pu = 0.0;
    double x_pu = 0.0;
    double b_pu = 0.0;
    double rating_mva = 0.0;  // 0 = unlimited
    bool in_service = true;
    std::optional<TransformerExt> transformer;

    bool is_transformer() const noexcept { return transformer.has_value(); }
    bool is_rated() const noexcept { return rating_mva > 0.0; }

    bool operator==(const Branch&) const = default;
};

struct Generator {
    int bus = 0;
    double p_mw = 0.0;
    double q_min_mvar = -std::numeric_limits<double>::infinity();
    double q_max_mvar = std::numeric_limits<double>::infinity();
    double p_max_mw = 0.0;
    std::optional<double> v_setpoint_pu;

    bool operator==(const Generator&) const = default;
};

struct Load {
    int bus = 0;
    double p_mw = 0.0;
    double q_mvar = 0.0;

    bool operator==(const Load&) const = default;
};

struct CorrectionPoint {
    double angle_deg = 0.0;
    double factor = 1.0;

    bool operator==(const CorrectionPoint&) const = default;
};

// Breakpoints of an angle-dependent impedance scale factor K(phi).
struct CorrectionTable {
    std::string id;
    std::vector<CorrectionPoint> points;

    bool operator==(const CorrectionTable&) const = default;
};

struct Network {
    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Generator> generators;
    std::vector<Load> loads;
    std::vector<CorrectionTable> correction_tables;

    const Bus* find_bus(int id) const noexcept;
    const Branch* find_branch(int id) const noexcept;
    Branch* find_branch(int id) noexcept;
    const CorrectionTable* find_table(const std::string& id) const noexcept;

    bool operator==(const Network&) const = default;
};

// Dense 0..n-1 numbering of buses in ascending id order. Every matrix and
// solver vector in the library uses this ordering.
class BusIndex {
  public:
    explicit BusIndex(const Network& net);

    std::size_t size() const noexcept { return ids_.size(); }
    std::span<const int> ids() const noexcept { return ids_; }
    int id_at(std::size_t pos) const { return ids_.at(pos); }
    // Position of bus `id`; throws InvalidArgument when absent.
    std::size_t position(int id) const;
    std::optional<std::size_t> find(int id) const noexcept;
    // Position in Network::buses of the bus at matrix position `pos`.
    std::size_t record(std::size_t pos) const { return records_.at(pos); }

  private:
    std::vector<int> ids_;
    std::vector<std::size_t> records_;
};

enum class Severity { warning, error };

struct Finding {
    Severity severity = Severity::error;
    std::string message;

    bool operator==(const Finding&) const = default;
};

// Checks every structural invariant; never throws, never mutates.
std::vector<Finding> validate(const Network& net);

bool has_errors(std::span<const Finding> findings) noexcept;

double to_per_unit(double mw_or_mvar, double base_mva);

// Island label per BusIndex position, computed over in-service branches.
// Labels are 0..k-1 in order of first appearance.
std::vector<std::size_t> island_labels(const Network& net, const BusIndex& index);

// True when the in-service branches join all buses into a single island.
bool is_connected(const Network& net);

// Copy of `net` with every transformer's correction_table cleared.
Network without_correction_tables(Network net);

}  // namespace pstflow
