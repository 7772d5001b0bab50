#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pstflow/grid_model.hpp"

namespace pstflow {

// Buses in BusIndex order, branches in Network::branches order.
struct DcSolution {
    std::vector<int> bus_ids;
    std::vector<double> angle_rad;
    std::vector<int> branch_ids;
    std::vector<double> flow_mw;  // from -> to positive; 0 for out-of-service branches
};

// Linearized flow with the scheduled injections (generation minus load).
// A phase shifter carries (theta_i - theta_k - phi) / x_eff where
// x_eff = K * x_pu when corrected, x_pu otherwise.
DcSolution dc_solve(const Network& net, bool use_correction);

// Same, with explicit per-bus injections in MW (BusIndex order). The slack
// entry is ignored; the slack absorbs the balance.
DcSolution dc_solve(const Network& net, std::span<const double> injections_mw, bool use_correction);

// Net scheduled injection per bus in MW (BusIndex order).
std::vector<double> scheduled_injections_mw(const Network& net);

struct Participation {
    std::size_t index = 0;  // into Network::generators (sellers) or Network::loads (buyers)
    double fraction = 0.0;
};

struct TransferDefinition {
    std::string name;
    std::string seller_area;
    std::string buyer_area;
    std::vector<Participation> sellers;
    std::vector<Participation> buyers;
};

// Pro-rata transfer: sellers weighted by p_max_mw of the seller area's
// generators, buyers by p_mw of the buyer area's loads (equal shares when all
// weights are zero). Throws InvalidArgument for empty or identical areas.
TransferDefinition make_transfer(const Network& net, const std::string& seller_area,
                                 const std::string& buyer_area);

// Per-bus injection change (MW, BusIndex order) for `mw` of the transfer.
std::vector<double> transfer_injections_mw(const Network& net, const TransferDefinition& transfer,
                                           double mw);

// MW flow change per branch for 1 MW of the transfer, from two DC solves.
std::vector<double> ptdf(const Network& net, const TransferDefinition& transfer, bool use_correction);

struct BranchSensitivity {
    int branch_id = 0;
    double base_flow_mw = 0.0;
    double ptdf = 0.0;
    std::optional<double> headroom_mw;  // transfer that loads this branch to its rating
};

struct AtcResult {
    std::optional<double> atc_mw;  // nullopt: no rated branch constrains the transfer
    std::optional<int> binding_branch;
    std::vector<BranchSensitivity> branches;

    bool unbounded() const noexcept { return !atc_mw.has_value(); }
};

// Sensitivities below this magnitude never bind.
inline constexpr double kMinBindingPtdf = 1e-6;

AtcResult compute_atc(const Network& net, const TransferDefinition& transfer, bool use_correction);

}  // namespace pstflow
