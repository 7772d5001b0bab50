#include "pstflow/dc_atc.hpp"

#include <cmath>
#include <numeric>

#include "dense_lu.hpp"
#include "pstflow/error.hpp"
#include "pstflow/network_matrix.hpp"

namespace pstflow {

namespace {

double effective_reactance(const Network& net, const Branch& br, bool use_correction) {
    const double x_eff = branch_correction_factor(net, br, use_correction) * br.x_pu;
    if (x_eff == 0.0) {
        throw InvalidArgument("branch " + std::to_string(br.id) + ": zero reactance in DC model");
    }
    return x_eff;
}

double phase_shift_rad(const Branch& br) {
    return br.transformer ? deg_to_rad(br.transformer->phase_shift_deg) : 0.0;
}

std::size_t slack_position(const Network& net, const BusIndex& index) {
    std::optional<std::size_t> slack;
    for (std::size_t pos = 0; pos < index.size(); ++pos) {
        if (net.buses[index.record(pos)].kind == BusKind::slack) {
            if (slack) {
                throw InvalidArgument("DC power flow needs exactly one slack bus");
            }
            slack = pos;
        }
    }
    if (!slack) {
        throw InvalidArgument("DC power flow needs exactly one slack bus");
    }
    return *slack;
}

}  // namespace

std::vector<double> scheduled_injections_mw(const Network& net) {
    BusIndex index(net);
    std::vector<double> p(index.size(), 0.0);
    for (const auto& g : net.generators) {
        p[index.position(g.bus)] += g.p_mw;
    }
    for (const auto& l : net.loads) {
        p[index.position(l.bus)] -= l.p_mw;
    }
    return p;
}

DcSolution dc_solve(const Network& net, bool use_correction) {
    return dc_solve(net, scheduled_injections_mw(net), use_correction);
}

DcSolution dc_solve(const Network& net, std::span<const double> injections_mw,
                    bool use_correction) {
    BusIndex index(net);
    const std::size_t n = index.size();
    if (injections_mw.size() != n) {
        throw InvalidArgument("injection vector does not match the bus count");
    }
    const auto slack = slack_position(net, index);
    if (!is_connected(net)) {
        throw SolveError(SolveFailure::disconnected, "network is disconnected");
    }

    // Reduced system without the slack row/column.
    auto reduced = [slack](std::size_t pos) { return static_cast<Eigen::Index>(pos < slack ? pos : pos - 1); };
    const auto m = static_cast<Eigen::Index>(n - 1);
    Eigen::MatrixXd bprime = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs(m);
    for (std::size_t pos = 0; pos < n; ++pos) {
        if (pos != slack) {
            rhs[reduced(pos)] = injections_mw[pos] / net.base_mva;
        }
    }

    for (const auto& br : net.branches) {
        if (!br.in_service) {
            continue;
        }
        const double b = 1.0 / effective_reactance(net, br, use_correction);
        const auto i = index.position(br.from_bus);
        const auto k = index.position(br.to_bus);
        const double shift = b * phase_shift_rad(br);
        if (i != slack) {
            bprime(reduced(i), reduced(i)) += b;
            rhs[reduced(i)] += shift;
        }
        if (k != slack) {
            bprime(reduced(k), reduced(k)) += b;
            rhs[reduced(k)] -= shift;
        }
        if (i != slack && k != slack) {
            bprime(reduced(i), reduced(k)) -= b;
            bprime(reduced(k), reduced(i)) -= b;
        }
    }

    const auto theta = detail::solve_dense(bprime, rhs);
    if (!theta) {
        throw SolveError(SolveFailure::singular_jacobian, "singular DC susceptance matrix");
    }

    DcSolution sol;
    sol.bus_ids.assign(index.ids().begin(), index.ids().end());
    sol.angle_rad.assign(n, 0.0);
    for (std::size_t pos = 0; pos < n; ++pos) {
        if (pos != slack) {
            sol.angle_rad[pos] = (*theta)[reduced(pos)];
        }
    }
    for (const auto& br : net.branches) {
        sol.branch_ids.push_back(br.id);
        if (!br.in_service) {
            sol.flow_mw.push_back(0.0);
            continue;
        }
        const double x_eff = effective_reactance(net, br, use_correction);
        const double dtheta = sol.angle_rad[index.position(br.from_bus)] -
                              sol.angle_rad[index.position(br.to_bus)] - phase_shift_rad(br);
        sol.flow_mw.push_back(dtheta / x_eff * net.base_mva);
    }
    return sol;
}

TransferDefinition make_transfer(const Network& net, const std::string& seller_area,
                                 const std::string& buyer_area) {
    if (seller_area.empty() || buyer_area.empty()) {
        throw InvalidArgument("seller and buyer areas must be named");
    }
    if (seller_area == buyer_area) {
        throw InvalidArgument("seller and buyer areas must differ");
    }
    auto area_of = [&net](int bus) -> const std::string& { return net.find_bus(bus)->area; };

    TransferDefinition t;
    t.name = seller_area + "->" + buyer_area;
    t.seller_area = seller_area;
    t.buyer_area = buyer_area;

    auto distribute = [](std::vector<Participation>& parts, const std::vector<double>& weights) {
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        for (std::size_t j = 0; j < parts.size(); ++j) {
            parts[j].fraction = total > 0.0 ? weights[j] / total : 1.0 / static_cast<double>(parts.size());
        }
    };

    std::vector<double> weights;
    for (std::size_t g = 0; g < net.generators.size(); ++g) {
        if (area_of(net.generators[g].bus) == seller_area) {
            t.sellers.push_back({g, 0.0});
            weights.push_back(std::max(net.generators[g].p_max_mw, 0.0));
        }
    }
    if (t.sellers.empty()) {
        throw InvalidArgument("seller area '" + seller_area + "' has no generators");
    }
    distribute(t.sellers, weights);

    weights.clear();
    for (std::size_t l = 0; l < net.loads.size(); ++l) {
        if (area_of(net.loads[l].bus) == buyer_area) {
            t.buyers.push_back({l, 0.0});
            weights.push_back(std::max(net.loads[l].p_mw, 0.0));
        }
    }
    if (t.buyers.empty()) {
        throw InvalidArgument("buyer area '" + buyer_area + "' has no loads");
    }
    distribute(t.buyers, weights);
    return t;
}

std::vector<double> transfer_injections_mw(const Network& net, const TransferDefinition& transfer,
                                           double mw) {
    BusIndex index(net);
    std::vector<double> delta(index.size(), 0.0);
    for (const auto& s : transfer.sellers) {
        delta[index.position(net.generators.at(s.index).bus)] += s.fraction * mw;
    }
    for (const auto& b : transfer.buyers) {
        delta[index.position(net.loads.at(b.index).bus)] -= b.fraction * mw;
    }
    return delta;
}

std::vector<double> ptdf(const Network& net, const TransferDefinition& transfer, bool use_correction) {
    const auto base_injection = scheduled_injections_mw(net);
    const auto delta = transfer_injections_mw(net, transfer, 1.0);
    std::vector<double> shifted(base_injection.size());
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        shifted[i] = base_injection[i] + delta[i];
    }
    const auto base = dc_solve(net, base_injection, use_correction);
    const auto moved = dc_solve(net, shifted, use_correction);
    std::vector<double> out(base.flow_mw.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = moved.flow_mw[j] - base.flow_mw[j];
    }
    return out;
}

AtcResult compute_atc(const Network& net, const TransferDefinition& transfer, bool use_correction) {
    if (transfer.sellers.empty() || transfer.buyers.empty()) {
        throw InvalidArgument("transfer needs at least one seller generator and one buyer load");
    }
    const auto base = dc_solve(net, use_correction);
    const auto sens = ptdf(net, transfer, use_correction);

    AtcResult result;
    for (std::size_t j = 0; j < net.branches.size(); ++j) {
        const auto& br = net.branches[j];
        BranchSensitivity row{br.id, base.flow_mw[j], sens[j], std::nullopt};
        if (br.in_service && br.is_rated() && std::abs(sens[j]) >= kMinBindingPtdf) {
            // Largest transfer keeping |base + delta * ptdf| within the rating.
            const double limit = sens[j] > 0.0 ? br.rating_mva : -br.rating_mva;
            const double headroom = std::max(0.0, (limit - base.flow_mw[j]) / sens[j]);
            row.headroom_mw = headroom;
            if (!result.atc_mw || headroom < *result.atc_mw) {
                result.atc_mw = headroom;
                result.binding_branch = br.id;
            }
        }
        result.branches.push_back(row);
    }
    return result;
}

}  // namespace pstflow
