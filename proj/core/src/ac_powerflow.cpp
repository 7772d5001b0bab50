#include "pstflow/ac_powerflow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dense_lu.hpp"
#include "pstflow/correction.hpp"
#include "pstflow/error.hpp"

namespace pstflow {

double BranchFlow::max_mva() const noexcept {
    return std::max(std::abs(s_from_mva), std::abs(s_to_mva));
}

std::vector<Complex> PowerFlowSolution::voltages() const {
    std::vector<Complex> v;
    v.reserve(buses.size());
    for (const auto& b : buses) {
        v.push_back(std::polar(b.vm_pu, deg_to_rad(b.va_deg)));
    }
    return v;
}

const BusResult* PowerFlowSolution::find_bus(int id) const noexcept {
    auto it = std::find_if(buses.begin(), buses.end(), [id](const BusResult& b) { return b.id == id; });
    return it == buses.end() ? nullptr : &*it;
}

const BranchFlow* PowerFlowSolution::find_branch(int id) const noexcept {
    auto it = std::find_if(branches.begin(), branches.end(),
                           [id](const BranchFlow& b) { return b.id == id; });
    return it == branches.end() ? nullptr : &*it;
}

namespace {

// Per-bus scheduled quantities in BusIndex order, per-unit.
struct Schedule {
    std::vector<BusKind> kind;
    std::vector<double> p_spec;
    std::vector<double> q_spec;
    std::vector<double> v_set;
    std::vector<double> load_p;
    std::vector<double> load_q;
    std::vector<double> q_min;  // summed generator limits
    std::vector<double> q_max;
    std::size_t slack = 0;
};

Schedule build_schedule(const Network& net, const BusIndex& index) {
    const std::size_t n = index.size();
    Schedule s;
    s.kind.resize(n);
    s.p_spec.assign(n, 0.0);
    s.q_spec.assign(n, 0.0);
    s.v_set.assign(n, 1.0);
    s.load_p.assign(n, 0.0);
    s.load_q.assign(n, 0.0);
    s.q_min.assign(n, 0.0);
    s.q_max.assign(n, 0.0);
    std::vector<bool> has_gen_setpoint(n, false);

    std::size_t slack_count = 0;
    for (std::size_t pos = 0; pos < n; ++pos) {
        const auto& bus = net.buses[index.record(pos)];
        s.kind[pos] = bus.kind;
        if (bus.kind == BusKind::slack) {
            s.slack = pos;
            ++slack_count;
        }
    }
    if (slack_count != 1) {
        throw InvalidArgument("power flow needs exactly one slack bus, found " +
                              std::to_string(slack_count));
    }

    const double base = net.base_mva;
    for (const auto& g : net.generators) {
        const auto pos = index.position(g.bus);
        s.p_spec[pos] += g.p_mw / base;
        s.q_min[pos] += g.q_min_mvar / base;
        s.q_max[pos] += g.q_max_mvar / base;
        if (g.v_setpoint_pu && !has_gen_setpoint[pos]) {
            s.v_set[pos] = *g.v_setpoint_pu;
            has_gen_setpoint[pos] = true;
        }
    }
    for (const auto& l : net.loads) {
        const auto pos = index.position(l.bus);
        s.load_p[pos] += l.p_mw / base;
        s.load_q[pos] += l.q_mvar / base;
        s.p_spec[pos] -= l.p_mw / base;
        s.q_spec[pos] -= l.q_mvar / base;
    }
    // A bus setpoint overrides generator setpoints.
    for (std::size_t pos = 0; pos < n; ++pos) {
        const auto& bus = net.buses[index.record(pos)];
        if (bus.v_setpoint_pu) {
            s.v_set[pos] = *bus.v_setpoint_pu;
        }
    }
    return s;
}

Eigen::MatrixXcd dense_matrix(const AdmittanceMatrix& ybus) {
    const auto n = static_cast<Eigen::Index>(ybus.size());
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (const auto& [j, v] : ybus.row(static_cast<std::size_t>(i))) {
            y(i, static_cast<Eigen::Index>(j)) = v;
        }
    }
    return y;
}

struct NewtonResult {
    int iterations = 0;
    double mismatch = 0.0;
};

// Runs Newton iterations in place on `v` until the mismatch of the current
// bus classification falls below tolerance.
NewtonResult newton(const Eigen::MatrixXcd& y, const Schedule& sched, Eigen::VectorXcd& v,
                    const SolveOptions& opts, int iterations_used) {
    const auto n = static_cast<Eigen::Index>(sched.kind.size());
    std::vector<Eigen::Index> pvpq;
    std::vector<Eigen::Index> pq;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (sched.kind[static_cast<std::size_t>(i)] != BusKind::slack) {
            pvpq.push_back(i);
        }
        if (sched.kind[static_cast<std::size_t>(i)] == BusKind::pq) {
            pq.push_back(i);
        }
    }
    const auto npvpq = static_cast<Eigen::Index>(pvpq.size());
    const auto npq = static_cast<Eigen::Index>(pq.size());
    const Eigen::Index dim = npvpq + npq;

    Eigen::VectorXd va = v.array().arg();
    Eigen::VectorXd vm = v.array().abs();

    int iter = iterations_used;
    while (true) {
        const Eigen::VectorXcd current = y * v;
        const Eigen::VectorXcd s = v.array() * current.array().conjugate();

        Eigen::VectorXd f(dim);
        for (Eigen::Index a = 0; a < npvpq; ++a) {
            const auto i = pvpq[static_cast<std::size_t>(a)];
            f[a] = s[i].real() - sched.p_spec[static_cast<std::size_t>(i)];
        }
        for (Eigen::Index a = 0; a < npq; ++a) {
            const auto i = pq[static_cast<std::size_t>(a)];
            f[npvpq + a] = s[i].imag() - sched.q_spec[static_cast<std::size_t>(i)];
        }
        const double mismatch = dim == 0 ? 0.0 : f.cwiseAbs().maxCoeff();
        if (!std::isfinite(mismatch)) {
            throw SolveError(SolveFailure::max_iterations,
                             "power flow diverged after " + std::to_string(iter) + " iterations",
                             iter, mismatch);
        }
        if (mismatch <= opts.tolerance_pu) {
            return {iter, mismatch};
        }
        if (iter >= opts.max_iterations) {
            throw SolveError(SolveFailure::max_iterations,
                             "power flow did not converge in " + std::to_string(iter) +
                                 " iterations (max mismatch " + std::to_string(mismatch) + " p.u.)",
                             iter, mismatch);
        }

        // Complex partials of S with respect to angle and magnitude.
        const Eigen::VectorXcd vnorm = v.array() / vm.array().cast<Complex>();
        const Eigen::MatrixXcd dS_dVa =
            Complex(0.0, 1.0) * v.asDiagonal() *
            (Eigen::MatrixXcd(current.asDiagonal()) - y * v.asDiagonal()).conjugate();
        const Eigen::MatrixXcd dS_dVm =
            v.asDiagonal() * (y * vnorm.asDiagonal()).conjugate() +
            Eigen::MatrixXcd(current.conjugate().asDiagonal()) * vnorm.asDiagonal();

        Eigen::MatrixXd jac(dim, dim);
        for (Eigen::Index a = 0; a < npvpq; ++a) {
            const auto r = pvpq[static_cast<std::size_t>(a)];
            for (Eigen::Index b = 0; b < npvpq; ++b) {
                jac(a, b) = dS_dVa(r, pvpq[static_cast<std::size_t>(b)]).real();
            }
            for (Eigen::Index b = 0; b < npq; ++b) {
                jac(a, npvpq + b) = dS_dVm(r, pq[static_cast<std::size_t>(b)]).real();
            }
        }
        for (Eigen::Index a = 0; a < npq; ++a) {
            const auto r = pq[static_cast<std::size_t>(a)];
            for (Eigen::Index b = 0; b < npvpq; ++b) {
                jac(npvpq + a, b) = dS_dVa(r, pvpq[static_cast<std::size_t>(b)]).imag();
            }
            for (Eigen::Index b = 0; b < npq; ++b) {
                jac(npvpq + a, npvpq + b) = dS_dVm(r, pq[static_cast<std::size_t>(b)]).imag();
            }
        }

        const auto dx = detail::solve_dense(jac, -f);
        if (!dx) {
            throw SolveError(SolveFailure::singular_jacobian,
                             "singular Jacobian at iteration " + std::to_string(iter), iter,
                             mismatch);
        }
        for (Eigen::Index a = 0; a < npvpq; ++a) {
            va[pvpq[static_cast<std::size_t>(a)]] += (*dx)[a];
        }
        for (Eigen::Index a = 0; a < npq; ++a) {
            vm[pq[static_cast<std::size_t>(a)]] += (*dx)[npvpq + a];
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            v[i] = std::polar(vm[i], va[i]);
        }
        ++iter;
    }
}

// Switches pv buses whose generator reactive output leaves its limits to pq
// at the violated limit. Returns true when any bus switched.
bool apply_q_limits(const Eigen::MatrixXcd& y, Schedule& sched, const Eigen::VectorXcd& v) {
    const Eigen::VectorXcd s = v.array() * (y * v).array().conjugate();
    bool switched = false;
    for (std::size_t i = 0; i < sched.kind.size(); ++i) {
        if (sched.kind[i] != BusKind::pv) {
            continue;
        }
        const double q_gen = s[static_cast<Eigen::Index>(i)].imag() + sched.load_q[i];
        if (q_gen > sched.q_max[i]) {
            sched.kind[i] = BusKind::pq;
            sched.q_spec[i] = sched.q_max[i] - sched.load_q[i];
            switched = true;
        } else if (q_gen < sched.q_min[i]) {
            sched.kind[i] = BusKind::pq;
            sched.q_spec[i] = sched.q_min[i] - sched.load_q[i];
            switched = true;
        }
    }
    return switched;
}

}  // namespace

PowerFlowSolution solve(const Network& net, const SolveOptions& opts) {
    if (!(opts.tolerance_pu > 0.0) || opts.max_iterations < 1) {
        throw InvalidArgument("tolerance must be positive and max_iterations at least 1");
    }
    BusIndex index(net);
    const std::size_t n = index.size();
    if (n == 0) {
        throw InvalidArgument("network has no buses");
    }
    auto sched = build_schedule(net, index);
    if (!is_connected(net)) {
        throw SolveError(SolveFailure::disconnected, "network is disconnected");
    }

    const auto ybus = assemble_ybus(net, opts.use_correction);
    const Eigen::MatrixXcd y = dense_matrix(ybus);

    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    const bool warm = !opts.flat_start && !opts.initial_voltages.empty();
    if (warm && opts.initial_voltages.size() != n) {
        throw InvalidArgument("initial_voltages must have one entry per bus");
    }
    for (std::size_t i = 0; i < n; ++i) {
        Complex v0 = warm ? opts.initial_voltages[i] : Complex(1.0, 0.0);
        if (sched.kind[i] != BusKind::pq) {
            v0 = std::polar(sched.v_set[i], warm ? std::arg(v0) : 0.0);
        }
        v[static_cast<Eigen::Index>(i)] = v0;
    }

    auto result = newton(y, sched, v, opts, 0);
    if (opts.enforce_q_limits) {
        while (apply_q_limits(y, sched, v)) {
            result = newton(y, sched, v, opts, result.iterations);
        }
    }

    PowerFlowSolution sol;
    sol.iterations = result.iterations;
    sol.max_mismatch_pu = result.mismatch;
    sol.converged = true;

    const Eigen::VectorXcd s = v.array() * (y * v).array().conjugate();
    std::vector<Complex> voltages(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto vi = v[static_cast<Eigen::Index>(i)];
        voltages[i] = vi;
        const auto si = s[static_cast<Eigen::Index>(i)] * net.base_mva;
        sol.buses.push_back({index.id_at(i), std::abs(vi), rad_to_deg(std::arg(vi)), si.real(),
                             si.imag()});
        sol.total_load_mw += sched.load_p[i] * net.base_mva;
        sol.total_generation_mw += si.real() + sched.load_p[i] * net.base_mva;
    }
    auto flows = branch_flows(net, voltages, opts.use_correction);
    sol.branches = std::move(flows.branches);
    sol.total_loss_mw = flows.total_loss_mw;
    return sol;
}

FlowSummary branch_flows(const Network& net, std::span<const Complex> voltages,
                         bool use_correction) {
    BusIndex index(net);
    if (voltages.size() != index.size()) {
        throw InvalidArgument("voltage vector does not match the bus count");
    }
    FlowSummary out;
    out.branches.reserve(net.branches.size());
    for (const auto& br : net.branches) {
        BranchFlow flow;
        flow.id = br.id;
        flow.in_service = br.in_service;
        if (br.in_service) {
            const auto s = branch_stamp(net, br, use_correction);
            const Complex vi = voltages[index.position(br.from_bus)];
            const Complex vk = voltages[index.position(br.to_bus)];
            const Complex ii = s.y_ii * vi + s.y_ik * vk;
            const Complex ik = s.y_ki * vi + s.y_kk * vk;
            flow.s_from_mva = vi * std::conj(ii) * net.base_mva;
            flow.s_to_mva = vk * std::conj(ik) * net.base_mva;
            flow.current_pu = std::abs(ii);
            flow.loss_mw = flow.s_from_mva.real() + flow.s_to_mva.real();
            if (br.is_rated()) {
                flow.loading_pct = 100.0 * flow.max_mva() / br.rating_mva;
            }
            out.total_loss_mw += flow.loss_mw;
        }
        out.branches.push_back(flow);
    }
    return out;
}

double pst_angle_weighted_loss(double r_pu, const CorrectionTable& table, double phase_shift_deg,
                               double current_pu) {
    if (r_pu < 0.0) {
        throw InvalidArgument("resistance must be non-negative");
    }
    const double k = interpolate_factor(table, phase_shift_deg).factor;
    return r_pu * k * std::cos(deg_to_rad(phase_shift_deg)) * current_pu * current_pu;
}

}  // namespace pstflow
