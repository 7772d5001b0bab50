// Runs every acceptance criterion once and prints one PASS/FAIL line each.
// Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "golden_cases.hpp"
#include "oracles.hpp"
#include "pstflow/pstflow.hpp"
#include "test_support.hpp"

using namespace pstflow;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::string> transfer_corpus() {
    std::vector<std::string> out;
    for (const auto& name : test::corpus_names()) {
        const auto net = test::corpus(name);
        bool seller = false, buyer = false;
        for (const auto& g : net.generators) seller |= net.find_bus(g.bus)->area == "north";
        for (const auto& l : net.loads) buyer |= net.find_bus(l.bus)->area == "south";
        if (seller && buyer) out.push_back(name);
    }
    return out;
}

void table_fidelity(Check& c) {
    const auto table = reference_pst_table();
    const double angles[] = {-152, -121, -85, -42, 0, 42, 85, 121, 152};
    const double factors[] = {1.0, 0.62, 0.37, 0.21, 0.15, 0.21, 0.37, 0.62, 1.0};
    for (int i = 0; i < 9; ++i) {
        const double k = interpolate_factor(table, angles[i]).factor;
        c.require(k == factors[i], "breakpoint " + fmt(angles[i]) + " gave " + fmt(k));
    }
    for (int phi = -152; phi <= 152; ++phi) {
        const double a = interpolate_factor(table, phi).factor;
        const double b = interpolate_factor(table, -phi).factor;
        c.require(std::abs(a - b) <= 1e-12, "asymmetric at " + std::to_string(phi));
    }
}

void iec_factor(Check& c) {
    const double k = iec_correction_factor(0.1, 1.1);
    c.require(std::abs(k - 0.95 * 1.1 / 1.06) <= 1e-12, "formula value " + fmt(k));
    c.require(std::abs(k - 0.9858490566037734) <= 1e-12, "hand value " + fmt(k));
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> x(0.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        double a = x(rng), b = x(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        c.require(iec_correction_factor(a, 1.1) > iec_correction_factor(b, 1.1),
                  "not decreasing between " + fmt(a) + " and " + fmt(b));
    }
}

void stamp_law(Check& c) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> r(0.0, 0.05), x(0.01, 0.5), tap(0.9, 1.1), phi(-60.0, 60.0);
    for (int i = 0; i < 100; ++i) {
        const double p = phi(rng);
        const auto s = pst_branch_admittance(r(rng), x(rng), tap(rng), p, 1.0);
        double diff = std::arg(s.y_ik) - std::arg(s.y_ki) - 2.0 * deg_to_rad(p);
        diff = std::remainder(diff, 2.0 * std::numbers::pi);
        c.require(std::abs(diff) <= 1e-9, "angle law off by " + fmt(diff));
        c.require(std::abs(std::abs(s.y_ik) - std::abs(s.y_ki)) <= 1e-12, "magnitudes differ");
    }
    const auto s = pst_branch_admittance(0.02, 0.2, 1.0, 0.0, 1.0);
    const Complex y = 1.0 / Complex(0.02, 0.2);
    for (const auto& [got, want] : {std::pair{s.y_ii, y}, {s.y_ik, -y}, {s.y_ki, -y}, {s.y_kk, y}}) {
        c.require(std::abs(got - want) <= 1e-12, "zero-shift stamp differs from line");
    }
}

void ac_oracle(Check& c) {
    const auto sol = solve(test::corpus("two_bus.json"));
    c.require(std::abs(sol.buses[1].vm_pu - 0.99494) <= 1e-3, "V2 = " + fmt(sol.buses[1].vm_pu));
    c.require(std::abs(sol.buses[1].va_deg + 5.768) <= 1e-3, "theta2 = " + fmt(sol.buses[1].va_deg));
    for (const auto& name : test::corpus_names()) {
        const auto net = test::corpus(name);
        for (bool corr : {false, true}) {
            SolveOptions opts;
            opts.use_correction = corr;
            const auto s = solve(net, opts);
            const double residual = s.total_generation_mw - s.total_load_mw - s.total_loss_mw;
            c.require(std::abs(residual) <= 10.0 * opts.tolerance_pu * net.base_mva,
                      name + " power balance residual " + fmt(residual));
            if (net.buses.size() > 4) continue;
            opts.tolerance_pu = 1e-12;
            const auto v = solve(net, opts).voltages();
            const auto ref = oracle::gauss_seidel(net, corr);
            for (std::size_t i = 0; i < v.size(); ++i) {
                c.require(std::abs(v[i] - ref[i]) <= 1e-6, name + " differs from Gauss-Seidel");
            }
        }
    }
}

void correction_toggle(Check& c) {
    const auto net = test::corpus("five_bus_pst.json");
    SolveOptions off;
    off.use_correction = false;
    const auto corrected = solve(net);
    const auto plain = solve(net, off);
    const double diff = std::abs(corrected.find_branch(5)->s_from_mva.real() -
                                 plain.find_branch(5)->s_from_mva.real()) /
                        net.base_mva;
    c.require(diff > 1e-3, "target flow difference " + fmt(diff) + " p.u.");

    auto scaled = net;
    auto& pst = *scaled.find_branch(7);
    const double k = interpolate_factor(reference_pst_table(), pst.transformer->phase_shift_deg).factor;
    pst.r_pu *= k;
    pst.x_pu *= k;
    pst.transformer->correction_table.reset();
    const auto a = corrected.voltages();
    const auto b = solve(scaled, off).voltages();
    for (std::size_t i = 0; i < a.size(); ++i) {
        c.require(std::abs(a[i] - b[i]) <= 1e-8, "pre-scaled solve differs at bus index " + std::to_string(i));
    }
}

void violation_thresholds(Check& c) {
    const auto net = test::corpus("two_bus.json");
    auto sol = solve(net);
    auto scan_with = [&](double vm, double mva) {
        sol.buses[1].vm_pu = vm;
        sol.branches[0].s_from_mva = mva;
        sol.branches[0].s_to_mva = -mva;
        sol.branches[0].loading_pct = 100.0 * mva / 150.0;
        return scan_violations(net, sol);
    };
    c.require(scan_with(0.95, 100).empty(), "0.95 flagged");
    c.require(scan_with(1.05, 100).empty(), "1.05 flagged");
    c.require(scan_with(1.0, 150).empty(), "100% flagged");
    const auto low = scan_with(0.9499, 100);
    c.require(low.low_voltage_count() == 1 && low.thermal.empty(), "0.9499 not flagged");
    c.require(scan_with(1.0501, 100).high_voltage_count() == 1, "1.0501 not flagged");
    const auto hot = scan_with(1.0, 153);
    c.require(hot.thermal_count() == 1 && hot.voltage.empty(), "102% not flagged");
}

void dc_atc_oracle(Check& c) {
    const auto tri = test::corpus("triangle.json");
    const auto f = ptdf(tri, make_transfer(tri, "north", "south"), true);
    c.require(std::abs(f[0] - 1.0 / 3.0) <= 1e-9 && std::abs(f[1] - 1.0 / 3.0) <= 1e-9 &&
                  std::abs(f[2] - 2.0 / 3.0) <= 1e-9,
              "triangle ptdf " + fmt(f[0]) + ", " + fmt(f[1]) + ", " + fmt(f[2]));
    const auto names = transfer_corpus();
    c.require(!names.empty(), "no corpus case has a north->south transfer");
    for (const auto& name : names) {
        const auto net = test::corpus(name);
        const auto t = make_transfer(net, "north", "south");
        for (bool corr : {false, true}) {
            const auto r = compute_atc(net, t, corr);
            const auto brute = oracle::brute_force_atc(net, t, corr);
            if (r.atc_mw.has_value() != brute.has_value()) {
                c.require(false, name + " boundedness disagrees with brute force");
            } else if (brute) {
                c.require(std::abs(*r.atc_mw - *brute) <= 0.1,
                          name + " atc " + fmt(*r.atc_mw) + " vs brute force " + fmt(*brute));
            }
        }
    }
    const auto loop = dc_solve(test::corpus("triangle_pst.json"), false);
    c.require(std::abs(std::abs(loop.flow_mw[2]) / 100.0 - 0.1) <= 1e-9,
              "loop flow " + fmt(loop.flow_mw[2]) + " MW");
}

void five_bus_atc(Check& c) {
    const auto net = test::corpus("five_bus_pst.json");
    const auto t = make_transfer(net, "north", "south");
    const auto on = compute_atc(net, t, true);
    const auto off = compute_atc(net, t, false);
    const auto brute_on = oracle::brute_force_atc(net, t, true);
    const auto brute_off = oracle::brute_force_atc(net, t, false);
    if (!on.atc_mw || !off.atc_mw || !brute_on || !brute_off) {
        c.require(false, "unbounded ATC on the five-bus case");
        return;
    }
    c.require(std::abs(*on.atc_mw - *off.atc_mw) > 1e-6, "ATC unchanged by correction");
    c.require(std::abs(*on.atc_mw - *brute_on) <= 0.1, "corrected ATC vs brute force");
    c.require(std::abs(*off.atc_mw - *brute_off) <= 0.1, "uncorrected ATC vs brute force");
    c.detail = "with correction " + fmt(*on.atc_mw) + " MW, without " + fmt(*off.atc_mw) + " MW";
}

void cli_determinism(Check& c) {
    for (const auto& g : test::golden_cases()) {
        const auto frozen = test::read_file(test::golden_dir() / g.file);
        for (int run = 0; run < 3; ++run) {
            const auto r = test::run_cli(test::resolved_args(g));
            c.require(r.code == 0 && r.out == frozen, g.file + " differs on run " + std::to_string(run + 1));
        }
    }
}

struct Criterion {
    int number;
    const char* title;
    double budget_s;  // 0: no runtime bound
    std::function<void(Check&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "correction table fidelity", 1.0, table_fidelity},
        {2, "IEC correction factor", 1.0, iec_factor},
        {3, "PST stamp angle law", 0.0, stamp_law},
        {4, "AC solver against closed form and Gauss-Seidel", 5.0, ac_oracle},
        {5, "correction toggle on the five-bus case", 0.0, correction_toggle},
        {6, "violation thresholds", 0.0, violation_thresholds},
        {7, "DC flow and ATC against brute force", 5.0, dc_atc_oracle},
        {8, "ATC changes with correction", 0.0, five_bus_atc},
        {9, "CLI golden determinism", 0.0, cli_determinism},
    };
    int failures = 0;
    for (const auto& cr : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (cr.budget_s > 0.0) {
            check.require(elapsed < cr.budget_s, "took " + fmt(elapsed) + " s");
        }
        failures += check.ok ? 0 : 1;
        std::printf("criterion %d %s: %s (%.3f s)%s%s\n", cr.number, check.ok ? "PASS" : "FAIL", cr.title,
                    elapsed, check.detail.empty() ? "" : "; ", check.detail.c_str());
    }
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}
