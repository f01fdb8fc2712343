// Acceptance suite: runs every contract criterion at its stated tolerance and
// prints one pass/fail line each. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sepbell/bounds.hpp"
#include "sepbell/chains.hpp"
#include "sepbell/quantum.hpp"

using namespace sepbell;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > budget_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("[%s] criterion %2d: %s (%.2fs%s%s)\n", ok ? "PASS" : "FAIL", number,
                name.c_str(), seconds, detail.empty() ? "" : "; ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::vector<double> random_dist(std::size_t atoms, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> dist(atoms);
    double sum = 0.0;
    for (auto& p : dist) sum += p = uni(rng);
    for (auto& p : dist) p /= sum;
    return dist;
}

double quasi_over(const std::vector<double>& dist, int n, int d, const std::vector<int>& lhs,
                  const std::vector<int>& rhs) {
    double total = 0.0;
    std::vector<int> v(static_cast<std::size_t>(n));
    for (std::size_t atom = 0; atom < dist.size(); ++atom) {
        std::size_t rest = atom;
        for (int k = n - 1; k >= 0; --k) {
            v[static_cast<std::size_t>(k)] = static_cast<int>(rest % static_cast<std::size_t>(d));
            rest /= static_cast<std::size_t>(d);
        }
        int a = 0, b = 0;
        for (int e : lhs) a += v[static_cast<std::size_t>(e)];
        for (int e : rhs) b += v[static_cast<std::size_t>(e)];
        if (a % d < b % d) total += dist[atom];
    }
    return total;
}

std::vector<int> iota_parties(int n) {
    std::vector<int> parties(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parties[static_cast<std::size_t>(i)] = i;
    return parties;
}

bool c1_metric_axioms(std::string& detail) {
    std::mt19937_64 rng(101);
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        // separation axioms over three binary events
        const auto dist = random_dist(8, rng);
        const double ab = event_space_separation(dist, {0, 1});
        const double bc = event_space_separation(dist, {1, 2});
        const double ac = event_space_separation(dist, {0, 2});
        if (ab < 0 || bc < 0 || ac < 0) {
            detail = "negative separation";
            return false;
        }
        if (ab != event_space_separation(dist, {1, 0})) {
            detail = "separation not symmetric";
            return false;
        }
        if (ab + bc < ac - 1e-12 || bc + ac < ab - 1e-12 || ab + ac < bc - 1e-12) {
            detail = "separation triangle violated";
            return false;
        }
        // directed quasi-distance triangle over three d-valued variables
        const int d = 2 + static_cast<int>(rng() % 3);
        const auto qdist = random_dist(static_cast<std::size_t>(d * d * d), rng);
        const double qab = quasi_over(qdist, 3, d, {0}, {1});
        const double qbc = quasi_over(qdist, 3, d, {1}, {2});
        const double qac = quasi_over(qdist, 3, d, {0}, {2});
        if (qab < 0 || qbc < 0 || qac < 0 || qab + qbc < qac - 1e-12) {
            detail = "directed triangle violated";
            return false;
        }
        // composite form over five variables, every 8th trial (larger joint space)
        if (t % 8 == 0) {
            const auto big = random_dist(static_cast<std::size_t>(std::pow(d, 5)), rng);
            const double left = quasi_over(big, 5, d, {0, 1}, {2}) +
                                quasi_over(big, 5, d, {2}, {3, 4});
            if (left < quasi_over(big, 5, d, {0, 1}, {3, 4}) - 1e-12) {
                detail = "composite directed triangle violated";
                return false;
            }
        }
    }
    detail = std::to_string(trials) + " trials, zero failures";
    return true;
}

bool c2_lr_bounds(std::string& detail) {
    double worst_seconds = 0.0;
    const auto timed_zero = [&worst_seconds](const BellExpression& expr) {
        const auto start = std::chrono::steady_clock::now();
        const auto r = lr_minimum(expr);
        worst_seconds = std::max(
            worst_seconds,
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        return r.exact_value.has_value() && *r.exact_value == 0;
    };
    for (int pos = 0; pos < 4; ++pos) {
        if (!timed_zero(build_separation_bell({0, 1, 2}, pos))) {
            detail = "tripartite variant " + std::to_string(pos);
            return false;
        }
    }
    for (int pos = 0; pos < 6; ++pos) {
        if (!timed_zero(build_separation_bell({0, 1, 2, 3}, pos))) {
            detail = "four-party variant " + std::to_string(pos);
            return false;
        }
    }
    for (int d : {2, 3}) {
        if (!timed_zero(build_zg_svetlichny(d))) {
            detail = "quasi inequality d=" + std::to_string(d);
            return false;
        }
    }
    const std::vector<int> pool4{0, 1, 2, 3};
    std::vector<MonogamyExpression> monos = {
        compose_monogamy(MonogamyPreset::primary_ABC_ABD, pool4),
        compose_monogamy(MonogamyPreset::strong3_4party, pool4),
        compose_monogamy(MonogamyPreset::full4_4party, pool4),
        compose_monogamy(MonogamyPreset::division_N5_AB, {0, 1, 2, 3, 4, 5}),
        compose_monogamy(MonogamyPreset::primary_quasi, pool4, 2),
        compose_monogamy(MonogamyPreset::primary_quasi, pool4, 3),
    };
    for (const auto& mono : monos) {
        for (const auto& summand : mono.summands) {
            if (!timed_zero(summand)) {
                detail = mono.label + " summand " + summand.label;
                return false;
            }
        }
    }
    if (worst_seconds > 1.0) {
        detail = "slowest brute force " + std::to_string(worst_seconds) + "s";
        return false;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "all minima exactly 0; slowest call %.3fs", worst_seconds);
    detail = buf;
    return true;
}

bool c3_ns_violability(std::string& detail) {
    const auto expr = build_separation_bell({0, 1, 2});
    const auto r = ns_minimum(expr);
    const auto report = validate_no_signaling(r.optimizer, 1e-9);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "ns_min=%.9f, optimizer NS violation %.2e", r.value,
                  report.max_violation);
    detail = buf;
    return std::abs(r.value + 1.0) <= 1e-7 && report.pass();
}

bool c4_primary_monogamy(std::string& detail) {
    const auto mono = compose_monogamy(MonogamyPreset::primary_ABC_ABD, {0, 1, 2, 3});
    const auto r = ns_minimum(mono);
    NsOptions exact;
    exact.exact = true;
    const auto re = ns_minimum(mono, exact);
    const bool exact_zero = re.exact_value.has_value() && *re.exact_value == 0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "ns_min=%.2e, exact=%s", r.value,
                  exact_zero ? "0 (certified)" : "NOT ZERO");
    detail = buf;
    return std::abs(r.value) <= 1e-7 && exact_zero;
}

bool c5_strong_monogamies(std::string& detail) {
    const auto strong = compose_monogamy(MonogamyPreset::strong3_4party, {0, 1, 2, 3});
    const auto pairs8 = pairwise_monogamy_certificates(strong);
    if (pairs8.size() != 3) {
        detail = "expected 3 pairwise certificates";
        return false;
    }
    double worst = 0.0;
    for (const auto& p : pairs8) worst = std::min(worst, p.value);

    const auto full = compose_monogamy(MonogamyPreset::full4_4party, {0, 1, 2, 3});
    const auto pairs9 = pairwise_monogamy_certificates(full);
    if (pairs9.size() != 6) {
        detail = "expected 6 pairwise certificates";
        return false;
    }
    for (const auto& p : pairs9) worst = std::min(worst, p.value);
    if (worst < -1e-7) {
        detail = "pairwise minimum " + std::to_string(worst);
        return false;
    }

    const auto division = compose_monogamy(MonogamyPreset::division_N5_AB, {0, 1, 2, 3, 4, 5});
    if (division.flattened().scenario.table_size() != 4096) {
        detail = "division LP is not the 4096-variable instance";
        return false;
    }
    const auto r = ns_minimum(division, NsOptions{false, 1e-6, 10'000});
    char buf[128];
    std::snprintf(buf, sizeof(buf), "worst pairwise %.2e; division ns_min %.2e", worst, r.value);
    detail = buf;
    return r.value >= -1e-6;
}

bool c6_quantum_tripartite(std::string& detail) {
    const auto v3 = evaluate(build_separation_bell(iota_parties(3)),
                             ghz_qubit_behavior(3, QubitPlan::maximal_violation(3)));
    const auto v5 = evaluate(build_separation_bell(iota_parties(5)),
                             ghz_qubit_behavior(5, QubitPlan::maximal_violation(5)));
    const auto plan4 = QubitPlan::maximal_violation(4);
    const auto expr4 = build_separation_bell(iota_parties(4));
    const auto v4_oracle = evaluate(expr4, ghz_qubit_behavior(4, plan4));
    const auto v4_closed = evaluate_closed_form(expr4, plan4);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "N=3: %.10f, N=5: %.10f, N=4: %.10f/%.10f", v3, v5,
                  v4_oracle, v4_closed);
    detail = buf;
    return std::abs(v3 + 1.0) <= 1e-9 && std::abs(v5 + 1.0) <= 1e-9 &&
           std::abs(v4_oracle + 0.75) <= 1e-9 && std::abs(v4_closed + 0.75) <= 1e-9;
}

bool c7_figure3(std::string& detail) {
    const auto rows = figure3_sweep(2, 50);
    if (rows.size() != 49) {
        detail = "expected 49 rows";
        return false;
    }
    double worst = -1.0;
    for (const auto& row : rows) worst = std::max(worst, row.value);
    const double direct =
        evaluate(build_zg_svetlichny(2), ghz_qudit_behavior(2, QuditPlan::maximal_violation(2)));
    char buf[128];
    std::snprintf(buf, sizeof(buf), "largest value %.6f; d=2 reduced %.10f direct %.10f",
                  worst, rows.front().value, direct);
    detail = buf;
    return worst < -1e-6 && std::abs(rows.front().value + 0.25) <= 1e-9 &&
           std::abs(direct + 0.25) <= 1e-9;
}

bool c8_quasi_monogamy(std::string& detail) {
    char buf[96];
    double v2 = 0.0, v3 = 0.0;
    for (int d : {2, 3}) {
        const auto mono = compose_monogamy(MonogamyPreset::primary_quasi, {0, 1, 2, 3}, d);
        const auto r = ns_minimum(mono, NsOptions{false, 1e-6, 25'000});
        (d == 2 ? v2 : v3) = r.value;
        if (r.value < -1e-6) {
            std::snprintf(buf, sizeof(buf), "d=%d ns_min %.3e", d, r.value);
            detail = buf;
            return false;
        }
    }
    std::snprintf(buf, sizeof(buf), "ns_min d=2: %.2e, d=3: %.2e", v2, v3);
    detail = buf;
    return true;
}

bool c9_chain_proofs(std::string& detail) {
    const auto proofs = builtin_proofs();
    if (proofs.size() != 6) {
        detail = "expected 6 proofs";
        return false;
    }
    for (const auto& proof : proofs) {
        if (!verify_chain(proof).valid) {
            detail = proof.label + " did not verify";
            return false;
        }
    }
    // single-label mutations: flip one event setting in one point; this covers
    // every bridge-point label in every step
    int mutations = 0, rejected = 0;
    for (const auto& proof : proofs) {
        for (std::size_t s = 0; s < proof.steps.size(); ++s) {
            for (int which = 0; which < 3; ++which) {
                auto& point = which == 0 ? proof.steps[s].x
                                         : (which == 1 ? proof.steps[s].y : proof.steps[s].z);
                for (std::size_t e = 0; e < point.events.size(); ++e) {
                    ChainProof mutated = proof;
                    auto& mpoint = which == 0 ? mutated.steps[s].x
                                              : (which == 1 ? mutated.steps[s].y
                                                            : mutated.steps[s].z);
                    mpoint.events[e].setting = 3 - mpoint.events[e].setting;
                    if (mpoint.kind == PointKind::separation_point) {
                        mpoint = MetricPoint::separation(mpoint.events);
                    }
                    ++mutations;
                    if (!verify_chain(mutated).valid) ++rejected;
                }
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "6 proofs valid; %d/%d mutations rejected", rejected,
                  mutations);
    detail = buf;
    return rejected == mutations;
}

bool c10_oracle_agreement(std::string& detail) {
    std::mt19937_64 rng(211);
    std::uniform_real_distribution<double> uni(-3.2, 3.2);
    double worst_qubit = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        QubitPlan plan;
        plan.angles.resize(static_cast<std::size_t>(n));
        for (auto& a : plan.angles) a = {uni(rng), uni(rng)};
        const auto behavior = ghz_qubit_behavior(n, plan);
        const Scenario sc = behavior.scenario();
        for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
            const auto settings = sc.setting_tuple(s);
            for (std::uint64_t o = 0; o < sc.outcome_tuples(); ++o) {
                const double closed = ghz_qubit_entry(n, plan, settings, sc.outcome_tuple(o));
                worst_qubit = std::max(worst_qubit, std::abs(behavior.p(s, o) - closed));
            }
        }
        if (worst_qubit > 1e-10) {
            detail = "qubit oracle gap " + std::to_string(worst_qubit);
            return false;
        }
    }
    double worst_qudit = 0.0;
    for (int d = 2; d <= 10; ++d) {
        const auto plan = QuditPlan::maximal_violation(d);
        for (bool swapped : {false, true}) {
            const auto expr = build_zg_svetlichny(d, swapped);
            const double direct = evaluate(expr, ghz_qudit_behavior(d, plan));
            const double reduced = evaluate_reduced(expr, plan);
            worst_qudit = std::max(worst_qudit, std::abs(direct - reduced));
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "qubit gap %.2e (1000 plans); qudit gap %.2e", worst_qubit,
                  worst_qudit);
    detail = buf;
    return worst_qubit <= 1e-10 && worst_qudit <= 1e-12;
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion(1, "metric axioms on random distributions", 10.0, c1_metric_axioms);
    criterion(2, "local-realistic minima are exactly zero", 30.0, c2_lr_bounds);
    criterion(3, "tripartite inequality reaches -1 over no-signaling", 5.0, c3_ns_violability);
    criterion(4, "primary monogamy minimum is zero (exact certificate)", 10.0,
              c4_primary_monogamy);
    criterion(5, "strong and division monogamies are nonnegative", 300.0, c5_strong_monogamies);
    criterion(6, "GHZ values: -1 (N=3,5), -0.75 (N=4, both routes)", 60.0,
              c6_quantum_tripartite);
    criterion(7, "dimension sweep stays negative; d=2 dual-path -0.25", 60.0, c7_figure3);
    criterion(8, "d-outcome primary monogamy nonnegative at d=2,3", 300.0, c8_quasi_monogamy);
    criterion(9, "chain proofs verify; label mutations rejected", 1.0, c9_chain_proofs);
    criterion(10, "closed forms agree with independent oracles", 120.0, c10_oracle_agreement);
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", g_failures);
    }
    return g_failures;
}
