#include "sepbell/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>

namespace sepbell {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

} // namespace

QubitPlan QubitPlan::maximal_violation(int n_parties) {
    if (n_parties < 2) throw InputError("plans need at least 2 parties");
    const double step = kPi / (n_parties - 1);
    QubitPlan plan;
    plan.angles.assign(static_cast<std::size_t>(n_parties), {0.0, step});
    if (n_parties % 2 == 0) {
        plan.angles[0] = {kPi, kPi + step};
    }
    return plan;
}

QuditPlan QuditPlan::maximal_violation(int d) {
    if (d < 2) throw InputError("qudit plans need d >= 2");
    QuditPlan plan;
    plan.d = d;
    plan.alpha = {1.0, 1.0 / 3.0};
    plan.beta = {0.0, 0.0};
    plan.gamma = {0.0, 2.0 / 3.0};
    return plan;
}

StateVector StateVector::ghz(int n_parties, int d) {
    if (n_parties < 2 || d < 2) throw InputError("GHZ states need n >= 2 parties and d >= 2");
    StateVector sv;
    sv.n_parties = n_parties;
    sv.d = d;
    sv.amps.assign(ipow(static_cast<std::uint64_t>(d), n_parties), {0.0, 0.0});
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    // |n n ... n> has index n * (d^{N-1} + ... + 1)
    std::uint64_t stride = 0;
    for (int k = 0; k < n_parties; ++k) stride = stride * static_cast<std::uint64_t>(d) + 1;
    for (int n = 0; n < d; ++n) {
        sv.amps[static_cast<std::uint64_t>(n) * stride] = {amp, 0.0};
    }
    return sv;
}

Basis equatorial_qubit_basis(double theta) {
    const double s = 1.0 / std::sqrt(2.0);
    const std::complex<double> phase = std::polar(s, theta);
    Basis basis(2);
    basis[0] = {{s, 0.0}, -phase}; // outcome 0: -1 eigenstate
    basis[1] = {{s, 0.0}, phase};  // outcome 1: +1 eigenstate, the "event"
    return basis;
}

Basis fourier_basis(int d, double phi) {
    Basis basis(static_cast<std::size_t>(d));
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int x = 0; x < d; ++x) {
        auto& col = basis[static_cast<std::size_t>(x)];
        col.resize(static_cast<std::size_t>(d));
        for (int n = 0; n < d; ++n) {
            col[static_cast<std::size_t>(n)] = std::polar(s, 2.0 * kPi * n * (x + phi) / d);
        }
    }
    return basis;
}

Basis conjugate_fourier_basis(int d, double phi) {
    Basis basis = fourier_basis(d, phi);
    for (auto& col : basis) {
        for (auto& c : col) c = std::conj(c);
    }
    return basis;
}

namespace {

void check_orthonormal(const Basis& basis, int d) {
    if (static_cast<int>(basis.size()) != d) {
        throw InputError("basis outcome count does not match the scenario");
    }
    for (int x = 0; x < d; ++x) {
        if (static_cast<int>(basis[static_cast<std::size_t>(x)].size()) != d) {
            throw InputError("basis vector has wrong dimension");
        }
        for (int y = x; y < d; ++y) {
            std::complex<double> dot{0.0, 0.0};
            for (int n = 0; n < d; ++n) {
                dot += std::conj(basis[static_cast<std::size_t>(x)][static_cast<std::size_t>(n)]) *
                       basis[static_cast<std::size_t>(y)][static_cast<std::size_t>(n)];
            }
            const double want = x == y ? 1.0 : 0.0;
            if (std::abs(dot - want) > 1e-10) {
                throw InputError("measurement basis is not orthonormal");
            }
        }
    }
}

} // namespace

Behavior statevector_behavior(const StateVector& state,
                              const std::vector<std::array<Basis, 2>>& bases) {
    const int n = state.n_parties;
    const int d = state.d;
    if (static_cast<int>(bases.size()) != n) {
        throw InputError("need one basis pair per party");
    }
    double norm = 0.0;
    for (const auto& a : state.amps) norm += std::norm(a);
    if (std::abs(norm - 1.0) > 1e-12) throw ValidationError("state vector is not normalized");
    for (const auto& pair : bases) {
        check_orthonormal(pair[0], d);
        check_orthonormal(pair[1], d);
    }

    const Scenario sc(n, d);
    const std::uint64_t n_out = sc.outcome_tuples();
    const std::uint64_t dim = n_out; // d^n state components share the outcome codec
    std::vector<double> table(sc.table_size(), 0.0);
    std::vector<int> comp(static_cast<std::size_t>(n));

    for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
        const auto settings = sc.setting_tuple(s);
        for (std::uint64_t o = 0; o < n_out; ++o) {
            const auto outcomes = sc.outcome_tuple(o);
            std::complex<double> amp{0.0, 0.0};
            for (std::uint64_t idx = 0; idx < dim; ++idx) {
                if (state.amps[idx] == std::complex<double>{0.0, 0.0}) continue;
                std::uint64_t rest = idx;
                std::complex<double> w{1.0, 0.0};
                for (int k = n - 1; k >= 0; --k) {
                    comp[static_cast<std::size_t>(k)] = static_cast<int>(rest % d);
                    rest /= d;
                }
                for (int k = 0; k < n; ++k) {
                    const Basis& basis =
                        bases[static_cast<std::size_t>(k)]
                             [static_cast<std::size_t>(settings[static_cast<std::size_t>(k)] - 1)];
                    w *= std::conj(
                        basis[static_cast<std::size_t>(outcomes[static_cast<std::size_t>(k)])]
                             [static_cast<std::size_t>(comp[static_cast<std::size_t>(k)])]);
                }
                amp += w * state.amps[idx];
            }
            table[s * n_out + o] = std::norm(amp);
        }
    }
    return Behavior(sc, std::move(table), kNumericTol);
}

Behavior ghz_qubit_behavior(int n_parties, const QubitPlan& plan) {
    if (n_parties < 2) throw InputError("GHZ behaviors need at least 2 parties");
    if (static_cast<int>(plan.angles.size()) != n_parties) {
        throw InputError("plan does not cover every party");
    }
    std::vector<std::array<Basis, 2>> bases;
    bases.reserve(static_cast<std::size_t>(n_parties));
    for (int k = 0; k < n_parties; ++k) {
        bases.push_back({equatorial_qubit_basis(plan.angle(k, 1)),
                         equatorial_qubit_basis(plan.angle(k, 2))});
    }
    return statevector_behavior(StateVector::ghz(n_parties, 2), bases);
}

double ghz_qubit_separation(int n_parties, double total_angle) {
    const double sign = n_parties % 2 == 0 ? -1.0 : 1.0;
    return 0.5 * (1.0 + sign * std::cos(total_angle));
}

double ghz_qubit_entry(int n_parties, const QubitPlan& plan, const std::vector<int>& settings,
                       const std::vector<int>& outcomes) {
    double total = 0.0;
    int zeros = 0;
    for (int k = 0; k < n_parties; ++k) {
        total += plan.angle(k, settings[static_cast<std::size_t>(k)]);
        if (outcomes[static_cast<std::size_t>(k)] == 0) ++zeros;
    }
    const double sign = zeros % 2 == 0 ? 1.0 : -1.0;
    return (1.0 + sign * std::cos(total)) / static_cast<double>(1ULL << n_parties);
}

double evaluate_closed_form(const BellExpression& expression, const QubitPlan& plan) {
    const int n = expression.scenario.n_parties;
    double total = 0.0;
    for (const auto& st : expression.terms) {
        const auto* sep = std::get_if<SeparationTerm>(&st.term);
        if (sep == nullptr || static_cast<int>(sep->events.size()) != n) {
            throw InputError("closed form needs full-party separation terms");
        }
        double angle = 0.0;
        for (const auto& e : sep->events) angle += plan.angle(e.party, e.setting);
        total += st.sign * ghz_qubit_separation(n, angle);
    }
    return total;
}

namespace {

/// |sum_n w^{nt}|^2 for w = exp(2 pi i / d); exact branch at integer t.
double fourier_kernel_sq(int d, double t) {
    const double nearest = std::round(t);
    if (std::abs(t - nearest) < 1e-12) {
        const long r = std::lround(nearest) % d;
        return r == 0 ? static_cast<double>(d) * d : 0.0;
    }
    const double num = std::sin(kPi * t);
    const double den = std::sin(kPi * t / d);
    return (num * num) / (den * den);
}

} // namespace

Behavior ghz_qudit_behavior(int d, const QuditPlan& plan) {
    if (d < 2) throw InputError("qudit behaviors need d >= 2");
    const Scenario sc(3, d);
    const std::uint64_t n_out = sc.outcome_tuples();
    std::vector<double> table(sc.table_size(), 0.0);
    const double scale = 1.0 / (static_cast<double>(d) * d * d * d);
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            for (int k = 1; k <= 2; ++k) {
                const double phi = plan.phase(i, j, k);
                const std::uint64_t s = sc.setting_index({i, j, k});
                // direct summation of the geometric series; the value depends
                // only on (a + b - c) mod d
                std::vector<double> by_residue(static_cast<std::size_t>(d));
                for (int m = 0; m < d; ++m) {
                    std::complex<double> acc{0.0, 0.0};
                    for (int n = 0; n < d; ++n) {
                        acc += std::polar(1.0, 2.0 * kPi * n * (m + phi) / d);
                    }
                    by_residue[static_cast<std::size_t>(m)] = scale * std::norm(acc);
                }
                for (int a = 0; a < d; ++a) {
                    for (int b = 0; b < d; ++b) {
                        for (int c = 0; c < d; ++c) {
                            const int m = ((a + b - c) % d + d) % d;
                            table[s * n_out + sc.outcome_index({a, b, c})] =
                                by_residue[static_cast<std::size_t>(m)];
                        }
                    }
                }
            }
        }
    }
    return Behavior(sc, std::move(table), kNumericTol);
}

double evaluate_reduced(const BellExpression& expression, const QuditPlan& plan) {
    const int d = plan.d;
    double total = 0.0;
    for (const auto& st : expression.terms) {
        const auto* q = std::get_if<QuasiTerm>(&st.term);
        if (q == nullptr || q->lhs.size() != 2) {
            throw InputError("reduced evaluation needs tripartite quasi terms");
        }
        const int i = q->lhs[0].setting;
        const int j = q->lhs[1].setting;
        const int k = q->rhs.setting;
        const double phi = plan.phase(i, j, k);
        // q_m = d * p(residue m): residue multiplicity is d per (r, c) pair
        double value = 0.0;
        for (int diff = 1; diff < d; ++diff) {
            // c - r = diff (lhs<rhs) contributes residue (r - c) mod d = d - diff
            const int m = q->direction == QuasiDirection::lhs_less_than_rhs ? d - diff : diff;
            const double q_m =
                fourier_kernel_sq(d, m + phi) / (static_cast<double>(d) * d * d);
            value += static_cast<double>(d - diff) * q_m;
        }
        total += st.sign * value;
    }
    return total;
}

std::vector<Figure3Row> figure3_sweep(int d_min, int d_max) {
    if (d_min < 2 || d_max < d_min || d_max > 200) {
        throw InputError("sweep range must satisfy 2 <= d_min <= d_max <= 200");
    }
    std::vector<std::future<double>> futures;
    for (int d = d_min; d <= d_max; ++d) {
        futures.push_back(std::async(std::launch::async, [d] {
            return evaluate_reduced(build_zg_svetlichny(d), QuditPlan::maximal_violation(d));
        }));
    }
    std::vector<Figure3Row> rows;
    rows.reserve(futures.size());
    for (int d = d_min; d <= d_max; ++d) {
        rows.push_back({d, futures[static_cast<std::size_t>(d - d_min)].get()});
    }
    return rows;
}

std::string figure3_csv(const std::vector<Figure3Row>& rows) {
    std::string out = "d,value\n";
    char buf[64];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.15g\n", row.d, row.value);
        out += buf;
    }
    return out;
}

} // namespace sepbell
