#include "sepbell/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace sepbell {

namespace {

/// Integer expansion of an expression over the dense (setting-tuple,
/// outcome-tuple) variables, absent parties at fill setting 1.
std::vector<long> dense_objective(const BellExpression& expr) {
    const Scenario& sc = expr.scenario;
    const std::uint64_t n_out = sc.outcome_tuples();
    std::vector<long> c(sc.table_size(), 0);

    for (const auto& st : expr.terms) {
        std::vector<int> settings(static_cast<std::size_t>(sc.n_parties), 1);
        const auto set = [&](const PartySetting& e) {
            if (e.party < 0 || e.party >= sc.n_parties) {
                throw InputError("expression references party outside its scenario");
            }
            settings[static_cast<std::size_t>(e.party)] = e.setting;
        };
        if (const auto* sep = std::get_if<SeparationTerm>(&st.term)) {
            for (const auto& e : sep->events) set(e);
        } else {
            const auto& q = std::get<QuasiTerm>(st.term);
            for (const auto& e : q.lhs) set(e);
            set(q.rhs);
        }
        const std::uint64_t s = sc.setting_index(settings);

        for (std::uint64_t o = 0; o < n_out; ++o) {
            const auto outcomes = sc.outcome_tuple(o);
            bool hit = false;
            if (const auto* sep = std::get_if<SeparationTerm>(&st.term)) {
                int ones = 0;
                for (const auto& e : sep->events) {
                    ones += outcomes[static_cast<std::size_t>(e.party)];
                }
                hit = ones % 2 == 1;
            } else {
                const auto& q = std::get<QuasiTerm>(st.term);
                int sum = 0;
                for (const auto& e : q.lhs) sum += outcomes[static_cast<std::size_t>(e.party)];
                sum %= sc.n_outcomes;
                const int r = outcomes[static_cast<std::size_t>(q.rhs.party)];
                hit = q.direction == QuasiDirection::lhs_less_than_rhs ? (r > sum) : (r < sum);
            }
            if (hit) c[s * n_out + o] += st.sign;
        }
    }
    return c;
}

LinearProgramInstance build_instance(const BellExpression& expr) {
    const Scenario& sc = expr.scenario;
    LinearProgramInstance inst;
    inst.scenario = sc;
    inst.variable_count = sc.table_size();
    const auto c = dense_objective(expr);
    inst.objective.assign(c.begin(), c.end());

    const std::uint64_t n_out = sc.outcome_tuples();
    for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
        LinearProgramInstance::EqualityRow row;
        row.rhs = 1.0;
        row.coefficients.reserve(n_out);
        for (std::uint64_t o = 0; o < n_out; ++o) {
            row.coefficients.push_back({static_cast<std::uint32_t>(s * n_out + o), 1.0});
        }
        inst.equalities.push_back(std::move(row));
    }
    inst.normalization_rows = inst.equalities.size();

    // per party: marginal with setting 2 equals marginal with reference setting 1
    std::vector<int> outcomes;
    for (int k = 0; k < sc.n_parties; ++k) {
        for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
            auto settings = sc.setting_tuple(s);
            if (settings[static_cast<std::size_t>(k)] != 1) continue;
            auto alt = settings;
            alt[static_cast<std::size_t>(k)] = 2;
            const std::uint64_t s_alt = sc.setting_index(alt);
            for (std::uint64_t o = 0; o < n_out; ++o) {
                outcomes = sc.outcome_tuple(o);
                if (outcomes[static_cast<std::size_t>(k)] != 0) continue;
                LinearProgramInstance::EqualityRow row;
                row.rhs = 0.0;
                for (int ok = 0; ok < sc.n_outcomes; ++ok) {
                    outcomes[static_cast<std::size_t>(k)] = ok;
                    const std::uint64_t oi = sc.outcome_index(outcomes);
                    row.coefficients.push_back(
                        {static_cast<std::uint32_t>(s_alt * n_out + oi), 1.0});
                    row.coefficients.push_back(
                        {static_cast<std::uint32_t>(s * n_out + oi), -1.0});
                }
                outcomes[static_cast<std::size_t>(k)] = 0;
                inst.equalities.push_back(std::move(row));
            }
        }
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Marginal ("one coordinate per party-subset probability") parameterization of
// the no-signaling polytope. Every no-signaling behavior is the image M y of a
// coordinate vector y with y_0 = 1, and M y >= 0 is exactly the polytope. The
// LP is solved through the dual of min{c_cg.y : M y >= 0, y_0 = 1}, which has
// one row per coordinate instead of one per table entry.
// ---------------------------------------------------------------------------

struct MarginalMap {
    Scenario scenario;
    std::size_t dim = 0;       // coordinates
    std::size_t n_vars = 0;    // dense table entries
    // rows[v] lists (coordinate, +-1) with p_v = sum coef * y_T
    std::vector<std::vector<std::pair<std::uint32_t, int>>> rows;
};

MarginalMap build_marginal_map(const Scenario& sc) {
    MarginalMap map;
    map.scenario = sc;
    const int d = sc.n_outcomes;
    const std::uint64_t base = 1 + 2 * static_cast<std::uint64_t>(d - 1);
    std::uint64_t dim = 1;
    for (int k = 0; k < sc.n_parties; ++k) dim *= base;
    map.dim = dim;
    map.n_vars = sc.table_size();
    map.rows.resize(map.n_vars);

    const std::uint64_t n_out = sc.outcome_tuples();
    std::vector<std::pair<std::uint64_t, int>> acc, next;
    for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
        const auto settings = sc.setting_tuple(s);
        for (std::uint64_t o = 0; o < n_out; ++o) {
            const auto outcomes = sc.outcome_tuple(o);
            acc.assign(1, {0, 1});
            for (int k = 0; k < sc.n_parties; ++k) {
                const int sk = settings[static_cast<std::size_t>(k)];
                const int ok = outcomes[static_cast<std::size_t>(k)];
                next.clear();
                const auto local = [&](int outcome) {
                    return 1 + static_cast<std::uint64_t>(sk - 1) * (d - 1) +
                           static_cast<std::uint64_t>(outcome);
                };
                for (const auto& [t, coef] : acc) {
                    if (ok < d - 1) {
                        next.push_back({t * base + local(ok), coef});
                    } else {
                        next.push_back({t * base, coef}); // marginalized slot
                        for (int a = 0; a < d - 1; ++a) {
                            next.push_back({t * base + local(a), -coef});
                        }
                    }
                }
                acc.swap(next);
            }
            auto& row = map.rows[s * n_out + o];
            row.reserve(acc.size());
            for (const auto& [t, coef] : acc) {
                row.push_back({static_cast<std::uint32_t>(t), coef});
            }
        }
    }
    return map;
}

/// Dual LP in standard form: columns are the polytope facet multipliers plus
/// the split normalization price; rows are the marginal coordinates.
template <class Scalar>
lp::StandardForm<Scalar> build_dual_form(const MarginalMap& map, const std::vector<long>& dense_c) {
    lp::StandardForm<Scalar> form;
    form.resize(map.dim, map.n_vars + 2);
    for (std::size_t v = 0; v < map.n_vars; ++v) {
        for (const auto& [t, coef] : map.rows[v]) {
            form.at(t, v) = Scalar(coef);
        }
    }
    form.at(0, map.n_vars) = Scalar(1);
    form.at(0, map.n_vars + 1) = Scalar(-1);
    form.c[map.n_vars] = Scalar(-1);
    form.c[map.n_vars + 1] = Scalar(1);
    // b = M^T c_dense
    for (std::size_t v = 0; v < map.n_vars; ++v) {
        if (dense_c[v] == 0) continue;
        for (const auto& [t, coef] : map.rows[v]) {
            form.b[t] += Scalar(coef * dense_c[v]);
        }
    }
    return form;
}

struct NsSolveOutcome {
    double value = 0.0;
    std::vector<double> table;
    double residual = 0.0;
    std::vector<int> basis;
    std::optional<lp::Rational> exact_value;
    std::optional<std::vector<lp::Rational>> exact_table;
};

NsSolveOutcome solve_ns(const MarginalMap& map, const std::vector<long>& dense_c,
                        const NsOptions& options) {
    const auto form = build_dual_form<double>(map, dense_c);
    const auto sol = lp::solve(form);
    if (sol.status == lp::SolveStatus::infeasible || sol.status == lp::SolveStatus::unbounded) {
        throw FormulationError(
            "no-signaling LP reported " +
            std::string(sol.status == lp::SolveStatus::infeasible ? "infeasible" : "unbounded") +
            " after " + std::to_string(sol.iterations) +
            " iterations; the polytope is nonempty and bounded, so the formulation is broken");
    }
    if (sol.status != lp::SolveStatus::optimal) {
        throw FormulationError("no-signaling LP hit its iteration limit after " +
                               std::to_string(sol.iterations) + " iterations");
    }

    NsSolveOutcome out;
    out.basis = sol.basis;
    out.value = -sol.objective;

    // primal reconstruction from the dual prices
    std::vector<double> y(map.dim, 0.0);
    for (std::size_t t = 0; t < map.dim; ++t) y[t] = -sol.multipliers[t];
    double residual = std::abs(y[0] - 1.0);
    y[0] = 1.0;
    out.table.assign(map.n_vars, 0.0);
    for (std::size_t v = 0; v < map.n_vars; ++v) {
        double p = 0.0;
        for (const auto& [t, coef] : map.rows[v]) p += coef * y[t];
        out.table[v] = p;
        if (p < 0.0) residual = std::max(residual, -p);
        // complementary slackness of the facet multiplier against its slack
        residual = std::max(residual, std::abs(sol.x[v] * p));
    }
    // duality gap between the reconstructed point and the dual objective
    double gap = -out.value;
    for (std::size_t v = 0; v < map.n_vars; ++v) {
        if (dense_c[v] != 0) gap += dense_c[v] * out.table[v];
    }
    residual = std::max(residual, std::abs(gap));
    out.residual = residual;
    if (residual > options.tol) {
        throw FormulationError("no-signaling LP certificate residual " +
                               std::to_string(residual) + " exceeds tolerance");
    }

    if (options.exact) {
        const auto exact_form = build_dual_form<lp::Rational>(map, dense_c);
        auto exact = lp::certify_basis(exact_form, sol.basis);
        if (!exact) {
            exact = lp::solve(exact_form);
            if (exact->status != lp::SolveStatus::optimal) {
                throw FormulationError("exact rational LP did not reach optimality");
            }
        }
        out.exact_value = -exact->objective;
        std::vector<lp::Rational> ye(map.dim, lp::Rational(0));
        for (std::size_t t = 0; t < map.dim; ++t) ye[t] = -exact->multipliers[t];
        if (ye[0] != 1) {
            throw FormulationError("exact LP prices do not normalize the primal point");
        }
        std::vector<lp::Rational> pe(map.n_vars, lp::Rational(0));
        for (std::size_t v = 0; v < map.n_vars; ++v) {
            lp::Rational acc(0);
            for (const auto& [t, coef] : map.rows[v]) {
                if (sgn(ye[t]) != 0) acc += lp::Rational(coef) * ye[t];
            }
            if (sgn(acc) < 0) {
                throw FormulationError("exact LP primal point leaves the polytope");
            }
            pe[v] = acc;
        }
        // exact duality gap must vanish
        lp::Rational gap_e = -*out.exact_value;
        for (std::size_t v = 0; v < map.n_vars; ++v) {
            if (dense_c[v] != 0) gap_e += lp::Rational(dense_c[v]) * pe[v];
        }
        if (sgn(gap_e) != 0) {
            throw FormulationError("exact LP duality gap is nonzero");
        }
        for (std::size_t v = 0; v < map.n_vars; ++v) out.table[v] = pe[v].get_d();
        out.exact_table = std::move(pe);
        out.value = out.exact_value->get_d();
        out.residual = 0.0;
    }
    return out;
}

BoundResult ns_minimum_impl(const BellExpression& flat, const NsOptions& options) {
    const Scenario& sc = flat.scenario;
    if (sc.table_size() > options.variable_cap) {
        throw CapExceededError("LP variable count " + std::to_string(sc.table_size()) +
                               " exceeds cap " + std::to_string(options.variable_cap));
    }
    const auto dense_c = dense_objective(flat);
    const auto map = build_marginal_map(sc);
    auto outcome = solve_ns(map, dense_c, options);

    Behavior optimizer(sc, std::move(outcome.table), kNumericTol);
    const auto ns_report = validate_no_signaling(optimizer, kNumericTol);
    if (!ns_report.pass()) {
        throw FormulationError("LP optimizer violates no-signaling at " +
                               std::to_string(ns_report.max_violation));
    }
    const double reproduced = evaluate(flat, optimizer);
    if (std::abs(reproduced - outcome.value) > 1e-7) {
        throw FormulationError("LP optimizer does not reproduce the optimal value");
    }

    BoundResult result{outcome.value, std::move(optimizer), BoundMethod::lp, outcome.residual,
                       std::move(outcome.exact_value)};
    return result;
}

} // namespace

double LinearProgramInstance::max_equality_residual(const Behavior& behavior) const {
    if (behavior.table().size() != variable_count) {
        throw InputError("behavior does not match the LP instance");
    }
    double worst = 0.0;
    for (const auto& row : equalities) {
        double acc = -row.rhs;
        for (const auto& [v, coef] : row.coefficients) acc += coef * behavior.table()[v];
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

double LinearProgramInstance::objective_value(const Behavior& behavior) const {
    if (behavior.table().size() != variable_count) {
        throw InputError("behavior does not match the LP instance");
    }
    double acc = 0.0;
    for (std::size_t v = 0; v < variable_count; ++v) acc += objective[v] * behavior.table()[v];
    return acc;
}

LinearProgramInstance build_lp_instance(const BellExpression& expression) {
    return build_instance(expression);
}

LinearProgramInstance build_lp_instance(const MonogamyExpression& expression) {
    return build_instance(expression.flattened());
}

BoundResult lr_minimum(const BellExpression& expression, std::uint64_t cap) {
    const Scenario& sc = expression.scenario;
    const std::uint64_t count = strategy_count(sc);
    if (count > cap) {
        throw CapExceededError("strategy count " + std::to_string(count) +
                               " exceeds enumeration cap " + std::to_string(cap));
    }
    long best = 0;
    std::uint64_t best_index = 0;
    bool first = true;
    for (std::uint64_t i = 0; i < count; ++i) {
        const long v = evaluate_on_strategy(expression, strategy_from_index(sc, i));
        if (first || v < best) {
            best = v;
            best_index = i;
            first = false;
        }
    }
    BoundResult result{static_cast<double>(best),
                       behavior_from_strategy(strategy_from_index(sc, best_index), sc),
                       BoundMethod::brute_force, 0.0, lp::Rational(best)};
    return result;
}

BoundResult lr_minimum(const MonogamyExpression& expression, std::uint64_t cap) {
    return lr_minimum(expression.flattened(), cap);
}

BoundResult ns_minimum(const BellExpression& expression, const NsOptions& options) {
    return ns_minimum_impl(expression, options);
}

BoundResult ns_minimum(const MonogamyExpression& expression, const NsOptions& options) {
    return ns_minimum_impl(expression.flattened(), options);
}

std::vector<BoundResult> pairwise_monogamy_certificates(const MonogamyExpression& monogamy,
                                                        const NsOptions& options) {
    if (monogamy.summands.size() < 2) {
        throw InputError("pairwise certificates need at least two summands");
    }
    std::vector<BoundResult> results;
    for (std::size_t i = 0; i < monogamy.summands.size(); ++i) {
        for (std::size_t j = i + 1; j < monogamy.summands.size(); ++j) {
            MonogamyExpression pair;
            pair.label = monogamy.label + ":pair(" + std::to_string(i) + "," +
                         std::to_string(j) + ")";
            pair.summands = {monogamy.summands[i], monogamy.summands[j]};
            int max_party = 1;
            for (const auto& s : pair.summands) {
                for (int p : s.parties()) max_party = std::max(max_party, p);
            }
            pair.scenario = Scenario(max_party + 1, monogamy.scenario.n_outcomes);
            results.push_back(ns_minimum(pair, options));
        }
    }
    return results;
}

std::vector<SignSearchEntry> search_monogamy_signs(
    const std::vector<std::vector<int>>& party_subsets, const NsOptions& options,
    std::size_t combination_cap) {
    if (party_subsets.empty()) throw InputError("sign search needs at least one party subset");
    std::vector<std::size_t> variants;
    std::size_t total = 1;
    for (const auto& subset : party_subsets) {
        const std::size_t n = subset.size();
        if (n < 3) throw InputError("sign search subsets need at least 3 parties");
        const std::size_t count = n % 2 == 0 ? n + 2 : n + 1;
        variants.push_back(count);
        if (total > combination_cap / count + 1) {
            throw CapExceededError("sign search combination count exceeds cap");
        }
        total *= count;
    }
    if (total > combination_cap) {
        throw CapExceededError("sign search combination count exceeds cap");
    }

    std::vector<SignSearchEntry> entries;
    std::vector<int> positions(party_subsets.size(), 0);
    for (std::size_t combo = 0; combo < total; ++combo) {
        std::size_t rest = combo;
        for (std::size_t s = party_subsets.size(); s-- > 0;) {
            positions[s] = static_cast<int>(rest % variants[s]);
            rest /= variants[s];
        }
        MonogamyExpression mono;
        mono.label = "sign_search";
        int max_party = 1;
        for (std::size_t s = 0; s < party_subsets.size(); ++s) {
            mono.summands.push_back(build_separation_bell(party_subsets[s], positions[s]));
            for (int p : party_subsets[s]) max_party = std::max(max_party, p);
        }
        mono.scenario = Scenario(max_party + 1, 2);
        const auto bound = ns_minimum(mono, options);
        entries.push_back({positions, bound.value, bound.value >= -options.tol});
    }
    return entries;
}

} // namespace sepbell
