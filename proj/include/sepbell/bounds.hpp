#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sepbell/expression.hpp"
#include "sepbell/lp.hpp"

namespace sepbell {

/// Dense-form LP data for minimizing a Bell/monogamy expression over the
/// no-signaling polytope: one variable per (setting-tuple, outcome-tuple)
/// entry, equality rows for normalization and the per-party no-signaling
/// marginal conditions (each party's setting 2 against reference setting 1),
/// and variable bounds x >= 0.
struct LinearProgramInstance {
    Scenario scenario;
    std::size_t variable_count = 0;
    std::vector<double> objective;

    struct EqualityRow {
        std::vector<std::pair<std::uint32_t, double>> coefficients;
        double rhs = 0.0;
    };
    std::vector<EqualityRow> equalities; // normalization rows first

    std::size_t normalization_rows = 0;

    /// Largest |A x - b| over the equality rows for a candidate behavior.
    double max_equality_residual(const Behavior& behavior) const;
    /// objective . x for a candidate behavior.
    double objective_value(const Behavior& behavior) const;
};

LinearProgramInstance build_lp_instance(const BellExpression& expression);
LinearProgramInstance build_lp_instance(const MonogamyExpression& expression);

enum class BoundMethod { brute_force, lp };

struct BoundResult {
    double value = 0.0;
    Behavior optimizer;
    BoundMethod method = BoundMethod::brute_force;
    /// Achieved certificate residual: 0 for exact modes, otherwise the worst
    /// of the optimality and feasibility residuals.
    double tolerance = 0.0;
    /// Present for brute force and for exact-rational LP solves.
    std::optional<lp::Rational> exact_value;
};

/// Minimum over all deterministic strategies, exact integer arithmetic,
/// ties broken by lexicographic strategy order.
BoundResult lr_minimum(const BellExpression& expression,
                       std::uint64_t cap = kDefaultEnumerationCap);
BoundResult lr_minimum(const MonogamyExpression& expression,
                       std::uint64_t cap = kDefaultEnumerationCap);

struct NsOptions {
    bool exact = false;        // certify with exact rational arithmetic
    double tol = 1e-7;         // optimality certificate tolerance
    std::size_t variable_cap = 10'000;
};

/// Global minimum over the no-signaling polytope, solved to optimality by a
/// primal simplex on the polytope's marginal parameterization. The returned
/// optimizer passes no-signaling validation at 1e-9 and reproduces the value
/// under evaluate() within 1e-7.
BoundResult ns_minimum(const BellExpression& expression, const NsOptions& options = {});
BoundResult ns_minimum(const MonogamyExpression& expression, const NsOptions& options = {});

/// ns_minimum of every pairwise sum of summands, in (i,j) lexicographic
/// order. All values >= -tol certify that at most one summand can be negative.
std::vector<BoundResult> pairwise_monogamy_certificates(const MonogamyExpression& monogamy,
                                                        const NsOptions& options = {});

/// Empirical map of which minus-sign placements turn a sum of separation Bell
/// inequalities into a no-signaling monogamy: enumerates every minus-position
/// combination and LP-checks nonnegativity.
struct SignSearchEntry {
    std::vector<int> minus_positions; // one per party subset
    double ns_min = 0.0;
    bool monogamy = false;
};
std::vector<SignSearchEntry> search_monogamy_signs(
    const std::vector<std::vector<int>>& party_subsets, const NsOptions& options = {},
    std::size_t combination_cap = 4096);

} // namespace sepbell
