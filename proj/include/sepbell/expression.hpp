#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sepbell/separation.hpp"

namespace sepbell {

struct SignedTerm {
    int sign = +1; // +1 or -1
    std::variant<SeparationTerm, QuasiTerm> term;

    std::string label() const;
};

/// A Bell inequality's left-hand side: signed separation or quasi-distance
/// terms over a scenario. The inequality asserts value >= 0 for all local
/// realistic models.
struct BellExpression {
    Scenario scenario;
    std::string label;
    std::vector<SignedTerm> terms;

    std::vector<int> parties() const; // distinct party indices, ascending
};

/// A sum of Bell expressions over overlapping party subsets. Each summand is
/// individually local-realistically nonnegative; the sum's no-signaling
/// nonnegativity is the monogamy statement.
struct MonogamyExpression {
    Scenario scenario;
    std::string label;
    std::vector<BellExpression> summands;

    BellExpression flattened() const;
};

/// The N-partite separation inequality over the given ordered parties:
/// cyclic terms with settings (1,2,...,2) each +1, the extra all-2 term for
/// even N, and the all-1 term carrying the -1. `minus_position` moves the -1
/// onto another term of the list (the all-1 term then turns +1); every
/// variant has local-realistic minimum 0.
BellExpression build_separation_bell(const std::vector<int>& parties,
                                     std::optional<int> minus_position = std::nullopt);

/// The variant of the N-partite separation inequality whose negative term
/// carries the given per-party settings: party k's settings are relabeled
/// 1 <-> 2 wherever minus_settings[k] == 2.
BellExpression build_separation_bell_variant(const std::vector<int>& parties,
                                             const std::vector<int>& minus_settings);

/// The tripartite d-outcome quasi-distance inequality: 8 terms, signs
/// (+,+,+,-,+,+,+,-). `direction_swapped` flips every comparison.
BellExpression build_zg_svetlichny(int d, bool direction_swapped = false);

enum class MonogamyPreset {
    primary_ABC_ABD,
    strong3_4party,
    full4_4party,
    division_N5_AB,
    primary_quasi,
};

MonogamyPreset monogamy_preset_from_name(const std::string& name);
std::string monogamy_preset_name(MonogamyPreset preset);
std::vector<std::string> monogamy_preset_names();

/// Builds a monogamy preset over the given party pool (4 parties for the
/// tripartite presets and primary_quasi, 6 for division_N5_AB). `d` is the
/// outcome count for primary_quasi and must stay 2 elsewhere.
MonogamyExpression compose_monogamy(MonogamyPreset preset, const std::vector<int>& pool,
                                    int d = 2);

/// Signed sum of term values, absent parties at fill setting 1.
double evaluate(const BellExpression& expression, const Behavior& behavior);
double evaluate(const MonogamyExpression& expression, const Behavior& behavior);

/// Exact evaluation on a deterministic strategy (every term value is 0 or 1).
long evaluate_on_strategy(const BellExpression& expression, const DeterministicStrategy& strategy);
long evaluate_on_strategy(const MonogamyExpression& expression,
                          const DeterministicStrategy& strategy);

std::string expression_to_json(const BellExpression& expression, int indent = 2);
std::string expression_to_json(const MonogamyExpression& expression, int indent = 2);

/// Parses either a BellExpression or a MonogamyExpression document.
std::variant<BellExpression, MonogamyExpression> expression_from_json(const std::string& text);

} // namespace sepbell
