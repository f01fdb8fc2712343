#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sepbell/scenario.hpp"

namespace sepbell {

/// Tolerance for analytically constructed tables (exact arithmetic, codecs).
inline constexpr double kAnalyticTol = 1e-12;
/// Tolerance for numerically constructed tables (LP optimizers, state vectors).
inline constexpr double kNumericTol = 1e-9;

/// Conditional outcome distributions p(outcomes | settings) for every setting
/// combination. Immutable after construction; entries indexed by
/// (setting-tuple index, outcome-tuple index).
class Behavior {
  public:
    /// Validates shape, nonnegativity and per-setting normalization at `tol`.
    /// Entries within -tol of zero are clamped to exactly zero.
    Behavior(Scenario scenario, std::vector<double> table, double tol = kAnalyticTol);

    static Behavior uniform(const Scenario& scenario);

    const Scenario& scenario() const { return scenario_; }
    const std::vector<double>& table() const { return table_; }

    double p(std::uint64_t setting_index, std::uint64_t outcome_index) const {
        return table_[setting_index * scenario_.outcome_tuples() + outcome_index];
    }

    /// Re-checks the construction invariants; throws ValidationError.
    void validate(double tol = kAnalyticTol) const;

  private:
    Scenario scenario_;
    std::vector<double> table_;
};

struct NoSignalingReport {
    double max_violation = 0.0;
    std::vector<double> per_party;
    double tolerance = kNumericTol;

    bool pass() const { return max_violation <= tolerance; }
};

/// For each party, the worst marginal shift of the other parties' outcome
/// distribution when that party switches settings. Throws ValidationError on
/// malformed tables instead of reporting a violation.
NoSignalingReport validate_no_signaling(const Behavior& behavior, double tol = kNumericTol);

/// The deterministic behavior realizing a strategy: exactly one outcome tuple
/// per setting tuple.
Behavior behavior_from_strategy(const DeterministicStrategy& strategy, const Scenario& scenario);

/// Convex combination; weights must be nonnegative and sum to 1 within 1e-12.
Behavior mix(const std::vector<Behavior>& components, const std::vector<double>& weights);

/// JSON codec. Settings keys are digit strings "12..1", outcome keys "010..".
/// Round-trips losslessly (17 significant digits).
std::string behavior_to_json(const Behavior& behavior, int indent = 2);
Behavior behavior_from_json(const std::string& text);

} // namespace sepbell
