#pragma once

#include <map>
#include <string>
#include <vector>

#include "sepbell/expression.hpp"

namespace sepbell {

enum class PointKind { separation_point, quasi_point };

/// A composite event in a triangle-inequality chain. Separation points are
/// symmetric differences of atomic events: unordered, and a repeated event
/// cancels itself. Quasi points are modular sums whose written order is kept.
struct MetricPoint {
    PointKind kind = PointKind::separation_point;
    std::vector<PartySetting> events;

    static MetricPoint separation(std::vector<PartySetting> events);
    static MetricPoint quasi(std::vector<PartySetting> events);

    std::string label() const; // "A1B2", "C1", "[A1+B2]"
};

enum class StepMode {
    symmetric, // d(x,y) + d(y,z) >= d(x,z)
    directed,  // P(x<y) + P(y<z) >= P(x<z)
};

struct TriangleStep {
    StepMode mode = StepMode::symmetric;
    MetricPoint x, y, z;
};

/// Distance label contributed by a pair of points: the separation of the
/// points' symmetric difference, or the directed "u<v" comparison.
std::string step_term_label(const MetricPoint& a, const MetricPoint& b, StepMode mode);

/// Signed multiset of term labels.
using SignedLabels = std::map<std::string, int>;

struct ChainProof {
    std::string label;
    std::vector<TriangleStep> steps;
    SignedLabels target;
};

struct ChainVerdict {
    bool valid = false;
    SignedLabels residual; // net labels left after cancellation
};

/// Adds every step as (both left terms, +1) and (right term, -1), cancels
/// equal labels, and compares the residual against the target. Bridge terms
/// must vanish exactly; matching labels across steps is precisely the
/// no-signaling context-independence assumption.
ChainVerdict verify_chain(const ChainProof& proof);

/// Signed label multiset of an expression, for use as a chain target.
SignedLabels expression_target(const BellExpression& expression);

/// The six built-in chains: the tripartite inequality, the primary monogamy,
/// two pairwise monogamies of the four-expression family, the d-outcome
/// inequality and its primary monogamy. All verify.
std::vector<ChainProof> builtin_proofs();

/// Proof DSL: one step per line, `SEP x ; y ; z` or `QUASI x -> y -> z`,
/// targets as `TARGET +term / -term / ...` lines, `#` comments.
ChainProof parse_proof(const std::string& text);

} // namespace sepbell
