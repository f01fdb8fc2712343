#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "sepbell/behavior.hpp"

namespace sepbell {

struct PartySetting {
    int party = 0;
    int setting = 1; // 1 or 2

    auto operator<=>(const PartySetting&) const = default;
};

/// Label like "A1" or "D2".
std::string event_label(const PartySetting& ps);

/// Statistical separation of N >= 2 single-party events: the probability that
/// an odd number of them occur, where "occurs" means encoded outcome 1.
struct SeparationTerm {
    std::vector<PartySetting> events;

    SeparationTerm() = default;
    explicit SeparationTerm(std::vector<PartySetting> evs);

    std::string label() const; // party-sorted, e.g. "A1B2C2"
};

enum class QuasiDirection {
    lhs_less_than_rhs, // P(rhs outcome > sum of lhs outcomes mod d)
    rhs_less_than_lhs, // strict converse
};

/// Quasi-distance term P([X+Y+...] < Z) or P(Z < [X+Y+...]); comparisons are
/// strict, on residues 0..d-1. Not symmetric: the direction is explicit.
struct QuasiTerm {
    std::vector<PartySetting> lhs; // order preserved
    PartySetting rhs;
    QuasiDirection direction = QuasiDirection::lhs_less_than_rhs;

    QuasiTerm() = default;
    QuasiTerm(std::vector<PartySetting> lhs_events, PartySetting rhs_event, QuasiDirection dir);

    std::string label() const; // e.g. "[A1+B2]<C2" or "C2<[A2+B1]"
};

/// Separation of the term's events on a behavior. Parties absent from the
/// term are measured at `fill_setting` and their outcomes marginalized; for
/// no-signaling behaviors the choice is immaterial.
double separation_value(const Behavior& behavior, const SeparationTerm& term,
                        int fill_setting = 1);

/// Quasi-distance of the term on a behavior; absent parties marginalized at
/// fill setting 1.
double quasi_value(const Behavior& behavior, const QuasiTerm& term);

/// Raw event-space separation: dist is a normalized joint distribution over
/// {0,1}^n atoms (bit k of the index = event k occurred). `events` lists the
/// events in the symmetric difference; repeats allowed and cancel pairwise.
double event_space_separation(const std::vector<double>& dist, const std::vector<int>& events);

/// All n events, each once.
double event_space_separation(const std::vector<double>& dist);

} // namespace sepbell
