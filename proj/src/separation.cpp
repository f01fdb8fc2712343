#include "sepbell/separation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace sepbell {

std::string event_label(const PartySetting& ps) {
    return party_name(ps.party) + std::to_string(ps.setting);
}

SeparationTerm::SeparationTerm(std::vector<PartySetting> evs) : events(std::move(evs)) {
    if (events.size() < 2) throw InputError("separation term needs arity >= 2");
    for (const auto& e : events) {
        if (e.setting != 1 && e.setting != 2) throw InputError("setting must be 1 or 2");
    }
    auto sorted = events;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].party == sorted[i - 1].party) {
            throw InputError("separation term repeats a party");
        }
    }
}

std::string SeparationTerm::label() const {
    auto sorted = events;
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    for (const auto& e : sorted) out += event_label(e);
    return out;
}

QuasiTerm::QuasiTerm(std::vector<PartySetting> lhs_events, PartySetting rhs_event,
                     QuasiDirection dir)
    : lhs(std::move(lhs_events)), rhs(rhs_event), direction(dir) {
    if (lhs.empty()) throw InputError("quasi term needs a nonempty lhs");
    std::vector<int> parties;
    for (const auto& e : lhs) {
        if (e.setting != 1 && e.setting != 2) throw InputError("setting must be 1 or 2");
        parties.push_back(e.party);
    }
    parties.push_back(rhs.party);
    std::sort(parties.begin(), parties.end());
    if (std::adjacent_find(parties.begin(), parties.end()) != parties.end()) {
        throw InputError("quasi term repeats a party");
    }
}

std::string QuasiTerm::label() const {
    std::string sum;
    if (lhs.size() == 1) {
        sum = event_label(lhs.front());
    } else {
        sum = "[";
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            if (i) sum += "+";
            sum += event_label(lhs[i]);
        }
        sum += "]";
    }
    const std::string r = event_label(rhs);
    return direction == QuasiDirection::lhs_less_than_rhs ? sum + "<" + r : r + "<" + sum;
}

namespace {

std::vector<int> term_settings(const Scenario& sc, const std::vector<PartySetting>& events,
                               int fill_setting) {
    if (fill_setting != 1 && fill_setting != 2) throw InputError("fill setting must be 1 or 2");
    std::vector<int> settings(static_cast<std::size_t>(sc.n_parties), fill_setting);
    for (const auto& e : events) {
        if (e.party < 0 || e.party >= sc.n_parties) {
            throw InputError("term references unknown party " + party_name(e.party));
        }
        settings[static_cast<std::size_t>(e.party)] = e.setting;
    }
    return settings;
}

} // namespace

double separation_value(const Behavior& behavior, const SeparationTerm& term, int fill_setting) {
    const Scenario& sc = behavior.scenario();
    if (sc.n_outcomes != 2) {
        throw UnsupportedScenarioError("separation values need binary outcomes");
    }
    const auto settings = term_settings(sc, term.events, fill_setting);
    const std::uint64_t s = sc.setting_index(settings);

    double total = 0.0;
    const std::uint64_t n_out = sc.outcome_tuples();
    for (std::uint64_t o = 0; o < n_out; ++o) {
        const auto outcomes = sc.outcome_tuple(o);
        int ones = 0;
        for (const auto& e : term.events) ones += outcomes[static_cast<std::size_t>(e.party)];
        if (ones % 2 == 1) total += behavior.p(s, o);
    }
    return total;
}

double quasi_value(const Behavior& behavior, const QuasiTerm& term) {
    const Scenario& sc = behavior.scenario();
    auto events = term.lhs;
    events.push_back(term.rhs);
    const auto settings = term_settings(sc, events, 1);
    const std::uint64_t s = sc.setting_index(settings);
    const int d = sc.n_outcomes;

    double total = 0.0;
    const std::uint64_t n_out = sc.outcome_tuples();
    for (std::uint64_t o = 0; o < n_out; ++o) {
        const auto outcomes = sc.outcome_tuple(o);
        int sum = 0;
        for (const auto& e : term.lhs) sum += outcomes[static_cast<std::size_t>(e.party)];
        sum %= d;
        const int r = outcomes[static_cast<std::size_t>(term.rhs.party)];
        const bool hit =
            term.direction == QuasiDirection::lhs_less_than_rhs ? (r > sum) : (r < sum);
        if (hit) total += behavior.p(s, o);
    }
    return total;
}

double event_space_separation(const std::vector<double>& dist, const std::vector<int>& events) {
    const std::size_t atoms = dist.size();
    if (atoms == 0 || (atoms & (atoms - 1)) != 0) {
        throw InputError("event-space distribution size must be a power of 2");
    }
    const int n = std::countr_zero(atoms);
    double sum = 0.0;
    for (double p : dist) {
        if (!(p >= -1e-15)) throw ValidationError("event-space distribution has negative mass");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("event-space distribution is not normalized");
    }
    // events appearing an even number of times cancel (X xor X is empty)
    std::uint64_t mask = 0;
    for (int e : events) {
        if (e < 0 || e >= n) throw InputError("event index out of range");
        mask ^= (std::uint64_t{1} << e);
    }
    double total = 0.0;
    for (std::size_t atom = 0; atom < atoms; ++atom) {
        if (std::popcount(atom & mask) % 2 == 1) total += dist[atom];
    }
    return total;
}

double event_space_separation(const std::vector<double>& dist) {
    const std::size_t atoms = dist.size();
    if (atoms == 0 || (atoms & (atoms - 1)) != 0) {
        throw InputError("event-space distribution size must be a power of 2");
    }
    const int n = std::countr_zero(atoms);
    std::vector<int> events(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) events[static_cast<std::size_t>(i)] = i;
    return event_space_separation(dist, events);
}

} // namespace sepbell
