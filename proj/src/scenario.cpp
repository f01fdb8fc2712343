#include "sepbell/scenario.hpp"

#include <limits>

namespace sepbell {

namespace {

std::uint64_t checked_pow(std::uint64_t base, int exp, const char* what) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
            throw CapExceededError(std::string(what) + ": size overflows 64 bits");
        }
        r *= base;
    }
    return r;
}

} // namespace

Scenario::Scenario(int parties, int outcomes) : n_parties(parties), n_outcomes(outcomes) {
    if (parties < 2) throw InputError("scenario needs at least 2 parties");
    if (outcomes < 2) throw InputError("scenario needs at least 2 outcomes");
    checked_pow(static_cast<std::uint64_t>(n_settings) * n_outcomes, parties, "scenario table");
}

std::uint64_t Scenario::setting_tuples() const {
    return checked_pow(static_cast<std::uint64_t>(n_settings), n_parties, "setting tuples");
}

std::uint64_t Scenario::outcome_tuples() const {
    return checked_pow(static_cast<std::uint64_t>(n_outcomes), n_parties, "outcome tuples");
}

std::uint64_t Scenario::table_size() const {
    return setting_tuples() * outcome_tuples();
}

std::uint64_t Scenario::setting_index(const std::vector<int>& settings) const {
    if (static_cast<int>(settings.size()) != n_parties) {
        throw InputError("setting tuple has wrong arity");
    }
    std::uint64_t idx = 0;
    for (int s : settings) {
        if (s < 1 || s > n_settings) throw InputError("setting out of range (use 1 or 2)");
        idx = idx * n_settings + static_cast<std::uint64_t>(s - 1);
    }
    return idx;
}

std::vector<int> Scenario::setting_tuple(std::uint64_t index) const {
    std::vector<int> out(static_cast<std::size_t>(n_parties));
    for (int k = n_parties - 1; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = static_cast<int>(index % n_settings) + 1;
        index /= n_settings;
    }
    return out;
}

std::uint64_t Scenario::outcome_index(const std::vector<int>& outcomes) const {
    if (static_cast<int>(outcomes.size()) != n_parties) {
        throw InputError("outcome tuple has wrong arity");
    }
    std::uint64_t idx = 0;
    for (int o : outcomes) {
        if (o < 0 || o >= n_outcomes) throw InputError("outcome out of range");
        idx = idx * n_outcomes + static_cast<std::uint64_t>(o);
    }
    return idx;
}

std::vector<int> Scenario::outcome_tuple(std::uint64_t index) const {
    std::vector<int> out(static_cast<std::size_t>(n_parties));
    for (int k = n_parties - 1; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = static_cast<int>(index % n_outcomes);
        index /= n_outcomes;
    }
    return out;
}

std::string party_name(int party) {
    if (party < 0) throw InputError("negative party index");
    std::string name;
    // base-26 with A..Z; parties beyond Z get A1-style suffixes never needed at desk scale
    if (party < 26) {
        name.push_back(static_cast<char>('A' + party));
    } else {
        name = "P" + std::to_string(party);
    }
    return name;
}

int party_from_name(const std::string& name) {
    if (name.size() == 1 && name[0] >= 'A' && name[0] <= 'Z') return name[0] - 'A';
    if (name.size() > 1 && name[0] == 'P') return std::stoi(name.substr(1));
    throw InputError("unknown party name: " + name);
}

std::uint64_t strategy_count(const Scenario& scenario) {
    const auto per_party = static_cast<std::uint64_t>(scenario.n_outcomes) * scenario.n_outcomes;
    return checked_pow(per_party, scenario.n_parties, "strategy count");
}

DeterministicStrategy strategy_from_index(const Scenario& scenario, std::uint64_t index) {
    DeterministicStrategy s;
    s.outcomes.resize(static_cast<std::size_t>(scenario.n_parties));
    const auto d = static_cast<std::uint64_t>(scenario.n_outcomes);
    for (int k = scenario.n_parties - 1; k >= 0; --k) {
        const int o2 = static_cast<int>(index % d);
        index /= d;
        const int o1 = static_cast<int>(index % d);
        index /= d;
        s.outcomes[static_cast<std::size_t>(k)] = {o1, o2};
    }
    return s;
}

std::vector<DeterministicStrategy> enumerate_strategies(const Scenario& scenario,
                                                        std::uint64_t cap) {
    std::vector<DeterministicStrategy> all;
    const std::uint64_t count = strategy_count(scenario);
    if (count > cap) {
        throw CapExceededError("strategy count " + std::to_string(count) +
                               " exceeds enumeration cap " + std::to_string(cap));
    }
    all.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) {
        all.push_back(strategy_from_index(scenario, i));
    }
    return all;
}

} // namespace sepbell
