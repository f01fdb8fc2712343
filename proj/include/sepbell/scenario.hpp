#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sepbell/errors.hpp"

namespace sepbell {

/// Measurement scenario: n parties, two settings per party, d outcomes per
/// setting (uniform across parties). Settings are written 1 and 2 throughout
/// the public API; outcomes are 0..d-1.
struct Scenario {
    int n_parties = 0;
    int n_settings = 2;
    int n_outcomes = 2;

    Scenario() = default;
    Scenario(int parties, int outcomes);

    std::uint64_t setting_tuples() const;
    std::uint64_t outcome_tuples() const;
    std::uint64_t table_size() const;

    // Mixed-radix codecs, party 0 most significant. Settings are 1-based.
    std::uint64_t setting_index(const std::vector<int>& settings) const;
    std::vector<int> setting_tuple(std::uint64_t index) const;
    std::uint64_t outcome_index(const std::vector<int>& outcomes) const;
    std::vector<int> outcome_tuple(std::uint64_t index) const;

    bool operator==(const Scenario&) const = default;
};

/// Party 0 is "A", 1 is "B", ...
std::string party_name(int party);
int party_from_name(const std::string& name);

/// One fixed outcome per (party, setting); the extreme points of the local
/// polytope.
struct DeterministicStrategy {
    std::vector<std::array<int, 2>> outcomes; // [party][setting-1]

    int outcome_for(int party, int setting) const {
        return outcomes[static_cast<std::size_t>(party)][static_cast<std::size_t>(setting - 1)];
    }
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

/// (d^2)^n_parties; throws CapExceededError on 64-bit overflow.
std::uint64_t strategy_count(const Scenario& scenario);

/// Decodes the strategy with the given lexicographic index.
DeterministicStrategy strategy_from_index(const Scenario& scenario, std::uint64_t index);

/// Materializes every strategy in lexicographic order. Refuses when the count
/// exceeds the cap.
std::vector<DeterministicStrategy> enumerate_strategies(
    const Scenario& scenario, std::uint64_t cap = kDefaultEnumerationCap);

/// Streaming variant: calls fn(strategy) for every strategy, in order.
template <class Fn>
void for_each_strategy(const Scenario& scenario, Fn&& fn,
                       std::uint64_t cap = kDefaultEnumerationCap) {
    const std::uint64_t count = strategy_count(scenario);
    if (count > cap) {
        throw CapExceededError("strategy count " + std::to_string(count) +
                               " exceeds enumeration cap " + std::to_string(cap));
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        fn(strategy_from_index(scenario, i));
    }
}

} // namespace sepbell
