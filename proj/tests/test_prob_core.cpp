#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sepbell/behavior.hpp"

using namespace sepbell;

namespace {

Behavior random_behavior(const Scenario& sc, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> table(sc.table_size());
    const std::uint64_t n_out = sc.outcome_tuples();
    for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
        double sum = 0.0;
        for (std::uint64_t o = 0; o < n_out; ++o) sum += table[s * n_out + o] = uni(rng);
        for (std::uint64_t o = 0; o < n_out; ++o) table[s * n_out + o] /= sum;
    }
    return Behavior(sc, std::move(table), kNumericTol);
}

} // namespace

TEST_CASE("scenario codecs round-trip") {
    const Scenario sc(3, 3);
    CHECK(sc.setting_tuples() == 8);
    CHECK(sc.outcome_tuples() == 27);
    for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
        CHECK(sc.setting_index(sc.setting_tuple(s)) == s);
    }
    for (std::uint64_t o = 0; o < sc.outcome_tuples(); ++o) {
        CHECK(sc.outcome_index(sc.outcome_tuple(o)) == o);
    }
    CHECK(sc.setting_index({1, 1, 1}) == 0);
    CHECK(sc.setting_index({1, 1, 2}) == 1);
    CHECK_THROWS_AS(sc.setting_index({0, 1, 1}), InputError);
    CHECK_THROWS_AS(Scenario(1, 2), InputError);
    CHECK_THROWS_AS(Scenario(3, 1), InputError);
}

TEST_CASE("strategy enumeration counts") {
    CHECK(enumerate_strategies(Scenario(3, 2)).size() == 64);
    CHECK(enumerate_strategies(Scenario(4, 2)).size() == 256);
    CHECK(enumerate_strategies(Scenario(3, 3)).size() == 729);
    CHECK_THROWS_AS(enumerate_strategies(Scenario(3, 3), 100), CapExceededError);

    // every strategy exactly once
    const Scenario sc(2, 2);
    auto all = enumerate_strategies(sc);
    CHECK(all.size() == 16);
    std::set<std::vector<int>> seen;
    for (const auto& s : all) {
        seen.insert({s.outcome_for(0, 1), s.outcome_for(0, 2), s.outcome_for(1, 1),
                     s.outcome_for(1, 2)});
    }
    CHECK(seen.size() == 16);
}

TEST_CASE("uniform behavior is no-signaling with zero violation") {
    const auto behavior = Behavior::uniform(Scenario(3, 2));
    const auto report = validate_no_signaling(behavior);
    CHECK(report.max_violation == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(report.pass());
    CHECK(report.per_party.size() == 3);
}

TEST_CASE("a behavior that signals is flagged with violation 1") {
    // party A outputs party B's setting index: p(a,b|i,j) = [a == j-1][b == 0]
    const Scenario sc(2, 2);
    std::vector<double> table(sc.table_size(), 0.0);
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            table[sc.setting_index({i, j}) * sc.outcome_tuples() + sc.outcome_index({j - 1, 0})] =
                1.0;
        }
    }
    const Behavior behavior(sc, std::move(table));
    const auto report = validate_no_signaling(behavior);
    CHECK(report.max_violation == doctest::Approx(1.0));
    CHECK_FALSE(report.pass());
    // flipping B's setting moves A's marginal, so the violation is B's
    CHECK(report.per_party[1] == doctest::Approx(1.0));
    CHECK(report.per_party[0] == doctest::Approx(0.0));
}

TEST_CASE("deterministic strategies are no-signaling") {
    const Scenario sc(3, 2);
    for (const auto& strategy : enumerate_strategies(sc)) {
        const auto report = validate_no_signaling(behavior_from_strategy(strategy, sc));
        REQUIRE(report.max_violation == 0.0);
    }
}

TEST_CASE("behavior_from_strategy puts unit mass on the strategy outcomes") {
    const Scenario sc(3, 2);
    DeterministicStrategy all_one;
    all_one.outcomes = {{1, 1}, {1, 1}, {1, 1}};
    const auto behavior = behavior_from_strategy(all_one, sc);
    for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
        CHECK(behavior.p(s, sc.outcome_index({1, 1, 1})) == 1.0);
    }

    const Scenario sc2(2, 2);
    DeterministicStrategy echo; // A outputs its setting index - 1, B outputs 0
    echo.outcomes = {{0, 1}, {0, 0}};
    const auto b2 = behavior_from_strategy(echo, sc2);
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            CHECK(b2.p(sc2.setting_index({i, j}), sc2.outcome_index({i - 1, 0})) == 1.0);
        }
    }

    DeterministicStrategy bad;
    bad.outcomes = {{0, 2}, {0, 0}};
    CHECK_THROWS_AS(behavior_from_strategy(bad, sc2), InputError);
}

TEST_CASE("malformed tables raise validation errors, not no-signaling failures") {
    const Scenario sc(2, 2);
    std::vector<double> table(sc.table_size(), 0.3);
    CHECK_THROWS_AS(Behavior(sc, table), ValidationError);
    CHECK_THROWS_AS(Behavior(sc, std::vector<double>(3, 0.5)), ValidationError);
    std::vector<double> negative(sc.table_size(), 0.25);
    negative[0] = -0.25;
    negative[1] = 0.75;
    CHECK_THROWS_AS(Behavior(sc, negative), ValidationError);
}

TEST_CASE("no-signaling report is symmetric under party relabeling") {
    std::mt19937_64 rng(7);
    const Scenario sc(3, 2);
    const auto behavior = random_behavior(sc, rng);
    const auto report = validate_no_signaling(behavior);

    // swap parties 0 and 2
    std::vector<double> swapped(sc.table_size());
    const std::uint64_t n_out = sc.outcome_tuples();
    for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
        auto st = sc.setting_tuple(s);
        std::swap(st[0], st[2]);
        for (std::uint64_t o = 0; o < n_out; ++o) {
            auto ot = sc.outcome_tuple(o);
            std::swap(ot[0], ot[2]);
            swapped[sc.setting_index(st) * n_out + sc.outcome_index(ot)] = behavior.p(s, o);
        }
    }
    const auto report2 = validate_no_signaling(Behavior(sc, std::move(swapped), kNumericTol));
    CHECK(report2.max_violation == doctest::Approx(report.max_violation).epsilon(1e-12));
    CHECK(report2.per_party[0] == doctest::Approx(report.per_party[2]).epsilon(1e-12));
    CHECK(report2.per_party[2] == doctest::Approx(report.per_party[0]).epsilon(1e-12));
    CHECK(report2.per_party[1] == doctest::Approx(report.per_party[1]).epsilon(1e-12));
}

TEST_CASE("mixture violation is at most the weight-averaged component violation") {
    std::mt19937_64 rng(11);
    const Scenario sc(2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto b1 = random_behavior(sc, rng);
        const auto b2 = random_behavior(sc, rng);
        const auto b3 = random_behavior(sc, rng);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double w1 = uni(rng), w2 = uni(rng), w3 = uni(rng);
        const double sum = w1 + w2 + w3;
        w1 /= sum; w2 /= sum; w3 /= sum;
        const auto mixed = mix({b1, b2, b3}, {w1, w2, w3});
        const double bound = w1 * validate_no_signaling(b1).max_violation +
                             w2 * validate_no_signaling(b2).max_violation +
                             w3 * validate_no_signaling(b3).max_violation;
        CHECK(validate_no_signaling(mixed).max_violation <= bound + 1e-12);
    }
}

TEST_CASE("behavior JSON round-trips losslessly") {
    std::mt19937_64 rng(23);
    const Scenario sc(3, 3);
    const auto behavior = random_behavior(sc, rng);
    const auto parsed = behavior_from_json(behavior_to_json(behavior));
    REQUIRE(parsed.scenario() == sc);
    for (std::size_t i = 0; i < behavior.table().size(); ++i) {
        REQUIRE(parsed.table()[i] == behavior.table()[i]); // bit-exact round trip
    }
    CHECK_THROWS_AS(behavior_from_json("{"), ParseError);
    CHECK_THROWS_AS(behavior_from_json("{\"scenario\":{\"parties\":2,\"outcomes\":2}}"),
                    ParseError);
}
