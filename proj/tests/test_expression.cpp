#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "sepbell/expression.hpp"

using namespace sepbell;

namespace {

// (sign, canonical label) multiset for order-insensitive comparisons
std::multiset<std::pair<int, std::string>> term_multiset(const BellExpression& e) {
    std::multiset<std::pair<int, std::string>> out;
    for (const auto& st : e.terms) {
        out.insert({st.sign, std::visit([](const auto& t) { return t.label(); }, st.term)});
    }
    return out;
}

} // namespace

TEST_CASE("tripartite separation inequality has the canonical four terms") {
    const auto expr = build_separation_bell({0, 1, 2});
    REQUIRE(expr.terms.size() == 4);
    CHECK(term_multiset(expr) == std::multiset<std::pair<int, std::string>>{
                                     {+1, "A1B2C2"},
                                     {+1, "A2B1C2"},
                                     {+1, "A2B2C1"},
                                     {-1, "A1B1C1"},
                                 });
    CHECK(expr.scenario.n_parties == 3);
    CHECK(expr.parties() == std::vector<int>{0, 1, 2});
}

TEST_CASE("minus position swaps the negative term") {
    const auto expr = build_separation_bell({0, 1, 3}, 0);
    CHECK(term_multiset(expr) == std::multiset<std::pair<int, std::string>>{
                                     {-1, "A1B2D2"},
                                     {+1, "A2B1D2"},
                                     {+1, "A2B2D1"},
                                     {+1, "A1B1D1"},
                                 });
    CHECK_THROWS_AS(build_separation_bell({0, 1, 2}, 4), InputError);
    CHECK_THROWS_AS(build_separation_bell({0, 1}), UnsupportedScenarioError);
    CHECK_THROWS_AS(build_separation_bell({0, 1, 1}), InputError);
}

TEST_CASE("even party count adds the all-2 term") {
    const auto expr = build_separation_bell({0, 1, 2, 3});
    REQUIRE(expr.terms.size() == 6);
    const auto terms = term_multiset(expr);
    CHECK(terms.count({+1, "A2B2C2D2"}) == 1);
    CHECK(terms.count({-1, "A1B1C1D1"}) == 1);
}

TEST_CASE("setting-2 events appear an even number of times across the positive set") {
    for (int n : {3, 5, 7}) {
        std::vector<int> parties;
        for (int i = 0; i < n; ++i) parties.push_back(i);
        const auto expr = build_separation_bell(parties);
        std::map<std::string, int> count;
        for (const auto& st : expr.terms) {
            if (st.sign < 0) continue;
            for (const auto& e : std::get<SeparationTerm>(st.term).events) {
                if (e.setting == 2) count[event_label(e)] += 1;
            }
        }
        for (const auto& [label, c] : count) {
            INFO(label);
            CHECK(c % 2 == 0);
        }
    }
}

TEST_CASE("variant builder lands the negative term on the requested settings") {
    const auto expr = build_separation_bell_variant({0, 1, 3}, {2, 1, 2});
    CHECK(term_multiset(expr) == std::multiset<std::pair<int, std::string>>{
                                     {+1, "A1B2D2"},
                                     {-1, "A2B1D2"},
                                     {+1, "A2B2D1"},
                                     {+1, "A1B1D1"},
                                 });
    // for tripartite inequalities the relabeled set coincides with a minus swap
    CHECK(term_multiset(expr) == term_multiset(build_separation_bell({0, 1, 3}, 1)));
}

TEST_CASE("quasi-distance inequality structure") {
    const auto expr = build_zg_svetlichny(2);
    REQUIRE(expr.terms.size() == 8);
    CHECK(expr.terms[0].sign == 1);
    CHECK(std::get<QuasiTerm>(expr.terms[0].term).label() == "[A1+B2]<C2");
    CHECK(expr.terms[3].sign == -1);
    CHECK(std::get<QuasiTerm>(expr.terms[3].term).label() == "[A1+B2]<C1");
    CHECK(expr.terms[7].sign == -1);
    CHECK(std::get<QuasiTerm>(expr.terms[7].term).label() == "[A1+B1]<C1");
    int negatives = 0;
    for (const auto& st : expr.terms) negatives += st.sign < 0;
    CHECK(negatives == 2);

    const auto swapped = build_zg_svetlichny(2, true);
    CHECK(std::get<QuasiTerm>(swapped.terms[0].term).label() == "C2<[A1+B2]");
    CHECK_THROWS_AS(build_zg_svetlichny(1), InputError);
}

TEST_CASE("uniform behavior evaluations") {
    const auto uniform3 = Behavior::uniform(Scenario(3, 2));
    CHECK(evaluate(build_separation_bell({0, 1, 2}), uniform3) == doctest::Approx(1.0));
    // every quasi term is 1/4 on the uniform 3-party binary behavior
    CHECK(evaluate(build_zg_svetlichny(2), uniform3) == doctest::Approx(1.0));
}

TEST_CASE("monogamy presets have the quoted negative terms") {
    const auto primary = compose_monogamy(MonogamyPreset::primary_ABC_ABD, {0, 1, 2, 3});
    REQUIRE(primary.summands.size() == 2);
    CHECK(primary.flattened().terms.size() == 8);
    const auto all = term_multiset(primary.flattened());
    CHECK(all.count({-1, "A1B1C1"}) == 1);
    CHECK(all.count({-1, "A2B1D2"}) == 1);
    CHECK(all.count({+1, "A1B2D2"}) == 1);

    const auto strong = compose_monogamy(MonogamyPreset::strong3_4party, {0, 1, 2, 3});
    REQUIRE(strong.summands.size() == 3);
    const auto strong_terms = term_multiset(strong.flattened());
    CHECK(strong_terms.count({-1, "A1B1C1"}) == 1);
    CHECK(strong_terms.count({-1, "A1B2D2"}) == 1);
    CHECK(strong_terms.count({-1, "A2C1D2"}) == 1);

    const auto full = compose_monogamy(MonogamyPreset::full4_4party, {0, 1, 2, 3});
    REQUIRE(full.summands.size() == 4);
    CHECK(full.flattened().terms.size() == 16);
    CHECK(term_multiset(full.flattened()).count({-1, "B1C2D2"}) == 1);
    CHECK(term_multiset(full.summands[3]) == std::multiset<std::pair<int, std::string>>{
                                                 {-1, "B1C2D2"},
                                                 {+1, "B2C1D2"},
                                                 {+1, "B2C2D1"},
                                                 {+1, "B1C1D1"},
                                             });

    const auto division = compose_monogamy(MonogamyPreset::division_N5_AB, {0, 1, 2, 3, 4, 5});
    REQUIRE(division.summands.size() == 4);
    CHECK(division.flattened().terms.size() == 24);
    const auto div_terms = term_multiset(division.flattened());
    CHECK(div_terms.count({-1, "A1B1C1D1E1"}) == 1);
    CHECK(div_terms.count({-1, "A2B2C1D2F1"}) == 1);
    CHECK(div_terms.count({-1, "A2B2C2E1F2"}) == 1);
    CHECK(div_terms.count({-1, "A2B2D1E2F2"}) == 1);
    for (const auto& summand : division.summands) {
        CHECK(summand.terms.size() == 6);
        int negatives = 0;
        for (const auto& st : summand.terms) negatives += st.sign < 0;
        CHECK(negatives == 1);
    }

    const auto quasi = compose_monogamy(MonogamyPreset::primary_quasi, {0, 1, 2, 3}, 3);
    REQUIRE(quasi.summands.size() == 2);
    CHECK(quasi.flattened().terms.size() == 16);
    CHECK(quasi.scenario.n_outcomes == 3);

    CHECK_THROWS_AS(compose_monogamy(MonogamyPreset::primary_ABC_ABD, {0, 1, 2}), InputError);
    CHECK_THROWS_AS(monogamy_preset_from_name("nope"), InputError);
}

TEST_CASE("primary monogamy is nonnegative on every deterministic strategy") {
    // brute-force oracle over all 256 strategies of the 4-party scenario
    const auto primary = compose_monogamy(MonogamyPreset::primary_ABC_ABD, {0, 1, 2, 3});
    const Scenario sc = primary.scenario;
    REQUIRE(strategy_count(sc) == 256);
    long minimum = 1000;
    for (std::uint64_t i = 0; i < 256; ++i) {
        const auto strategy = strategy_from_index(sc, i);
        const long v = evaluate_on_strategy(primary, strategy);
        minimum = std::min(minimum, v);
        // the integer path agrees with the behavior path
        if (i % 37 == 0) {
            CHECK(evaluate(primary, behavior_from_strategy(strategy, sc)) ==
                  doctest::Approx(static_cast<double>(v)).epsilon(1e-12));
        }
    }
    CHECK(minimum == 0);
}

TEST_CASE("expression JSON round-trips") {
    const auto eq2 = build_separation_bell({0, 1, 2});
    const auto parsed = expression_from_json(expression_to_json(eq2));
    REQUIRE(std::holds_alternative<BellExpression>(parsed));
    CHECK(term_multiset(std::get<BellExpression>(parsed)) == term_multiset(eq2));

    const auto zg = build_zg_svetlichny(3, true);
    const auto parsed_zg = expression_from_json(expression_to_json(zg));
    CHECK(term_multiset(std::get<BellExpression>(parsed_zg)) == term_multiset(zg));
    CHECK(std::get<BellExpression>(parsed_zg).scenario.n_outcomes == 3);

    const auto mono = compose_monogamy(MonogamyPreset::full4_4party, {0, 1, 2, 3});
    const auto parsed_mono = expression_from_json(expression_to_json(mono));
    REQUIRE(std::holds_alternative<MonogamyExpression>(parsed_mono));
    const auto& m = std::get<MonogamyExpression>(parsed_mono);
    REQUIRE(m.summands.size() == 4);
    CHECK(term_multiset(m.flattened()) == term_multiset(mono.flattened()));

    CHECK_THROWS_AS(expression_from_json("{]"), ParseError);
    CHECK_THROWS_AS(expression_from_json("{\"label\":\"x\"}"), ParseError);
}
