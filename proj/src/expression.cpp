#include "sepbell/expression.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace sepbell {

std::string SignedTerm::label() const {
    const std::string body = std::visit([](const auto& t) { return t.label(); }, term);
    return (sign >= 0 ? "+" : "-") + body;
}

std::vector<int> BellExpression::parties() const {
    std::set<int> seen;
    for (const auto& st : terms) {
        if (const auto* sep = std::get_if<SeparationTerm>(&st.term)) {
            for (const auto& e : sep->events) seen.insert(e.party);
        } else {
            const auto& q = std::get<QuasiTerm>(st.term);
            for (const auto& e : q.lhs) seen.insert(e.party);
            seen.insert(q.rhs.party);
        }
    }
    return {seen.begin(), seen.end()};
}

BellExpression MonogamyExpression::flattened() const {
    BellExpression flat;
    flat.scenario = scenario;
    flat.label = label + ":flattened";
    for (const auto& summand : summands) {
        flat.terms.insert(flat.terms.end(), summand.terms.begin(), summand.terms.end());
    }
    return flat;
}

namespace {

Scenario scenario_for(const std::vector<int>& parties, int d) {
    int max_party = 0;
    for (int p : parties) {
        if (p < 0) throw InputError("negative party index");
        max_party = std::max(max_party, p);
    }
    return Scenario(std::max(max_party + 1, 2), d);
}

std::string parties_label(const std::vector<int>& parties) {
    std::string s;
    for (int p : parties) s += party_name(p);
    return s;
}

/// Settings patterns of the N-partite inequality: cyclic (1,2,...,2), the
/// all-2 pattern for even N, and the all-1 pattern last.
std::vector<std::vector<int>> standard_patterns(int n) {
    std::vector<std::vector<int>> pats;
    for (int shift = 0; shift < n; ++shift) {
        std::vector<int> pat(static_cast<std::size_t>(n), 2);
        pat[static_cast<std::size_t>(shift)] = 1;
        pats.push_back(std::move(pat));
    }
    if (n % 2 == 0) pats.emplace_back(static_cast<std::size_t>(n), 2);
    pats.emplace_back(static_cast<std::size_t>(n), 1);
    return pats;
}

SeparationTerm make_sep(const std::vector<int>& parties, const std::vector<int>& pattern) {
    std::vector<PartySetting> events;
    events.reserve(parties.size());
    for (std::size_t i = 0; i < parties.size(); ++i) {
        events.push_back({parties[i], pattern[i]});
    }
    return SeparationTerm(std::move(events));
}

} // namespace

BellExpression build_separation_bell(const std::vector<int>& parties,
                                     std::optional<int> minus_position) {
    const int n = static_cast<int>(parties.size());
    if (n < 3) throw UnsupportedScenarioError("separation Bell inequalities need >= 3 parties");
    std::set<int> distinct(parties.begin(), parties.end());
    if (static_cast<int>(distinct.size()) != n) throw InputError("party list repeats a party");

    const auto patterns = standard_patterns(n);
    const int default_minus = static_cast<int>(patterns.size()) - 1; // the all-1 term
    const int minus = minus_position.value_or(default_minus);
    if (minus < 0 || minus >= static_cast<int>(patterns.size())) {
        throw InputError("minus position out of range");
    }

    BellExpression expr;
    expr.scenario = scenario_for(parties, 2);
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        expr.terms.push_back({static_cast<int>(i) == minus ? -1 : +1,
                              make_sep(parties, patterns[i])});
    }
    expr.label = "B_" + parties_label(parties);
    if (minus != default_minus) {
        expr.label += ":minus=" + std::get<SeparationTerm>(expr.terms[static_cast<std::size_t>(minus)].term).label();
    }
    return expr;
}

BellExpression build_separation_bell_variant(const std::vector<int>& parties,
                                             const std::vector<int>& minus_settings) {
    if (minus_settings.size() != parties.size()) {
        throw InputError("minus settings arity does not match party list");
    }
    for (int s : minus_settings) {
        if (s != 1 && s != 2) throw InputError("setting must be 1 or 2");
    }
    BellExpression expr = build_separation_bell(parties);
    // relabel party k's settings wherever the requested negative term uses setting 2;
    // the all-1 term then lands exactly on minus_settings
    for (auto& st : expr.terms) {
        auto& sep = std::get<SeparationTerm>(st.term);
        for (std::size_t i = 0; i < parties.size(); ++i) {
            if (minus_settings[i] != 2) continue;
            for (auto& e : sep.events) {
                if (e.party == parties[i]) e.setting = 3 - e.setting;
            }
        }
    }
    expr.label = "B_" + parties_label(parties) + ":minus=" +
                 std::get<SeparationTerm>(expr.terms.back().term).label();
    return expr;
}

namespace {

QuasiDirection flip(QuasiDirection d) {
    return d == QuasiDirection::lhs_less_than_rhs ? QuasiDirection::rhs_less_than_lhs
                                                  : QuasiDirection::lhs_less_than_rhs;
}

struct ZgRow {
    int sign;
    int i, j, k;          // settings of the two summed parties and the compared one
    QuasiDirection dir;   // lhs_less_than_rhs encodes P([X+Y] < Z)
};

// Term order follows the inequality's two four-term halves.
constexpr ZgRow kZgRows[] = {
    {+1, 1, 2, 2, QuasiDirection::lhs_less_than_rhs},
    {+1, 2, 1, 2, QuasiDirection::rhs_less_than_lhs},
    {+1, 2, 1, 1, QuasiDirection::lhs_less_than_rhs},
    {-1, 1, 2, 1, QuasiDirection::lhs_less_than_rhs},
    {+1, 1, 1, 2, QuasiDirection::lhs_less_than_rhs},
    {+1, 2, 2, 2, QuasiDirection::rhs_less_than_lhs},
    {+1, 2, 2, 1, QuasiDirection::lhs_less_than_rhs},
    {-1, 1, 1, 1, QuasiDirection::lhs_less_than_rhs},
};

// Companion summand with the comparisons direction-adapted so that the pair
// chains into a no-signaling monogamy.
constexpr ZgRow kZgCompanionRows[] = {
    {+1, 1, 2, 2, QuasiDirection::rhs_less_than_lhs},
    {+1, 2, 1, 1, QuasiDirection::rhs_less_than_lhs},
    {+1, 1, 2, 1, QuasiDirection::lhs_less_than_rhs},
    {-1, 2, 1, 2, QuasiDirection::rhs_less_than_lhs},
    {+1, 1, 1, 2, QuasiDirection::rhs_less_than_lhs},
    {+1, 2, 2, 1, QuasiDirection::rhs_less_than_lhs},
    {+1, 1, 1, 1, QuasiDirection::lhs_less_than_rhs},
    {-1, 2, 2, 2, QuasiDirection::rhs_less_than_lhs},
};

BellExpression build_zg_terms(const ZgRow* rows, std::size_t count, int d, bool swapped,
                              int party_a, int party_b, int party_c) {
    if (d < 2) throw InputError("quasi-distance inequalities need d >= 2");
    BellExpression expr;
    expr.scenario = scenario_for({party_a, party_b, party_c}, d);
    for (std::size_t r = 0; r < count; ++r) {
        const ZgRow& row = rows[r];
        QuasiTerm term({{party_a, row.i}, {party_b, row.j}}, {party_c, row.k},
                       swapped ? flip(row.dir) : row.dir);
        expr.terms.push_back({row.sign, std::move(term)});
    }
    return expr;
}

} // namespace

BellExpression build_zg_svetlichny(int d, bool direction_swapped) {
    BellExpression expr = build_zg_terms(kZgRows, std::size(kZgRows), d, direction_swapped,
                                         0, 1, 2);
    expr.label = "ZG_ABC:d=" + std::to_string(d);
    if (direction_swapped) expr.label += ":swapped";
    return expr;
}

namespace {

BellExpression build_zg_companion(int d, int party_a, int party_b, int party_d) {
    BellExpression expr = build_zg_terms(kZgCompanionRows, std::size(kZgCompanionRows), d,
                                         false, party_a, party_b, party_d);
    expr.label = "ZG_" + parties_label({party_a, party_b, party_d}) + ":d=" + std::to_string(d);
    return expr;
}

// Five-party summands of the two-party-division monogamy over six parties.
// Positive patterns complete the quoted negative terms so that the four
// minus terms cancel through bridge separations (E1F1 and C2D1), and every
// summand keeps the parity closure that pins its LR minimum at zero.
struct DivisionSummand {
    std::array<int, 5> member_slots;       // positions into the 6-party pool
    std::array<std::array<int, 5>, 6> patterns; // five positive, negative last
};

constexpr DivisionSummand kDivisionN5[] = {
    {{0, 1, 2, 3, 4},
     {{{2, 2, 1, 2, 1}, {2, 2, 2, 2, 1}, {2, 2, 2, 1, 1}, {1, 2, 2, 2, 2}, {2, 1, 2, 2, 2},
       {1, 1, 1, 1, 1}}}},
    {{0, 1, 2, 3, 5},
     {{{1, 1, 1, 1, 1}, {2, 2, 2, 2, 1}, {2, 2, 2, 1, 1}, {1, 2, 2, 2, 2}, {2, 1, 2, 2, 2},
       {2, 2, 1, 2, 1}}}},
    {{0, 1, 2, 4, 5},
     {{{2, 2, 2, 2, 2}, {1, 1, 2, 1, 1}, {1, 1, 2, 2, 2}, {1, 2, 2, 2, 1}, {1, 2, 2, 2, 2},
       {2, 2, 2, 1, 2}}}},
    {{0, 1, 3, 4, 5},
     {{{2, 2, 1, 1, 2}, {1, 1, 1, 1, 1}, {1, 1, 1, 2, 2}, {1, 2, 2, 2, 1}, {1, 2, 2, 2, 2},
       {2, 2, 1, 2, 2}}}},
};

} // namespace

MonogamyPreset monogamy_preset_from_name(const std::string& name) {
    if (name == "primary_ABC_ABD") return MonogamyPreset::primary_ABC_ABD;
    if (name == "strong3_4party") return MonogamyPreset::strong3_4party;
    if (name == "full4_4party") return MonogamyPreset::full4_4party;
    if (name == "division_N5_AB") return MonogamyPreset::division_N5_AB;
    if (name == "primary_quasi") return MonogamyPreset::primary_quasi;
    throw InputError("unknown monogamy preset: " + name);
}

std::string monogamy_preset_name(MonogamyPreset preset) {
    switch (preset) {
        case MonogamyPreset::primary_ABC_ABD: return "primary_ABC_ABD";
        case MonogamyPreset::strong3_4party: return "strong3_4party";
        case MonogamyPreset::full4_4party: return "full4_4party";
        case MonogamyPreset::division_N5_AB: return "division_N5_AB";
        case MonogamyPreset::primary_quasi: return "primary_quasi";
    }
    throw InputError("unknown monogamy preset value");
}

std::vector<std::string> monogamy_preset_names() {
    return {"primary_ABC_ABD", "strong3_4party", "full4_4party", "division_N5_AB",
            "primary_quasi"};
}

MonogamyExpression compose_monogamy(MonogamyPreset preset, const std::vector<int>& pool, int d) {
    const std::size_t want = preset == MonogamyPreset::division_N5_AB ? 6 : 4;
    if (pool.size() != want) {
        throw InputError("preset " + monogamy_preset_name(preset) + " needs a pool of " +
                         std::to_string(want) + " parties");
    }
    if (d != 2 && preset != MonogamyPreset::primary_quasi) {
        throw InputError("preset " + monogamy_preset_name(preset) + " is defined for d = 2");
    }

    MonogamyExpression mono;
    mono.label = monogamy_preset_name(preset);
    const int A = pool[0], B = pool[1], C = pool[2], D = pool[3];

    switch (preset) {
        case MonogamyPreset::primary_ABC_ABD:
            mono.summands.push_back(build_separation_bell_variant({A, B, C}, {1, 1, 1}));
            mono.summands.push_back(build_separation_bell_variant({A, B, D}, {2, 1, 2}));
            break;
        case MonogamyPreset::strong3_4party:
            mono.summands.push_back(build_separation_bell_variant({A, B, C}, {1, 1, 1}));
            mono.summands.push_back(build_separation_bell_variant({A, B, D}, {1, 2, 2}));
            mono.summands.push_back(build_separation_bell_variant({A, C, D}, {2, 1, 2}));
            break;
        case MonogamyPreset::full4_4party:
            mono.summands.push_back(build_separation_bell_variant({A, B, C}, {1, 1, 1}));
            mono.summands.push_back(build_separation_bell_variant({A, B, D}, {1, 2, 2}));
            mono.summands.push_back(build_separation_bell_variant({A, C, D}, {2, 1, 2}));
            mono.summands.push_back(build_separation_bell_variant({B, C, D}, {1, 2, 2}));
            break;
        case MonogamyPreset::division_N5_AB:
            for (const auto& data : kDivisionN5) {
                std::vector<int> members;
                for (int slot : data.member_slots) members.push_back(pool[static_cast<std::size_t>(slot)]);
                BellExpression summand;
                summand.scenario = scenario_for(members, 2);
                for (std::size_t t = 0; t < data.patterns.size(); ++t) {
                    const auto& pat = data.patterns[t];
                    summand.terms.push_back(
                        {t + 1 == data.patterns.size() ? -1 : +1,
                         make_sep(members, std::vector<int>(pat.begin(), pat.end()))});
                }
                summand.label = "B_" + parties_label(members);
                mono.summands.push_back(std::move(summand));
            }
            break;
        case MonogamyPreset::primary_quasi: {
            BellExpression abc = build_zg_terms(kZgRows, std::size(kZgRows), d, false, A, B, C);
            abc.label = "ZG_" + parties_label({A, B, C}) + ":d=" + std::to_string(d);
            mono.summands.push_back(std::move(abc));
            mono.summands.push_back(build_zg_companion(d, A, B, D));
            break;
        }
    }

    std::vector<int> all;
    for (const auto& s : mono.summands) {
        const auto ps = s.parties();
        all.insert(all.end(), ps.begin(), ps.end());
    }
    mono.scenario = scenario_for(all, preset == MonogamyPreset::primary_quasi ? d : 2);
    return mono;
}

double evaluate(const BellExpression& expression, const Behavior& behavior) {
    if (behavior.scenario().n_parties < expression.scenario.n_parties ||
        behavior.scenario().n_outcomes != expression.scenario.n_outcomes) {
        throw InputError("behavior scenario does not cover the expression");
    }
    double total = 0.0;
    for (const auto& st : expression.terms) {
        const double v = std::visit(
            [&](const auto& t) -> double {
                using T = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<T, SeparationTerm>) {
                    return separation_value(behavior, t, 1);
                } else {
                    return quasi_value(behavior, t);
                }
            },
            st.term);
        total += st.sign * v;
    }
    return total;
}

double evaluate(const MonogamyExpression& expression, const Behavior& behavior) {
    double total = 0.0;
    for (const auto& summand : expression.summands) total += evaluate(summand, behavior);
    return total;
}

long evaluate_on_strategy(const BellExpression& expression,
                          const DeterministicStrategy& strategy) {
    const int d = expression.scenario.n_outcomes;
    long total = 0;
    for (const auto& st : expression.terms) {
        int hit = 0;
        if (const auto* sep = std::get_if<SeparationTerm>(&st.term)) {
            int ones = 0;
            for (const auto& e : sep->events) ones += strategy.outcome_for(e.party, e.setting);
            hit = ones % 2;
        } else {
            const auto& q = std::get<QuasiTerm>(st.term);
            int sum = 0;
            for (const auto& e : q.lhs) sum += strategy.outcome_for(e.party, e.setting);
            sum %= d;
            const int r = strategy.outcome_for(q.rhs.party, q.rhs.setting);
            hit = q.direction == QuasiDirection::lhs_less_than_rhs ? (r > sum) : (r < sum);
        }
        total += st.sign * hit;
    }
    return total;
}

long evaluate_on_strategy(const MonogamyExpression& expression,
                          const DeterministicStrategy& strategy) {
    long total = 0;
    for (const auto& summand : expression.summands) {
        total += evaluate_on_strategy(summand, strategy);
    }
    return total;
}

namespace {

nlohmann::json scenario_to_json(const Scenario& sc) {
    return {{"parties", sc.n_parties}, {"settings", sc.n_settings}, {"outcomes", sc.n_outcomes}};
}

Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario sc(j.at("parties").get<int>(), j.at("outcomes").get<int>());
    if (j.contains("settings") && j["settings"].get<int>() != 2) {
        throw ParseError("only two settings per party are supported");
    }
    return sc;
}

nlohmann::json term_to_json(const SignedTerm& st) {
    nlohmann::json j;
    j["sign"] = st.sign;
    if (const auto* sep = std::get_if<SeparationTerm>(&st.term)) {
        j["kind"] = "separation";
        nlohmann::json parties = nlohmann::json::array();
        for (const auto& e : sep->events) parties.push_back({party_name(e.party), e.setting});
        j["parties"] = std::move(parties);
    } else {
        const auto& q = std::get<QuasiTerm>(st.term);
        j["kind"] = "quasi";
        nlohmann::json parties = nlohmann::json::array();
        for (const auto& e : q.lhs) parties.push_back({party_name(e.party), e.setting});
        parties.push_back({party_name(q.rhs.party), q.rhs.setting});
        j["parties"] = std::move(parties);
        j["direction"] = q.direction == QuasiDirection::lhs_less_than_rhs ? "lhs<rhs" : "rhs<lhs";
    }
    return j;
}

SignedTerm term_from_json(const nlohmann::json& j) {
    SignedTerm st;
    st.sign = j.at("sign").get<int>();
    if (st.sign != 1 && st.sign != -1) throw ParseError("term sign must be 1 or -1");
    std::vector<PartySetting> events;
    for (const auto& pair : j.at("parties")) {
        events.push_back({party_from_name(pair.at(0).get<std::string>()), pair.at(1).get<int>()});
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "separation") {
        st.term = SeparationTerm(std::move(events));
    } else if (kind == "quasi") {
        if (events.size() < 2) throw ParseError("quasi term needs at least two parties");
        const PartySetting rhs = events.back();
        events.pop_back();
        const std::string dir = j.at("direction").get<std::string>();
        if (dir != "lhs<rhs" && dir != "rhs<lhs") throw ParseError("bad quasi direction");
        st.term = QuasiTerm(std::move(events), rhs,
                            dir == "lhs<rhs" ? QuasiDirection::lhs_less_than_rhs
                                             : QuasiDirection::rhs_less_than_lhs);
    } else {
        throw ParseError("unknown term kind: " + kind);
    }
    return st;
}

nlohmann::json bell_to_json(const BellExpression& expr) {
    nlohmann::json j;
    j["label"] = expr.label;
    j["scenario"] = scenario_to_json(expr.scenario);
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& st : expr.terms) terms.push_back(term_to_json(st));
    j["terms"] = std::move(terms);
    return j;
}

BellExpression bell_from_json(const nlohmann::json& j) {
    BellExpression expr;
    expr.label = j.value("label", "");
    expr.scenario = scenario_from_json(j.at("scenario"));
    for (const auto& t : j.at("terms")) expr.terms.push_back(term_from_json(t));
    return expr;
}

} // namespace

std::string expression_to_json(const BellExpression& expression, int indent) {
    return bell_to_json(expression).dump(indent);
}

std::string expression_to_json(const MonogamyExpression& expression, int indent) {
    nlohmann::json j;
    j["label"] = expression.label;
    j["scenario"] = scenario_to_json(expression.scenario);
    nlohmann::json summands = nlohmann::json::array();
    for (const auto& s : expression.summands) summands.push_back(bell_to_json(s));
    j["summands"] = std::move(summands);
    return j.dump(indent);
}

std::variant<BellExpression, MonogamyExpression> expression_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("expression JSON: ") + e.what());
    }
    try {
        if (j.contains("summands")) {
            MonogamyExpression mono;
            mono.label = j.value("label", "");
            mono.scenario = scenario_from_json(j.at("scenario"));
            for (const auto& s : j["summands"]) mono.summands.push_back(bell_from_json(s));
            return mono;
        }
        return bell_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("expression JSON: ") + e.what());
    }
}

} // namespace sepbell
