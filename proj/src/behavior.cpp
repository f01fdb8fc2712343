#include "sepbell/behavior.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace sepbell {

namespace {

void check_table(const Scenario& sc, const std::vector<double>& table, double tol) {
    if (table.size() != sc.table_size()) {
        throw ValidationError("behavior table has wrong size");
    }
    const std::uint64_t n_out = sc.outcome_tuples();
    for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
        double sum = 0.0;
        for (std::uint64_t o = 0; o < n_out; ++o) {
            const double p = table[s * n_out + o];
            if (!std::isfinite(p)) throw ValidationError("behavior entry is not finite");
            if (p < -tol || p > 1.0 + tol) {
                throw ValidationError("behavior entry outside [0,1]: " + std::to_string(p));
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol) {
            throw ValidationError("behavior not normalized at setting tuple " +
                                  std::to_string(s) + ": sum = " + std::to_string(sum));
        }
    }
}

} // namespace

Behavior::Behavior(Scenario scenario, std::vector<double> table, double tol)
    : scenario_(scenario), table_(std::move(table)) {
    check_table(scenario_, table_, tol);
    for (double& p : table_) {
        if (p < 0.0) p = 0.0;
        if (p > 1.0) p = 1.0;
    }
}

Behavior Behavior::uniform(const Scenario& scenario) {
    const double p = 1.0 / static_cast<double>(scenario.outcome_tuples());
    return Behavior(scenario, std::vector<double>(scenario.table_size(), p));
}

void Behavior::validate(double tol) const { check_table(scenario_, table_, tol); }

NoSignalingReport validate_no_signaling(const Behavior& behavior, double tol) {
    const Scenario& sc = behavior.scenario();
    behavior.validate(std::max(tol, kAnalyticTol));

    NoSignalingReport report;
    report.tolerance = tol;
    report.per_party.assign(static_cast<std::size_t>(sc.n_parties), 0.0);

    const std::uint64_t n_out = sc.outcome_tuples();
    std::vector<int> settings(static_cast<std::size_t>(sc.n_parties));
    std::vector<int> outcomes;

    for (int k = 0; k < sc.n_parties; ++k) {
        double worst = 0.0;
        // iterate over the other parties' setting assignments
        for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
            settings = sc.setting_tuple(s);
            if (settings[static_cast<std::size_t>(k)] != 1) continue; // reference context
            auto alt = settings;
            alt[static_cast<std::size_t>(k)] = 2;
            const std::uint64_t s_ref = s;
            const std::uint64_t s_alt = sc.setting_index(alt);
            // marginal over party k's outcome, per joint outcome of the others
            for (std::uint64_t o = 0; o < n_out; ++o) {
                outcomes = sc.outcome_tuple(o);
                if (outcomes[static_cast<std::size_t>(k)] != 0) continue;
                double m_ref = 0.0, m_alt = 0.0;
                for (int ok = 0; ok < sc.n_outcomes; ++ok) {
                    outcomes[static_cast<std::size_t>(k)] = ok;
                    const std::uint64_t oi = sc.outcome_index(outcomes);
                    m_ref += behavior.p(s_ref, oi);
                    m_alt += behavior.p(s_alt, oi);
                }
                outcomes[static_cast<std::size_t>(k)] = 0;
                worst = std::max(worst, std::abs(m_ref - m_alt));
            }
        }
        report.per_party[static_cast<std::size_t>(k)] = worst;
        report.max_violation = std::max(report.max_violation, worst);
    }
    return report;
}

Behavior behavior_from_strategy(const DeterministicStrategy& strategy, const Scenario& scenario) {
    if (static_cast<int>(strategy.outcomes.size()) != scenario.n_parties) {
        throw InputError("strategy arity does not match scenario");
    }
    for (const auto& per_setting : strategy.outcomes) {
        for (int o : per_setting) {
            if (o < 0 || o >= scenario.n_outcomes) {
                throw InputError("strategy outcome out of range");
            }
        }
    }
    std::vector<double> table(scenario.table_size(), 0.0);
    const std::uint64_t n_out = scenario.outcome_tuples();
    std::vector<int> outcomes(static_cast<std::size_t>(scenario.n_parties));
    for (std::uint64_t s = 0; s < scenario.setting_tuples(); ++s) {
        const auto settings = scenario.setting_tuple(s);
        for (int k = 0; k < scenario.n_parties; ++k) {
            outcomes[static_cast<std::size_t>(k)] =
                strategy.outcome_for(k, settings[static_cast<std::size_t>(k)]);
        }
        table[s * n_out + scenario.outcome_index(outcomes)] = 1.0;
    }
    return Behavior(scenario, std::move(table));
}

Behavior mix(const std::vector<Behavior>& components, const std::vector<double>& weights) {
    if (components.empty() || components.size() != weights.size()) {
        throw InputError("mix needs matching nonempty components and weights");
    }
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw InputError("mixture weights must be nonnegative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12) throw InputError("mixture weights must sum to 1");
    const Scenario sc = components.front().scenario();
    std::vector<double> table(sc.table_size(), 0.0);
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (!(components[i].scenario() == sc)) {
            throw InputError("mixture components live on different scenarios");
        }
        const auto& t = components[i].table();
        for (std::size_t j = 0; j < table.size(); ++j) table[j] += weights[i] * t[j];
    }
    return Behavior(sc, std::move(table), kNumericTol);
}

namespace {

std::string digits_key(const std::vector<int>& tuple) {
    std::string key;
    key.reserve(tuple.size());
    for (int v : tuple) key.push_back(static_cast<char>('0' + v));
    return key;
}

std::vector<int> parse_digits(const std::string& key, int arity, const char* what) {
    if (static_cast<int>(key.size()) != arity) {
        throw ParseError(std::string("bad ") + what + " key length: " + key);
    }
    std::vector<int> tuple(key.size());
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (key[i] < '0' || key[i] > '9') throw ParseError(std::string("bad ") + what + " key: " + key);
        tuple[i] = key[i] - '0';
    }
    return tuple;
}

} // namespace

std::string behavior_to_json(const Behavior& behavior, int indent) {
    const Scenario& sc = behavior.scenario();
    nlohmann::json j;
    j["scenario"] = {{"parties", sc.n_parties},
                     {"settings", sc.n_settings},
                     {"outcomes", sc.n_outcomes}};
    nlohmann::json table = nlohmann::json::object();
    const std::uint64_t n_out = sc.outcome_tuples();
    for (std::uint64_t s = 0; s < sc.setting_tuples(); ++s) {
        nlohmann::json block = nlohmann::json::object();
        for (std::uint64_t o = 0; o < n_out; ++o) {
            block[digits_key(sc.outcome_tuple(o))] = behavior.p(s, o);
        }
        table[digits_key(sc.setting_tuple(s))] = std::move(block);
    }
    j["table"] = std::move(table);
    return j.dump(indent);
}

Behavior behavior_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("behavior JSON: ") + e.what());
    }
    if (!j.contains("scenario") || !j.contains("table")) {
        throw ParseError("behavior JSON needs scenario and table");
    }
    const auto& js = j["scenario"];
    Scenario sc(js.at("parties").get<int>(), js.at("outcomes").get<int>());
    if (js.contains("settings") && js["settings"].get<int>() != 2) {
        throw ParseError("only two settings per party are supported");
    }
    std::vector<double> table(sc.table_size(), 0.0);
    const std::uint64_t n_out = sc.outcome_tuples();
    for (const auto& [skey, block] : j["table"].items()) {
        const std::uint64_t s = sc.setting_index(parse_digits(skey, sc.n_parties, "setting"));
        for (const auto& [okey, value] : block.items()) {
            const std::uint64_t o = sc.outcome_index(parse_digits(okey, sc.n_parties, "outcome"));
            table[s * n_out + o] = value.get<double>();
        }
    }
    return Behavior(sc, std::move(table), kNumericTol);
}

} // namespace sepbell
