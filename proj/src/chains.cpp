#include "sepbell/chains.hpp"

#include <algorithm>
#include <sstream>

namespace sepbell {

MetricPoint MetricPoint::separation(std::vector<PartySetting> events) {
    MetricPoint point;
    point.kind = PointKind::separation_point;
    std::sort(events.begin(), events.end());
    // X xor X is empty: drop event pairs
    std::vector<PartySetting> reduced;
    for (std::size_t i = 0; i < events.size();) {
        if (i + 1 < events.size() && events[i] == events[i + 1]) {
            i += 2;
        } else {
            reduced.push_back(events[i]);
            ++i;
        }
    }
    point.events = std::move(reduced);
    return point;
}

MetricPoint MetricPoint::quasi(std::vector<PartySetting> events) {
    if (events.empty()) throw InputError("quasi points need at least one event");
    MetricPoint point;
    point.kind = PointKind::quasi_point;
    point.events = std::move(events);
    return point;
}

std::string MetricPoint::label() const {
    if (kind == PointKind::separation_point) {
        if (events.empty()) return "0";
        std::string out;
        for (const auto& e : events) out += event_label(e);
        return out;
    }
    if (events.size() == 1) return event_label(events.front());
    std::string out = "[";
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (i) out += "+";
        out += event_label(events[i]);
    }
    return out + "]";
}

std::string step_term_label(const MetricPoint& a, const MetricPoint& b, StepMode mode) {
    if (mode == StepMode::symmetric) {
        if (a.kind != PointKind::separation_point || b.kind != PointKind::separation_point) {
            throw InputError("symmetric steps need separation points");
        }
        auto merged = a.events;
        merged.insert(merged.end(), b.events.begin(), b.events.end());
        return MetricPoint::separation(std::move(merged)).label();
    }
    if (a.kind != PointKind::quasi_point || b.kind != PointKind::quasi_point) {
        throw InputError("directed steps need quasi points");
    }
    return a.label() + "<" + b.label();
}

ChainVerdict verify_chain(const ChainProof& proof) {
    SignedLabels residual;
    const auto add = [&residual](const std::string& label, int delta) {
        const auto it = residual.find(label);
        if (it == residual.end()) {
            residual.emplace(label, delta);
        } else if ((it->second += delta) == 0) {
            residual.erase(it);
        }
    };
    for (const auto& step : proof.steps) {
        add(step_term_label(step.x, step.y, step.mode), +1);
        add(step_term_label(step.y, step.z, step.mode), +1);
        add(step_term_label(step.x, step.z, step.mode), -1);
    }
    SignedLabels target;
    for (const auto& [label, count] : proof.target) {
        if (count != 0) target.emplace(label, count);
    }
    ChainVerdict verdict;
    verdict.valid = residual == target;
    verdict.residual = std::move(residual);
    return verdict;
}

SignedLabels expression_target(const BellExpression& expression) {
    SignedLabels target;
    for (const auto& st : expression.terms) {
        const std::string label =
            std::visit([](const auto& t) { return t.label(); }, st.term);
        target[label] += st.sign;
        if (target[label] == 0) target.erase(label);
    }
    return target;
}

namespace {

MetricPoint sep_point(std::initializer_list<PartySetting> events) {
    return MetricPoint::separation(std::vector<PartySetting>(events));
}

MetricPoint sum_point(std::initializer_list<PartySetting> events) {
    return MetricPoint::quasi(std::vector<PartySetting>(events));
}

TriangleStep sep_step(MetricPoint x, MetricPoint y, MetricPoint z) {
    return {StepMode::symmetric, std::move(x), std::move(y), std::move(z)};
}

TriangleStep dir_step(MetricPoint x, MetricPoint y, MetricPoint z) {
    return {StepMode::directed, std::move(x), std::move(y), std::move(z)};
}

} // namespace

std::vector<ChainProof> builtin_proofs() {
    constexpr int A = 0, B = 1, C = 2, D = 3;
    std::vector<ChainProof> proofs;

    {
        ChainProof p;
        p.label = "tripartite_bell";
        p.steps = {
            sep_step(sep_point({{A, 1}, {B, 2}}), sep_point({{C, 2}}),
                     sep_point({{A, 2}, {B, 1}})),
            sep_step(sep_point({{A, 1}, {B, 2}}), sep_point({{A, 2}, {B, 1}}),
                     sep_point({{B, 1}, {B, 2}, {C, 1}})),
        };
        p.target = expression_target(build_separation_bell({A, B, C}));
        proofs.push_back(std::move(p));
    }
    {
        ChainProof p;
        p.label = "primary_monogamy";
        p.steps = {
            sep_step(sep_point({{C, 2}}), sep_point({{A, 1}, {B, 2}}), sep_point({{D, 2}})),
            sep_step(sep_point({{D, 2}}), sep_point({{C, 2}}), sep_point({{A, 2}, {B, 1}})),
            sep_step(sep_point({{C, 1}}), sep_point({{A, 2}, {B, 2}}), sep_point({{D, 1}})),
            sep_step(sep_point({{C, 1}}), sep_point({{D, 1}}), sep_point({{A, 1}, {B, 1}})),
        };
        p.target = expression_target(
            compose_monogamy(MonogamyPreset::primary_ABC_ABD, {A, B, C, D}).flattened());
        proofs.push_back(std::move(p));
    }
    {
        ChainProof p;
        p.label = "pair_ABC_ACD";
        p.steps = {
            sep_step(sep_point({{B, 2}}), sep_point({{A, 1}, {C, 2}}), sep_point({{D, 2}})),
            sep_step(sep_point({{D, 2}}), sep_point({{B, 2}}), sep_point({{A, 2}, {C, 1}})),
            sep_step(sep_point({{B, 1}}), sep_point({{A, 2}, {C, 2}}), sep_point({{D, 1}})),
            sep_step(sep_point({{B, 1}}), sep_point({{D, 1}}), sep_point({{A, 1}, {C, 1}})),
        };
        MonogamyExpression pair;
        pair.summands = {build_separation_bell_variant({A, B, C}, {1, 1, 1}),
                         build_separation_bell_variant({A, C, D}, {2, 1, 2})};
        pair.scenario = Scenario(4, 2);
        p.target = expression_target(pair.flattened());
        proofs.push_back(std::move(p));
    }
    {
        ChainProof p;
        p.label = "pair_ABC_BCD";
        p.steps = {
            sep_step(sep_point({{A, 1}}), sep_point({{B, 2}, {C, 2}}), sep_point({{D, 1}})),
            sep_step(sep_point({{A, 1}}), sep_point({{D, 1}}), sep_point({{B, 1}, {C, 1}})),
            sep_step(sep_point({{A, 2}}), sep_point({{B, 2}, {C, 1}}), sep_point({{D, 2}})),
            sep_step(sep_point({{D, 2}}), sep_point({{A, 2}}), sep_point({{B, 1}, {C, 2}})),
        };
        MonogamyExpression pair;
        pair.summands = {build_separation_bell_variant({A, B, C}, {1, 1, 1}),
                         build_separation_bell_variant({B, C, D}, {1, 2, 2})};
        pair.scenario = Scenario(4, 2);
        p.target = expression_target(pair.flattened());
        proofs.push_back(std::move(p));
    }
    {
        ChainProof p;
        p.label = "zg_bell";
        p.steps = {
            dir_step(sum_point({{A, 1}, {B, 2}}), sum_point({{C, 2}}),
                     sum_point({{A, 2}, {B, 1}})),
            dir_step(sum_point({{A, 1}, {B, 2}}), sum_point({{A, 2}, {B, 1}}),
                     sum_point({{C, 1}})),
            dir_step(sum_point({{A, 1}, {B, 1}}), sum_point({{C, 2}}),
                     sum_point({{A, 2}, {B, 2}})),
            dir_step(sum_point({{A, 1}, {B, 1}}), sum_point({{A, 2}, {B, 2}}),
                     sum_point({{C, 1}})),
        };
        p.target = expression_target(build_zg_svetlichny(2));
        proofs.push_back(std::move(p));
    }
    {
        ChainProof p;
        p.label = "zg_primary_monogamy";
        p.steps = {
            dir_step(sum_point({{D, 2}}), sum_point({{A, 1}, {B, 2}}), sum_point({{C, 2}})),
            dir_step(sum_point({{D, 2}}), sum_point({{C, 2}}), sum_point({{A, 2}, {B, 1}})),
            dir_step(sum_point({{D, 1}}), sum_point({{A, 2}, {B, 1}}), sum_point({{C, 1}})),
            dir_step(sum_point({{A, 1}, {B, 2}}), sum_point({{D, 1}}), sum_point({{C, 1}})),
            dir_step(sum_point({{D, 2}}), sum_point({{A, 1}, {B, 1}}), sum_point({{C, 2}})),
            dir_step(sum_point({{D, 2}}), sum_point({{C, 2}}), sum_point({{A, 2}, {B, 2}})),
            dir_step(sum_point({{D, 1}}), sum_point({{A, 2}, {B, 2}}), sum_point({{C, 1}})),
            dir_step(sum_point({{A, 1}, {B, 1}}), sum_point({{D, 1}}), sum_point({{C, 1}})),
        };
        p.target = expression_target(
            compose_monogamy(MonogamyPreset::primary_quasi, {A, B, C, D}, 2).flattened());
        proofs.push_back(std::move(p));
    }
    return proofs;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

PartySetting parse_event(const std::string& token) {
    if (token.size() < 2 || token[0] < 'A' || token[0] > 'Z') {
        throw ParseError("bad event token: " + token);
    }
    const int party = token[0] - 'A';
    const int setting = token[1] - '0';
    if (token.size() != 2 || (setting != 1 && setting != 2)) {
        throw ParseError("bad event token: " + token);
    }
    return {party, setting};
}

std::vector<PartySetting> parse_event_list(const std::string& token) {
    if (token.empty() || token.size() % 2 != 0) throw ParseError("bad point token: " + token);
    std::vector<PartySetting> events;
    for (std::size_t i = 0; i < token.size(); i += 2) {
        events.push_back(parse_event(token.substr(i, 2)));
    }
    return events;
}

MetricPoint parse_sep_point(const std::string& raw) {
    return MetricPoint::separation(parse_event_list(trim(raw)));
}

MetricPoint parse_quasi_point(const std::string& raw) {
    std::string token = trim(raw);
    if (!token.empty() && token.front() == '[') {
        if (token.back() != ']') throw ParseError("unterminated sum point: " + token);
        token = token.substr(1, token.size() - 2);
        std::vector<PartySetting> events;
        std::stringstream ss(token);
        std::string part;
        while (std::getline(ss, part, '+')) events.push_back(parse_event(trim(part)));
        return MetricPoint::quasi(std::move(events));
    }
    return MetricPoint::quasi({parse_event(token)});
}

std::vector<std::string> split(const std::string& s, const std::string& sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        if (next == std::string::npos) {
            parts.push_back(s.substr(pos));
            break;
        }
        parts.push_back(s.substr(pos, next - pos));
        pos = next + sep.size();
    }
    return parts;
}

void parse_target_terms(const std::string& body, SignedLabels& target) {
    for (const auto& raw : split(body, "/")) {
        const std::string term = trim(raw);
        if (term.empty()) continue;
        int sign = +1;
        std::string label = term;
        if (label[0] == '+' || label[0] == '-') {
            sign = label[0] == '-' ? -1 : +1;
            label = trim(label.substr(1));
        }
        if (label.empty()) throw ParseError("empty target term");
        // canonicalize separation labels (sorted events); quasi labels as written
        if (label.find('<') == std::string::npos && label.find('[') == std::string::npos) {
            label = MetricPoint::separation(parse_event_list(label)).label();
        }
        target[label] += sign;
        if (target[label] == 0) target.erase(label);
    }
}

} // namespace

ChainProof parse_proof(const std::string& text) {
    ChainProof proof;
    proof.label = "proof";
    std::stringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        try {
            if (line.rfind("SEP", 0) == 0) {
                const auto parts = split(line.substr(3), ";");
                if (parts.size() != 3) throw ParseError("SEP step needs three points");
                proof.steps.push_back(sep_step(parse_sep_point(parts[0]),
                                               parse_sep_point(parts[1]),
                                               parse_sep_point(parts[2])));
            } else if (line.rfind("QUASI", 0) == 0) {
                const auto parts = split(line.substr(5), "->");
                if (parts.size() != 3) throw ParseError("QUASI step needs three points");
                proof.steps.push_back(dir_step(parse_quasi_point(parts[0]),
                                               parse_quasi_point(parts[1]),
                                               parse_quasi_point(parts[2])));
            } else if (line.rfind("LABEL", 0) == 0) {
                proof.label = trim(line.substr(5));
            } else if (line.rfind("TARGET", 0) == 0) {
                parse_target_terms(line.substr(6), proof.target);
            } else {
                throw ParseError("unknown directive");
            }
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (proof.steps.empty()) throw ParseError("proof has no steps");
    if (proof.target.empty()) throw ParseError("proof has no target");
    return proof;
}

} // namespace sepbell
