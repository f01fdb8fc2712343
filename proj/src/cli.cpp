#include "sepbell/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sepbell/bounds.hpp"
#include "sepbell/chains.hpp"
#include "sepbell/quantum.hpp"

namespace sepbell::cli {

namespace {

std::string format_value(double v, int digits = 9) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

void write_error(std::ostream& err, const std::string& type, const std::string& message) {
    nlohmann::json j;
    j["error"] = {{"type", type}, {"message", message}};
    err << j.dump() << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
}

std::vector<int> parse_parties(const std::string& letters) {
    std::vector<int> parties;
    for (char c : letters) {
        if (c == ',' || c == ' ') continue;
        parties.push_back(party_from_name(std::string(1, c)));
    }
    if (parties.empty()) throw InputError("empty party list");
    return parties;
}

std::uint64_t enumeration_cap_from_env() {
    if (const char* raw = std::getenv("SEPBELL_ENUM_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(raw, &end, 10);
        if (end == raw || *end != '\0' || v == 0) {
            throw InputError("SEPBELL_ENUM_CAP must be a positive integer");
        }
        return v;
    }
    return kDefaultEnumerationCap;
}

std::string default_pool_letters(std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('A' + i));
    return s;
}

std::variant<BellExpression, MonogamyExpression> load_expression(const std::string& ineq_path,
                                                                 const std::string& preset,
                                                                 int d) {
    if (!ineq_path.empty()) return expression_from_json(read_file(ineq_path));
    if (preset.empty()) throw InputError("pass --ineq <file> or --preset <name>");
    if (preset == "eq2") return build_separation_bell(parse_parties("ABC"));
    if (preset == "zg") return build_zg_svetlichny(d);
    const MonogamyPreset mp = monogamy_preset_from_name(preset);
    const std::size_t pool = mp == MonogamyPreset::division_N5_AB ? 6 : 4;
    return compose_monogamy(mp, parse_parties(default_pool_letters(pool)), d);
}

std::string exact_to_string(const lp::Rational& q) {
    std::ostringstream ss;
    ss << q;
    return ss.str();
}

int cmd_bound(bool lr, const std::string& ineq_path, const std::string& preset, int d,
              bool exact, double tol, const std::string& out_path,
              std::string optimizer_path, std::ostream& out) {
    const auto expr = load_expression(ineq_path, preset, d);

    BoundResult result = std::visit(
        [&](const auto& e) {
            if (lr) return lr_minimum(e, enumeration_cap_from_env());
            NsOptions opts;
            opts.exact = exact;
            opts.tol = tol;
            return ns_minimum(e, opts);
        },
        expr);

    if (optimizer_path.empty()) {
        const std::string stem = !ineq_path.empty() ? ineq_path : preset;
        optimizer_path = stem + (lr ? ".lr" : ".ns") + ".optimizer.json";
    }
    write_file(optimizer_path, behavior_to_json(result.optimizer) + "\n");

    nlohmann::json j;
    j["value"] = result.value;
    j["method"] = result.method == BoundMethod::brute_force ? "brute_force" : "lp";
    j["tolerance"] = result.tolerance;
    j["optimizer_path"] = optimizer_path;
    if (result.exact_value) j["exact"] = exact_to_string(*result.exact_value);
    const std::string doc = j.dump(2) + "\n";
    if (!out_path.empty()) {
        write_file(out_path, doc);
    } else {
        out << doc;
    }
    return 0;
}

int cmd_monogamy_check(const std::string& preset, int d, double tol, bool exact,
                       bool pairwise, std::ostream& out) {
    const MonogamyPreset mp = monogamy_preset_from_name(preset);
    const std::size_t pool = mp == MonogamyPreset::division_N5_AB ? 6 : 4;
    const MonogamyExpression mono =
        compose_monogamy(mp, parse_parties(default_pool_letters(pool)), d);

    NsOptions opts;
    opts.exact = exact;
    opts.tol = tol;
    out << "preset: " << preset << " (" << mono.summands.size() << " summands)\n";
    const BoundResult total = ns_minimum(mono, opts);
    out << "ns_minimum: " << format_value(total.value, 12);
    if (total.exact_value) out << " (exact " << exact_to_string(*total.exact_value) << ")";
    out << "\n";

    bool pairwise_ok = true;
    if (pairwise && mono.summands.size() > 2) {
        const auto certs = pairwise_monogamy_certificates(mono, opts);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < mono.summands.size(); ++i) {
            for (std::size_t j = i + 1; j < mono.summands.size(); ++j, ++idx) {
                const double v = certs[idx].value;
                pairwise_ok = pairwise_ok && v >= -tol;
                out << "pair(" << mono.summands[i].label << ", " << mono.summands[j].label
                    << "): " << format_value(v, 12) << "\n";
            }
        }
    }

    const bool holds = total.value >= -tol;
    if (holds && (mono.summands.size() <= 2 || !pairwise || pairwise_ok)) {
        out << "verdict: monogamy holds; at most one summand violable\n";
    } else if (holds) {
        out << "verdict: monogamy holds (sum nonnegative); pairwise exclusivity not certified\n";
    } else {
        out << "verdict: VIOLATED (minimum below -tol)\n";
    }
    return holds ? 0 : 1;
}

int cmd_quantum(int n, int d, std::ostream& out) {
    if ((n > 0) == (d > 0)) throw InputError("pass exactly one of --n or --d");
    double value = 0.0;
    if (n > 0) {
        if (n < 3) throw InputError("separation inequalities need --n >= 3");
        std::vector<int> parties(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) parties[static_cast<std::size_t>(i)] = i;
        const auto expr = build_separation_bell(parties);
        value = evaluate(expr, ghz_qubit_behavior(n, QubitPlan::maximal_violation(n)));
    } else {
        value = evaluate_reduced(build_zg_svetlichny(d), QuditPlan::maximal_violation(d));
    }
    out << format_value(value) << "\n";
    return 0;
}

int cmd_figure3(int d_min, int d_max, const std::string& out_path, std::ostream& out) {
    const auto rows = figure3_sweep(d_min, d_max);
    const std::string csv = figure3_csv(rows);
    if (!out_path.empty()) {
        write_file(out_path, csv);
    } else {
        out << csv;
    }
    return 0;
}

int cmd_verify_chains(const std::string& file, std::ostream& out) {
    std::vector<ChainProof> proofs;
    if (file.empty()) {
        proofs = builtin_proofs();
    } else {
        proofs.push_back(parse_proof(read_file(file)));
    }
    bool all_valid = true;
    for (const auto& proof : proofs) {
        const auto verdict = verify_chain(proof);
        out << proof.label << ": " << (verdict.valid ? "valid" : "INVALID");
        if (!verdict.valid) {
            out << " residual:";
            for (const auto& [label, count] : verdict.residual) {
                out << " " << (count > 0 ? "+" : "") << count << "*" << label;
            }
            out << " (target has " << proof.target.size() << " terms)";
        }
        out << "\n";
        all_valid = all_valid && verdict.valid;
    }
    return all_valid ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"separation Bell inequalities, no-signaling monogamies and their bounds"};
    app.require_subcommand(1);

    // ineq build
    auto* ineq = app.add_subcommand("ineq", "construct inequalities");
    ineq->require_subcommand(1);
    auto* build = ineq->add_subcommand("build", "emit an inequality as JSON");
    std::string build_kind = "sep";
    std::string build_parties = "ABC";
    std::string build_preset;
    std::string build_out;
    int build_d = 2;
    int build_minus = -1;
    bool build_swapped = false;
    build->add_option("kind", build_kind, "sep | zg | monogamy")->required();
    build->add_option("--parties", build_parties, "party letters, e.g. ABC");
    build->add_option("--minus-pos", build_minus, "index of the negative term");
    build->add_option("--d", build_d, "outcomes per setting");
    build->add_flag("--swapped", build_swapped, "swap every quasi comparison");
    build->add_option("--preset", build_preset, "monogamy preset name");
    build->add_option("--out", build_out, "output path (default stdout)");

    // bound lr|ns
    auto* bound = app.add_subcommand("bound", "compute LR or NS minima");
    bound->require_subcommand(1);
    auto* bound_lr = bound->add_subcommand("lr", "brute-force local-realistic minimum");
    auto* bound_ns = bound->add_subcommand("ns", "no-signaling LP minimum");
    std::string bound_ineq, bound_preset, bound_out, bound_opt_out;
    int bound_d = 2;
    bool bound_exact = false;
    double bound_tol = 1e-7;
    for (auto* sub : {bound_lr, bound_ns}) {
        sub->add_option("--ineq", bound_ineq, "inequality JSON path");
        sub->add_option("--preset", bound_preset, "preset name (eq2, zg, or a monogamy preset)");
        sub->add_option("--d", bound_d, "outcomes for quasi presets");
        sub->add_flag("--exact", bound_exact, "certify with exact rational arithmetic");
        sub->add_option("--tol", bound_tol, "certificate tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--out", bound_out, "result JSON path (default stdout)");
        sub->add_option("--optimizer-out", bound_opt_out, "optimizer behavior path");
    }

    // monogamy check
    auto* monogamy = app.add_subcommand("monogamy", "monogamy relations");
    monogamy->require_subcommand(1);
    auto* check = monogamy->add_subcommand("check", "certify a monogamy preset");
    std::string check_preset;
    int check_d = 2;
    double check_tol = 1e-7;
    bool check_exact = false;
    bool check_no_pairwise = false;
    check->add_option("preset", check_preset, "preset name")->required();
    check->add_option("--d", check_d, "outcomes for primary_quasi");
    check->add_option("--tol", check_tol, "violation tolerance")->check(CLI::PositiveNumber);
    check->add_flag("--exact", check_exact, "exact rational certification");
    check->add_flag("--no-pairwise", check_no_pairwise, "skip pairwise certificates");

    // quantum eval
    auto* quantum = app.add_subcommand("quantum", "GHZ-state values");
    quantum->require_subcommand(1);
    auto* eval = quantum->add_subcommand("eval", "evaluate the matching inequality");
    int eval_n = 0, eval_d = 0;
    eval->add_option("--n", eval_n, "party count for the qubit separation inequality");
    eval->add_option("--d", eval_d, "outcome count for the tripartite quasi inequality");

    // figure3
    auto* fig3 = app.add_subcommand("figure3", "quasi-inequality value per dimension, CSV");
    int fig_dmin = 2, fig_dmax = 50;
    std::string fig_out;
    fig3->add_option("--dmin", fig_dmin, "first dimension");
    fig3->add_option("--dmax", fig_dmax, "last dimension");
    fig3->add_option("--out", fig_out, "CSV path (default stdout)");

    // verify chains
    auto* verify = app.add_subcommand("verify", "verify triangle-inequality chains");
    verify->require_subcommand(1);
    auto* chains = verify->add_subcommand("chains", "check proofs (built-ins by default)");
    std::string chains_file;
    chains->add_option("--file", chains_file, "proof DSL file");

    std::vector<const char*> argv;
    argv.push_back("sepbell");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage", e.what());
        return 2;
    }

    try {
        if (build->parsed()) {
            std::string doc;
            if (build_kind == "sep") {
                std::optional<int> minus;
                if (build_minus >= 0) minus = build_minus;
                doc = expression_to_json(build_separation_bell(parse_parties(build_parties), minus));
            } else if (build_kind == "zg") {
                doc = expression_to_json(build_zg_svetlichny(build_d, build_swapped));
            } else if (build_kind == "monogamy") {
                if (build_preset.empty()) throw InputError("monogamy build needs --preset");
                const MonogamyPreset mp = monogamy_preset_from_name(build_preset);
                const std::size_t pool = mp == MonogamyPreset::division_N5_AB ? 6 : 4;
                std::string letters = build->count("--parties") ? build_parties
                                                                : default_pool_letters(pool);
                doc = expression_to_json(compose_monogamy(mp, parse_parties(letters), build_d));
            } else {
                throw InputError("unknown build kind: " + build_kind);
            }
            doc += "\n";
            if (!build_out.empty()) {
                write_file(build_out, doc);
            } else {
                out << doc;
            }
            return 0;
        }
        if (bound_lr->parsed() || bound_ns->parsed()) {
            return cmd_bound(bound_lr->parsed(), bound_ineq, bound_preset, bound_d, bound_exact,
                             bound_tol, bound_out, bound_opt_out, out);
        }
        if (check->parsed()) {
            return cmd_monogamy_check(check_preset, check_d, check_tol, check_exact,
                                      !check_no_pairwise, out);
        }
        if (eval->parsed()) return cmd_quantum(eval_n, eval_d, out);
        if (fig3->parsed()) return cmd_figure3(fig_dmin, fig_dmax, fig_out, out);
        if (chains->parsed()) return cmd_verify_chains(chains_file, out);
        write_error(err, "usage", "no command given");
        return 2;
    } catch (const InputError& e) {
        write_error(err, "input", e.what());
    } catch (const ParseError& e) {
        write_error(err, "parse", e.what());
    } catch (const CapExceededError& e) {
        write_error(err, "cap_exceeded", e.what());
    } catch (const UnsupportedScenarioError& e) {
        write_error(err, "unsupported_scenario", e.what());
    } catch (const ValidationError& e) {
        write_error(err, "validation", e.what());
    } catch (const FormulationError& e) {
        write_error(err, "formulation", e.what());
    }
    return 2;
}

} // namespace sepbell::cli
