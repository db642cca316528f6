#include "cli.hpp"

#include "smpds/asm.hpp"
#include "smpds/bench.hpp"
#include "smpds/poststar.hpp"
#include "smpds/prestar.hpp"
#include "smpds/text.hpp"
#include "smpds/translate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace smpds::cli {

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << text)) throw Failure("cannot write '" + path + "'");
}

Smpds load_model(const std::string& path) {
    std::string text = read_file(path);
    try {
        return parse_smpds(text);
    } catch (const ParseError& e) {
        throw Failure(path + ": " + e.what());
    }
}

PAutomaton load_automaton(const Smpds& sys, const std::string& path) {
    std::string text = read_file(path);
    try {
        return parse_automaton(sys, text);
    } catch (const ParseError& e) {
        throw Failure(path + ": " + e.what());
    }
}

Configuration load_config(const Smpds& sys, const std::string& text) {
    try {
        return parse_configuration(sys, text);
    } catch (const ParseError& e) {
        throw Failure("configuration '" + text + "': " + e.what());
    }
}

// Input automaton of a saturation: an automaton file, explicit
// configurations, or the configurations listed in the model.
PAutomaton saturation_input(const Smpds& sys, const std::string& aut_path, const std::vector<std::string>& configs,
                            bool from_model) {
    int sources = !aut_path.empty() + !configs.empty() + from_model;
    if (sources != 1) throw Failure("give exactly one of an automaton file, --config, or --from-model-configs");
    if (!aut_path.empty()) return load_automaton(sys, aut_path);
    std::vector<Configuration> cs;
    if (from_model) cs = sys.configs();
    for (const std::string& c : configs) cs.push_back(load_config(sys, c));
    return from_configs(cs);
}

struct Globals {
    bool quiet = false;
    bool stats = false;
    std::uint64_t seed = 1;
};

void report_stats(const Globals& g, std::ostream& err, const char* what, const SaturationStats& s) {
    if (!g.stats) return;
    err << what << ": " << s.transitions_added << " transitions added, " << s.phases_materialized
        << " phases, " << s.wall_ms << " ms\n";
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reachability analysis for self-modifying pushdown systems", "smpds"};
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--quiet", g.quiet, "Suppress informational messages");
    app.add_flag("--stats", g.stats, "Print saturation statistics to standard error");
    app.add_option("--seed", g.seed, "Random seed (bench)");

    std::string model, out_path, aut_path, to, direction = "forward", prog_path, config_text;
    std::vector<std::string> configs, seed_phases;
    bool from_model = false, dot = false, allow_meta = false;
    std::size_t max_len = 3;

    auto* validate_cmd = app.add_subcommand("validate", "Check a model and list diagnostics");
    validate_cmd->add_option("--model", model, "SM-PDS file")->required();

    auto* normalize_cmd = app.add_subcommand("normalize", "Split long pushes and self-removing rules");
    normalize_cmd->add_option("--model", model, "SM-PDS file")->required();
    normalize_cmd->add_option("--out", out_path, "Output file (default: standard output)");

    auto* pre_cmd = app.add_subcommand("prestar", "Saturate an automaton for pre*");
    pre_cmd->add_option("--model", model, "SM-PDS file")->required();
    pre_cmd->add_option("--target", aut_path, "Automaton file for the target set");
    pre_cmd->add_option("--config", configs, "Target configuration '<p> <phase> <g1> ...'");
    pre_cmd->add_flag("--from-model-configs", from_model, "Use the configurations listed in the model");
    pre_cmd->add_option("--out", out_path, "Output file (default: standard output)");
    pre_cmd->add_flag("--dot", dot, "Write Graphviz instead of the automaton format");

    auto* post_cmd = app.add_subcommand("poststar", "Saturate an automaton for post*");
    post_cmd->add_option("--model", model, "SM-PDS file")->required();
    post_cmd->add_option("--source", aut_path, "Automaton file for the source set");
    post_cmd->add_option("--config", configs, "Source configuration '<p> <phase> <g1> ...'");
    post_cmd->add_flag("--from-model-configs", from_model, "Use the configurations listed in the model");
    post_cmd->add_option("--out", out_path, "Output file (default: standard output)");
    post_cmd->add_flag("--dot", dot, "Write Graphviz instead of the automaton format");

    auto* translate_cmd = app.add_subcommand("translate", "Translate to an explicit or symbolic PDS");
    translate_cmd->add_option("--model", model, "SM-PDS file")->required();
    translate_cmd->add_option("--to", to, "pds or sympds")->required()->check(CLI::IsMember({"pds", "sympds"}));
    translate_cmd->add_option("--seed-phase", seed_phases, "Phase to start the closure from (default: phases of the model configurations)");
    translate_cmd->add_option("--direction", direction, "Closure direction")
        ->check(CLI::IsMember({"forward", "backward", "both"}));
    translate_cmd->add_option("--out", out_path, "Output file (default: standard output)");

    auto* asm_cmd = app.add_subcommand("asm2smpds", "Compile a .sasm program");
    asm_cmd->add_option("program", prog_path, ".sasm file")->required();
    asm_cmd->add_option("--out", out_path, "Output file (default: standard output)");
    asm_cmd->add_flag("--allow-meta-selfmod", allow_meta, "Allow selfmod to overwrite a selfmod");

    auto* check_cmd = app.add_subcommand("check", "Membership of a configuration (exit 0 yes, 1 no, 2 error)");
    check_cmd->add_option("--model", model, "SM-PDS file")->required();
    check_cmd->add_option("--aut", aut_path, "Automaton file")->required();
    check_cmd->add_option("--config", config_text, "Configuration '<p> <phase> <g1> ...'")->required();

    auto* enum_cmd = app.add_subcommand("enumerate", "List accepted configurations up to a stack height");
    enum_cmd->add_option("--model", model, "SM-PDS file")->required();
    enum_cmd->add_option("--aut", aut_path, "Automaton file")->required();
    enum_cmd->add_option("--max-len", max_len, "Largest stack height");

    GenParams params;
    std::string mode = "pre";
    std::size_t count = 1, time_ms = 60000, mem_mb = 1024;
    auto* bench_cmd = app.add_subcommand("bench", "Direct vs translation-based saturation on random systems (CSV)");
    bench_cmd->add_option("--rules", params.num_rules, "Number of transition rules");
    bench_cmd->add_option("--smrules", params.num_smrules, "Number of self-modifying rules");
    bench_cmd->add_option("--states", params.num_states, "Number of control points");
    bench_cmd->add_option("--symbols", params.num_symbols, "Number of stack symbols");
    bench_cmd->add_option("--max-rhs", params.max_rhs_len, "Longest right-hand side");
    bench_cmd->add_option("--mode", mode, "pre or post")->check(CLI::IsMember({"pre", "post"}));
    bench_cmd->add_option("--count", count, "Instances (seeds seed, seed+1, ...)");
    bench_cmd->add_option("--time-ms", time_ms, "Wall-time cap per path");
    bench_cmd->add_option("--mem-mb", mem_mb, "Memory cap per path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "smpds: " << e.what() << '\n';
        return 2;
    }

    try {
        if (validate_cmd->parsed()) {
            Smpds sys = load_model(model);
            ValidationReport report = validate(sys);
            for (const Diagnostic& d : report.items)
                out << (d.severity == Diagnostic::Severity::Error ? "error" : "warning") << ": " << d.code << ": "
                    << d.message << '\n';
            if (report.empty() && !g.quiet) out << "ok\n";
            return report.has_errors() ? 1 : 0;
        }
        if (normalize_cmd->parsed()) {
            Smpds sys = load_model(model);
            Normalized pushed = normalize_push(sys);
            Normalized n = normalize_selfmod(pushed.system);
            if (!g.quiet)
                for (const auto* w : {&pushed.warnings, &n.warnings})
                    for (const std::string& msg : *w) err << "warning: " << msg << '\n';
            write_output(out_path, print_smpds(n.system), out);
            return 0;
        }
        if (pre_cmd->parsed() || post_cmd->parsed()) {
            Smpds sys = load_model(model);
            PAutomaton input = saturation_input(sys, aut_path, configs, from_model);
            SaturationStats stats;
            PAutomaton result;
            try {
                result = pre_cmd->parsed() ? prestar(sys, input, {}, &stats) : poststar(sys, input, {}, &stats);
            } catch (const std::invalid_argument& e) {
                throw Failure(std::string(e.what()) + " (see 'smpds normalize')");
            }
            report_stats(g, err, pre_cmd->parsed() ? "prestar" : "poststar", stats);
            write_output(out_path, dot ? automaton_to_dot(sys, result) : print_automaton(sys, result), out);
            return 0;
        }
        if (translate_cmd->parsed()) {
            Smpds sys = load_model(model);
            if (to == "sympds") {
                write_output(out_path, print_symbolic_pds(sys, to_symbolic_pds(sys)), out);
                return 0;
            }
            std::vector<Phase> seeds;
            for (const std::string& name : seed_phases) {
                try {
                    seeds.push_back(parse_phase(sys, name));
                } catch (const ParseError& e) {
                    throw Failure(e.what());
                }
            }
            if (seeds.empty())
                for (const Configuration& c : sys.configs()) seeds.push_back(c.phase);
            if (seeds.empty()) throw Failure("no seed phase: give --seed-phase or list a configuration in the model");
            ClosureDirection dir = direction == "forward"    ? ClosureDirection::Forward
                                   : direction == "backward" ? ClosureDirection::Backward
                                                             : ClosureDirection::Both;
            std::vector<Phase> phases = phase_closure(sys, seeds, dir);
            Pds pds = to_pds(sys, phases, dir != ClosureDirection::Backward);
            if (!g.quiet) err << phases.size() << " phases, " << pds.states.size() << " states, " << pds.rules.size() << " rules\n";
            write_output(out_path, print_pds(sys, pds), out);
            return 0;
        }
        if (asm_cmd->parsed()) {
            std::string text = read_file(prog_path);
            Program prog;
            try {
                prog = parse_program(text, {allow_meta});
            } catch (const ParseError& e) {
                throw Failure(prog_path + ": " + e.what());
            }
            write_output(out_path, print_smpds(compile(prog).system), out);
            return 0;
        }
        if (check_cmd->parsed()) {
            Smpds sys = load_model(model);
            PAutomaton aut = load_automaton(sys, aut_path);
            bool yes = accepts(aut, load_config(sys, config_text));
            out << (yes ? "Yes" : "No") << '\n';
            return yes ? 0 : 1;
        }
        if (enum_cmd->parsed()) {
            Smpds sys = load_model(model);
            PAutomaton aut = load_automaton(sys, aut_path);
            std::vector<std::string> lines;
            for (const Configuration& c : enumerate(aut, max_len)) lines.push_back(format_configuration(sys, c));
            std::sort(lines.begin(), lines.end());
            for (const std::string& l : lines) out << l << '\n';
            return 0;
        }
        if (bench_cmd->parsed()) {
            BenchLimits limits{std::chrono::milliseconds(time_ms), mem_mb * 1024 * 1024};
            out << csv_header() << '\n';
            for (std::size_t i = 0; i < count; ++i) {
                params.seed = g.seed + i;
                ReportRow row = run_comparison(params, limits, mode == "pre" ? BenchMode::Pre : BenchMode::Post);
                out << csv_row(row) << '\n';
                if (row.agree && !*row.agree) err << "warning: seed " << params.seed << ": answers disagree\n";
            }
            return 0;
        }
    } catch (const Failure& e) {
        err << "smpds: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "smpds: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

} // namespace smpds::cli
