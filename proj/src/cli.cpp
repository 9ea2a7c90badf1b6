#include "fibwalk/cli.hpp"

#include "fibwalk/error.hpp"
#include "fibwalk/logic.hpp"
#include "fibwalk/paperlab.hpp"
#include "fibwalk/regex.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fibwalk::cli {

namespace {

System parse_system(const std::string& s) {
    if (s == "zeck") {
        return System::Zeck;
    }
    if (s == "cg") {
        return System::Cg;
    }
    throw InvalidInput("unknown system '" + s + "' (expected zeck or cg)");
}

Natural parse_natural(const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw InvalidInput("not a natural number: '" + s + "'");
    }
    try {
        return std::stoull(s);
    } catch (const std::out_of_range&) {
        throw InvalidInput("number out of range: " + s);
    }
}

std::string show(const Digits& d, bool msd) {
    std::string s;
    for (auto x : d) {
        s.push_back(static_cast<char>('0' + x));
    }
    if (msd) {
        std::reverse(s.begin(), s.end());
    }
    return s;
}

Domain parse_track(const std::string& s) {
    if (s == "lsd_fib" || s == "zeck") return Domain::Zeck;
    if (s == "lsd_cg" || s == "cg") return Domain::Cg;
    if (s == "{0,1}" || s == "binary") return Domain::Binary;
    if (s == "{0,1,2}" || s == "ternary") return Domain::Ternary;
    throw InvalidInput("unknown track '" + s + "' (expected lsd_fib, lsd_cg, {0,1} or {0,1,2})");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error("cannot write " + path);
    }
}

std::size_t default_budget() {
    if (const char* env = std::getenv("FIBWALK_MAX_STATES"); env != nullptr && *env != '\0') {
        return static_cast<std::size_t>(parse_natural(env));
    }
    return kDefaultStateBudget;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zeckendorf and Chung-Graham numeration toolkit", "fibwalk"};
    app.require_subcommand(1);
    std::size_t max_states = default_budget();
    bool msd = false;
    app.add_option("--max-states", max_states, "state budget for automaton constructions")->check(CLI::PositiveNumber);
    app.add_flag("--msd", msd, "print digit words most significant digit first");

    std::string system;
    std::string value;

    auto* encode = app.add_subcommand("encode", "digit word of N, least significant digit first");
    encode->add_option("--system", system, "zeck or cg")->required();
    encode->add_option("N", value)->required();

    auto* decode = app.add_subcommand("decode", "value of an LSD-first digit word");
    decode->add_option("--system", system, "zeck or cg")->required();
    decode->add_option("WORD", value)->required();

    auto* convert = app.add_subcommand("convert", "both representations of N");
    convert->add_option("N", value)->required();

    auto* shift = app.add_subcommand("shift", "shift operators");
    shift->add_option("--system", system, "f, f2 or cg2")->required();
    shift->add_option("N", value)->required();

    std::string set;
    std::size_t count = 10;
    auto* seq = app.add_subcommand("seq", "first members of a named set");
    seq->add_option("--set", set, "A:k, U:k, B:2k[:1|2], R:word, feven, fodd or sc")->required();
    seq->add_option("--count", count, "number of members")->required();

    std::string pattern;
    std::vector<std::string> alphabet;
    std::string out_file;
    std::string dot_file;
    auto* compile = app.add_subcommand("compile", "compile a regular expression to a minimal automaton");
    compile->add_option("--regex", pattern)->required();
    compile->add_option("--alphabet", alphabet, "one track spec per track: lsd_fib, lsd_cg, {0,1}, {0,1,2}")
        ->required();
    compile->add_option("--out", out_file, "write the text form here instead of stdout");
    compile->add_option("--dot", dot_file, "also write Graphviz output");

    std::string formula;
    std::string defs;
    auto* eval = app.add_subcommand("eval", "decide a closed formula");
    eval->add_option("FORMULA", formula)->required();
    eval->add_option("--defs", defs, "suite file of reg/def lines loaded first");

    paperlab::Config config;
    std::string report;
    bool machine = false;
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("--max-n", config.max_n);
    verify->add_option("--max-k", config.max_k);
    verify->add_option("--threads", config.threads);
    verify->add_option("--report", report, "write the machine-readable report here");
    verify->add_flag("--machine", machine, "print the machine-readable format instead of the table");

    std::string name;
    std::string text_file;
    auto* exporter = app.add_subcommand("export", "write a builtin automaton");
    exporter->add_option("--name", name)->required();
    auto* dot_opt = exporter->add_option("--dot", dot_file);
    auto* text_opt = exporter->add_option("--text", text_file);
    dot_opt->excludes(text_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (encode->parsed()) {
            out << show(fibwalk::encode(parse_system(system), parse_natural(value)), msd) << "\n";
        } else if (decode->parsed()) {
            const System s = parse_system(system);
            const Digits d = s == System::Zeck ? ZeckWord::parse(value).digits() : CGWord::parse(value).digits();
            out << fibwalk::decode(s, d) << "\n";
        } else if (convert->parsed()) {
            const Natural n = parse_natural(value);
            out << "zeck " << show(fibwalk::encode(System::Zeck, n), msd) << "\n";
            out << "cg " << show(fibwalk::encode(System::Cg, n), msd) << "\n";
        } else if (shift->parsed()) {
            const Natural n = parse_natural(value);
            if (system == "f") {
                out << shift_f(n) << "\n";
            } else if (system == "f2") {
                out << shift_f2(n) << "\n";
            } else if (system == "cg2") {
                out << shift_cg2(n) << "\n";
            } else {
                throw InvalidInput("unknown shift '" + system + "' (expected f, f2 or cg2)");
            }
        } else if (seq->parsed()) {
            for (Natural v : first_members(SetId::parse(set), count)) {
                out << v << "\n";
            }
        } else if (compile->parsed()) {
            std::vector<Domain> tracks;
            for (const auto& a : alphabet) {
                tracks.push_back(parse_track(a));
            }
            const Alphabet alpha = alphabet_of(tracks);
            const Dfa raw = compile_regex(pattern, alpha, max_states);
            const Dfa dfa =
                minimize(pad_close(minimize(product(raw, domain_universe(tracks), BoolOp::And, max_states)),
                                   max_states));
            if (out_file.empty()) {
                out << serialize(dfa);
            } else {
                write_file(out_file, serialize(dfa));
                out << "states " << dfa.states() << "\n";
            }
            if (!dot_file.empty()) {
                write_file(dot_file, to_dot(dfa, "regex"));
            }
        } else if (eval->parsed()) {
            logic::Environment env(true, max_states);
            if (!defs.empty()) {
                env = logic::run_suite(read_file(defs), env).first;
            }
            const bool result = logic::eval_closed(formula, env);
            out << (result ? "TRUE" : "FALSE") << "\n";
            return result ? 0 : 1;
        } else if (verify->parsed()) {
            config.max_states = max_states;
            const auto reports = paperlab::verify_all(config);
            out << (machine ? paperlab::format_machine(reports) : paperlab::format_table(reports));
            if (!report.empty()) {
                write_file(report, paperlab::format_machine(reports));
            }
            const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.ok(); });
            return ok ? 0 : 1;
        } else if (exporter->parsed()) {
            const NamedAutomaton& a = builtin(name);
            if (!dot_file.empty()) {
                write_file(dot_file, to_dot(a.dfa, name));
            } else if (!text_file.empty()) {
                write_file(text_file, serialize(a.dfa));
            } else {
                out << serialize(a.dfa);
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace fibwalk::cli
