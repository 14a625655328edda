#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "relic/engine.hpp"
#include "relic/serialize.hpp"

using namespace relic;

namespace {

// Exit codes: prove reports 0 proved / 1 countermodel / 2 unknown;
// parse errors are 3, file errors 4, usage errors 64.
constexpr int kExitProved = 0;
constexpr int kExitCountermodel = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitParse = 3;
constexpr int kExitFile = 4;
constexpr int kExitUsage = 64;

struct ParseFail {
    int code;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot read '" << path << "'\n";
        throw ParseFail{kExitFile};
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Inclusion parse_inclusion_arg(const std::string& text) {
    try {
        return parse_inclusion(text);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        throw ParseFail{kExitParse};
    }
}

Term parse_term_arg(const std::string& text) {
    try {
        return parse_term(text);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        throw ParseFail{kExitParse};
    }
}

// One inclusion per line; '#' starts a comment.
std::vector<Inclusion> read_hypotheses(const std::string& path) {
    std::string text = read_file(path);
    std::vector<Inclusion> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_inclusion(line));
        } catch (const ParseError& e) {
            std::cerr << "error: " << path << ":" << lineno << ": " << e.what() << "\n";
            throw ParseFail{kExitParse};
        }
    }
    return out;
}

struct ProveOptions {
    std::string goal;
    std::string hyp_path;
    std::string trace_path;
    std::string format = "text";
    std::string mode = "erase";
    unsigned depth = 4;
    std::size_t model_max = 3;
    std::size_t budget = 20000;
};

int run_prove(const ProveOptions& opt) {
    Inclusion inc = parse_inclusion_arg(opt.goal);
    std::vector<Inclusion> hyps;
    if (!opt.hyp_path.empty()) hyps = read_hypotheses(opt.hyp_path);

    ProveConfig cfg;
    cfg.max_expansion_depth = opt.depth;
    cfg.countermodel_max_size = opt.model_max;
    cfg.step_budget = opt.budget;
    auto mode = hypothesis_mode_from_name(opt.mode);
    if (!mode) {
        std::cerr << "error: --mode must be 'erase' or 'hzero'\n";
        return kExitUsage;
    }
    cfg.hypothesis_mode = *mode;

    Verdict v = prove(inc, hyps, cfg);
    bool structured = opt.format == "structured";

    switch (v.kind) {
        case Verdict::Kind::Proved: {
            const Derivation& d = v.proved->derivation;
            if (!opt.trace_path.empty()) {
                std::ofstream out(opt.trace_path);
                if (!out) {
                    std::cerr << "error: cannot write '" << opt.trace_path << "'\n";
                    return kExitFile;
                }
                out << derivation_to_json(d).dump(2) << "\n";
            }
            if (structured) {
                Json j{{"verdict", "proved"},
                       {"expansions", d.expansion_count()},
                       {"conversion_steps", d.conversion.size()},
                       {"derivation", derivation_to_json(d)}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "proved (" << d.conversion.size() << " conversion steps, "
                          << d.expansion_count() << " expansions)\n";
            }
            return kExitProved;
        }
        case Verdict::Kind::Countermodel: {
            const auto& c = *v.countermodel;
            if (structured) {
                Json j{{"verdict", "countermodel"},
                       {"model", model_to_json(c.model)},
                       {"witness", Json::array({c.witness.first, c.witness.second})}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "countermodel: pair (" << c.witness.first << "," << c.witness.second
                          << ") is in the left side but not the right\n"
                          << model_to_text(c.model);
            }
            return kExitCountermodel;
        }
        case Verdict::Kind::Unknown: {
            const auto& u = *v.unknown;
            if (structured) {
                Json j{{"verdict", "unknown"},
                       {"depth", u.depth_reached},
                       {"frontier", u.frontier},
                       {"note", u.note}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "unknown (depth " << u.depth_reached << ", " << u.frontier
                          << " open leaves";
                if (!u.note.empty()) std::cout << "; " << u.note;
                std::cout << ")\n";
            }
            return kExitUnknown;
        }
    }
    return kExitUsage;
}

struct ConvertOptions {
    std::string input;
    bool inclusion = false;
    std::string format = "text";
};

int run_convert(const ConvertOptions& opt) {
    NodeArena arena;
    ConversionResult result;
    if (opt.inclusion) {
        result = to_basic_inclusion(parse_inclusion_arg(opt.input), arena);
    } else {
        result = to_basic(term_to_label(parse_term_arg(opt.input)), arena);
    }
    if (opt.format == "structured") {
        Json j{{"steps", result.steps.size()}, {"graph", graph_to_json(result.graph)}};
        std::cout << j.dump(2) << "\n";
    } else if (opt.format == "dot") {
        std::cout << graph_to_dot(result.graph);
    } else {
        std::cout << "basic graph with " << result.graph.size() << " slice"
                  << (result.graph.size() == 1 ? "" : "s") << " (" << result.steps.size()
                  << " steps)\n";
        std::size_t i = 0;
        for (const Slice& s : result.graph.slices())
            std::cout << "  " << i++ << ": " << pretty_slice(s) << "\n";
    }
    return 0;
}

int run_check_model(const std::string& model_path, const std::string& inclusion_text) {
    Model m;
    try {
        m = model_from_text(read_file(model_path));
    } catch (const Error& e) {
        std::cerr << "error: " << model_path << ": " << e.what() << "\n";
        return kExitParse;
    }
    Inclusion inc = parse_inclusion_arg(inclusion_text);
    Rel l = eval_label(m, term_to_label(inc.lhs));
    Rel r = eval_label(m, term_to_label(inc.rhs));
    auto w = l.first_not_in(r);
    if (!w) {
        std::cout << "holds\n";
        return 0;
    }
    std::cout << "fails at (" << w->first << "," << w->second << ")\n";
    return 1;
}

struct RenderOptions {
    std::string input;
    bool inclusion = false;
    std::string graph_file;
};

int run_render(const RenderOptions& opt) {
    if (!opt.graph_file.empty()) {
        try {
            Graph g = graph_from_json(Json::parse(read_file(opt.graph_file)));
            std::cout << graph_to_dot(g);
            return 0;
        } catch (const Json::exception& e) {
            std::cerr << "error: " << opt.graph_file << ": " << e.what() << "\n";
            return kExitParse;
        }
    }
    NodeArena arena;
    ConversionResult result;
    if (opt.inclusion)
        result = to_basic_inclusion(parse_inclusion_arg(opt.input), arena);
    else
        result = to_basic(term_to_label(parse_term_arg(opt.input)), arena);
    std::cout << graph_to_dot(result.graph);
    return 0;
}

int run_verify(const std::string& trace_path) {
    Derivation d;
    try {
        d = derivation_from_json(Json::parse(read_file(trace_path)));
    } catch (const Json::exception& e) {
        std::cerr << "error: " << trace_path << ": " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "error: " << trace_path << ": " << e.what() << "\n";
        return kExitParse;
    } catch (const ParseError& e) {
        std::cerr << "error: " << trace_path << ": " << e.what() << "\n";
        return kExitParse;
    }
    VerifyReport report = verify_derivation(d);
    if (report.ok) {
        std::cout << "valid\n";
        return 0;
    }
    std::cout << "invalid at step " << report.failed_step << ": " << report.message << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relic - a graphical refutation prover for relational inclusions"};
    app.require_subcommand(1);

    ProveOptions prove_opt;
    CLI::App* prove_cmd = app.add_subcommand("prove", "decide an inclusion");
    prove_cmd->add_option("goal", prove_opt.goal, "inclusion, e.g. \"p;q <= 1\"")->required();
    prove_cmd->add_option("--hyp", prove_opt.hyp_path, "hypothesis file (one inclusion per line)");
    prove_cmd->add_option("--depth", prove_opt.depth, "expansion depth bound")->capture_default_str();
    prove_cmd->add_option("--model-max", prove_opt.model_max, "countermodel carrier bound")
        ->capture_default_str();
    prove_cmd->add_option("--mode", prove_opt.mode, "hypothesis mode: erase|hzero")
        ->capture_default_str();
    prove_cmd->add_option("--trace", prove_opt.trace_path, "write the proof trace here");
    prove_cmd->add_option("--budget", prove_opt.budget, "expansion step budget")
        ->capture_default_str();
    prove_cmd->add_option("--format", prove_opt.format, "text|structured")->capture_default_str();

    ConvertOptions convert_opt;
    CLI::App* convert_cmd = app.add_subcommand("convert", "convert to an equivalent basic graph");
    convert_cmd->add_option("input", convert_opt.input, "term, or inclusion with --inclusion")
        ->required();
    convert_cmd->add_flag("--inclusion", convert_opt.inclusion,
                          "treat the input as an inclusion and convert its difference slice");
    convert_cmd->add_option("--format", convert_opt.format, "text|structured|dot")
        ->capture_default_str();

    std::string model_path, check_inclusion;
    CLI::App* check_cmd = app.add_subcommand("check-model", "evaluate an inclusion in a model");
    check_cmd->add_option("model", model_path, "model file")->required();
    check_cmd->add_option("inclusion", check_inclusion, "inclusion to evaluate")->required();

    RenderOptions render_opt;
    CLI::App* render_cmd = app.add_subcommand("render", "emit DOT");
    render_cmd->add_option("input", render_opt.input, "term, or inclusion with --inclusion");
    render_cmd->add_flag("--inclusion", render_opt.inclusion, "input is an inclusion");
    render_cmd->add_option("--graph-file", render_opt.graph_file,
                           "render a structured graph file instead");

    std::string trace_path;
    CLI::App* verify_cmd = app.add_subcommand("verify", "replay and check a proof trace");
    verify_cmd->add_option("trace", trace_path, "trace file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (app.got_subcommand(prove_cmd)) return run_prove(prove_opt);
        if (app.got_subcommand(convert_cmd)) return run_convert(convert_opt);
        if (app.got_subcommand(check_cmd)) return run_check_model(model_path, check_inclusion);
        if (app.got_subcommand(render_cmd)) {
            if (render_opt.input.empty() && render_opt.graph_file.empty()) {
                std::cerr << "error: render needs an input or --graph-file\n";
                return kExitUsage;
            }
            return run_render(render_opt);
        }
        if (app.got_subcommand(verify_cmd)) return run_verify(trace_path);
    } catch (const ParseFail& f) {
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
