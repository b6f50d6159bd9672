#include "topaq/topaq.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace topaq;

namespace {

enum Exit { kHolds = 0, kViolated = 1, kRefused = 2, kUsage = 3 };

int exit_for(Status s) {
    switch (s) {
        case Status::Holds: return kHolds;
        case Status::Violated: return kViolated;
        case Status::Inconclusive: return kRefused;
    }
    return kRefused;
}

void report(const OpacityVerdict& v, const std::string& mode) {
    std::cout << "mode: " << mode << "\n";
    std::cout << "engine: " << v.engine << "\n";
    std::cout << "verdict: " << status_name(v.status) << "\n";
    if (v.witness) {
        std::cout << "witness: " << format_word(*v.witness) << "\n";
        std::cout << "side: " << side_name(v.side) << "\n";
    }
    if (!v.note.empty()) std::cout << "note: " << v.note << "\n";
}

Rational rational_option(const std::string& text, const char* what) {
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(std::string("invalid ") + what + " '" + text + "'");
    }
}

int run_check(const std::string& file, const std::string& mode, const std::string& obs, const std::string& engine,
              const std::string& horizon, const std::string& granularity, int max_steps) {
    TimedAutomaton ta = load_model(file);
    std::optional<TimeSelection> sel;
    if (!obs.empty()) sel = parse_selection(obs);
    if (engine == "oracle") {
        OracleOptions opt;
        opt.selection = sel;
        opt.horizon = rational_option(horizon, "horizon");
        if (!granularity.empty()) opt.granularity = rational_option(granularity, "granularity");
        opt.max_steps = max_steps;
        Query q = mode == "exists" ? Query::Exists : mode == "weak" ? Query::Weak : Query::Full;
        OpacityVerdict v = verdict_from(oracle_check(ta, q, opt), "oracle");
        report(v, mode);
        return exit_for(v.status);
    }
    if (mode == "exists") {
        if (engine != "auto") throw std::invalid_argument("exists mode only supports the auto and oracle engines");
        OpacityVerdict v = sel ? check_bounded_exists(ta, *sel) : check_exists(ta);
        report(v, mode);
        return exit_for(v.status);
    }
    Mode m = mode == "weak" ? Mode::Weak : Mode::Full;
    OpacityVerdict v;
    if (sel) {
        if (engine != "auto") throw std::invalid_argument("bounded observations only support the auto and oracle engines");
        v = check_bounded(ta, *sel, m);
    } else {
        Engine e = engine == "discrete" ? Engine::Discrete : engine == "oera" ? Engine::Oera : Engine::Auto;
        v = check_opacity(ta, m, e);
    }
    report(v, mode);
    return exit_for(v.status);
}

int run_classify(const std::string& file) {
    TimedAutomaton ta = load_model(file);
    const bool oera = is_oera(ta), eps = has_epsilon_edges(ta);
    std::cout << "name: " << ta.name << "\n";
    std::cout << "time: " << (ta.discrete() ? "discrete" : "dense") << "\n";
    std::cout << "locations: " << ta.num_locations() << "\n";
    std::cout << "actions: " << ta.actions.size() << "\n";
    std::cout << "clocks: " << ta.num_clocks() << "\n";
    std::cout << "max-constant: " << max_constant(ta) << "\n";
    std::cout << "oera: " << (oera ? "yes" : "no") << "\n";
    std::cout << "epsilon-transitions: " << (eps ? "yes" : "no") << "\n";
    std::vector<std::string> deciders{"exists", "bounded (first/static/dynamic)", "oracle"};
    if (ta.discrete()) deciders.push_back("discrete");
    if (oera) deciders.push_back("oera");
    if (ta.num_clocks() == 0) deciders.push_back("untimed");
    std::cout << "deciders:";
    for (std::size_t i = 0; i < deciders.size(); ++i) std::cout << (i ? ", " : " ") << deciders[i];
    std::cout << "\n";
    if (!ta.discrete() && !oera && ta.num_clocks() > 0)
        std::cout << "weak/full: refused (" << detail::refusal_reason(ta) << ")\n";
    for (const auto& d : validate(ta))
        if (d.warning) std::cout << "warning: " << d.message << "\n";
    return kHolds;
}

int run_export(const std::string& file, const std::string& what, const std::string& format, const std::string& obs) {
    TimedAutomaton ta = load_model(file);
    const bool json = format == "json";
    if (what == "ta") {
        std::cout << (json ? to_json(ta).dump(2) + "\n" : to_dot(ta));
        return kHolds;
    }
    if (what == "region-automaton") {
        RegionAutomaton ra = build_region_automaton(ta);
        std::cout << (json ? to_json(ra).dump(2) + "\n" : to_dot(ra));
        return kHolds;
    }
    TimedAutomaton t;
    if (!obs.empty()) {
        TimeSelection sel = parse_selection(obs);
        if (sel.kind != TimeSelection::Kind::FirstN) throw std::invalid_argument("tick export takes --obs first:N");
        t = tick_construction(ta.discrete() ? discretize(ta) : ta, sel.n);
    } else if (ta.discrete()) {
        t = augment_ticks(ta);
    } else {
        throw std::invalid_argument("tick export of a dense-time automaton needs --obs first:N");
    }
    std::cout << (json ? to_json(t).dump(2) + "\n" : to_dot(t));
    return kHolds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Timed opacity checker"};
    app.require_subcommand(1);

    std::string file, mode, obs, engine = "auto", horizon = "4", granularity;
    int max_steps = 6;
    auto* check = app.add_subcommand("check", "Decide exists, weak or full opacity");
    check->add_option("--mode", mode, "exists, weak or full")->required()->check(CLI::IsMember({"exists", "weak", "full"}));
    check->add_option("--obs", obs, "first:N, static:t1,t2,... or dynamic:N");
    check->add_option("--engine", engine, "auto, discrete, oera or oracle")
        ->check(CLI::IsMember({"auto", "discrete", "oera", "oracle"}));
    check->add_option("--horizon", horizon, "oracle time horizon");
    check->add_option("--granularity", granularity, "oracle time grid");
    check->add_option("--max-steps", max_steps, "oracle bound on observed letters (dense time)");
    check->add_option("file", file, "model file")->required();

    std::string cfile;
    auto* classify = app.add_subcommand("classify", "Report the subclass and applicable deciders");
    classify->add_option("file", cfile, "model file")->required();

    std::string efile, what = "ta", format = "dot", eobs;
    auto* exp = app.add_subcommand("export", "Export an automaton as DOT or JSON");
    exp->add_option("--what", what, "ta, region-automaton or tick")
        ->check(CLI::IsMember({"ta", "region-automaton", "tick"}));
    exp->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    exp->add_option("--obs", eobs, "first:N for the tick construction");
    exp->add_option("file", efile, "model file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    try {
        if (*check) return run_check(file, mode, obs, engine, horizon, granularity, max_steps);
        if (*classify) return run_classify(cfile);
        return run_export(efile, what, format, eobs);
    } catch (const Refused& e) {
        std::cout << "verdict: refused\nreason: " << e.what() << "\n";
        return kRefused;
    } catch (const ResourceExceeded& e) {
        std::cout << "verdict: refused\nreason: " << e.what() << "\n";
        return kRefused;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
