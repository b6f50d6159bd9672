#include "support.hpp"

#include <chrono>
#include <functional>
#include <iostream>

using namespace topaq;
using support::q;
using support::word;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double seconds;  // time limit
    std::function<Outcome()> run;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

OracleOptions grid(Rational horizon, Rational g) {
    OracleOptions o;
    o.horizon = horizon;
    o.granularity = g;
    return o;
}

TimedWord random_equivalent(const TimedWord& w, std::mt19937& rng) {
    std::vector<Rational> f{0};
    for (const auto& l : w)
        if (frac_of(l.time) != 0) f.push_back(frac_of(l.time));
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    std::set<int> picks;
    while (picks.size() < f.size() - 1) picks.insert(support::uniform(rng, 1, 96));
    std::vector<Rational> g{0};
    for (int p : picks) g.push_back(q(p, 97));
    f.push_back(1);
    g.push_back(1);
    return distort(w, f, g);
}

Nfa ticked_language(const TimedAutomaton& ta) {
    return strip_trailing_ticks(to_nfa(build_region_automaton(augment_ticks(ta))));
}

Outcome secret_path_verdicts() {
    auto ta = support::model("secret_path");
    if (!check_exists(ta).holds()) return fail("exists-opacity not found");
    auto weak = check_opacity(ta, Mode::Weak, Engine::Oracle, grid(4, q(1, 2)));
    if (weak.violated()) return fail("oracle reports a weak violation " + format_word(*weak.witness));
    auto full = check_opacity(ta, Mode::Full, Engine::Oracle, grid(4, q(1, 2)));
    if (!full.violated() || !full.witness || full.witness->size() != 1) return fail("full opacity not refuted");
    const auto& w = *full.witness;
    if (!member(w, build_pub(ta)) || member(w, build_priv(ta))) return fail("witness does not separate the sides");
    if (!(w[0].time > 2 && w[0].time <= 3)) return fail("witness time " + to_string(w[0].time) + " outside (2,3]");
    return {true, "exists holds, weak " + std::string(status_name(weak.status)) + ", full violated by " +
                      format_word(w)};
}

Outcome ticked_table() {
    auto w = word({{"a", q(6, 5)}, {"b", q(3, 2)}, {"c", 2}, {"d", q(23, 10)}});
    std::string got = format_ticked(ticked_word(w, 4));
    if (got != "t a b t c d f{0,3} f{1} f{4} f{2}") return fail("got '" + got + "'");
    return {true, got};
}

Outcome tick_bijection() {
    std::mt19937 rng(20240301);
    int equivalent = 0, bad = 0;
    for (int i = 0; i < 1000; ++i) {
        TimedWord w = support::random_word(rng, 5, 6, 3), v;
        switch (i % 3) {
            case 0: v = support::random_word(rng, 5, 6, 3); break;
            case 1: v = random_equivalent(w, rng); break;
            default:
                v = random_equivalent(w, rng);
                if (!v.empty()) v[support::uniform(rng, 0, static_cast<int>(v.size()) - 1)].time += q(1, 194);
        }
        bool eq = word_equiv(w, v);
        equivalent += eq;
        if (eq != (ticked_word(w, 5) == ticked_word(v, 5))) ++bad;
    }
    if (bad) return fail(std::to_string(bad) + " counterexamples");
    return {true, "1000 pairs, " + std::to_string(equivalent) + " equivalent, 0 counterexamples"};
}

Outcome class_recognizer_membership() {
    std::mt19937 rng(20240302);
    int disagreements = 0, positives = 0;
    for (int i = 0; i < 50; ++i) {
        TimedWord w = support::random_word(rng, 4, 6, 2);
        TimedAutomaton rec = class_recognizer(w);
        for (int j = 0; j < 200; ++j) {
            TimedWord v;
            switch (j % 3) {
                case 0: v = random_equivalent(w, rng); break;
                case 1:
                    v = w;
                    for (auto& l : v) l.time = q(support::uniform(rng, 0, 12), 6);
                    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.time < y.time; });
                    break;
                default: v = support::random_word(rng, 4, 6, 2);
            }
            bool eq = word_equiv(v, w);
            positives += eq;
            if (member(v, rec) != eq) ++disagreements;
        }
    }
    if (disagreements) return fail(std::to_string(disagreements) + " disagreements");
    return {true, "10000 probes, " + std::to_string(positives) + " in class, 0 disagreements"};
}

Outcome discrete_vs_oracle() {
    std::mt19937 rng(20240303);
    int violated = 0;
    for (int i = 0; i < 100; ++i) {
        auto ta = support::random_ta(rng, TimeDomain::Discrete);
        for (Mode m : {Mode::Weak, Mode::Full}) {
            auto d = check_opacity(ta, m, Engine::Discrete);
            auto o = oracle_check(ta, m == Mode::Weak ? Query::Weak : Query::Full);
            if (!o.definitive) return fail("oracle not definitive on instance " + std::to_string(i));
            if (d.status != o.status)
                return fail("instance " + std::to_string(i) + ": decider " + status_name(d.status) + ", oracle " +
                            status_name(o.status) + "\n" + print_model(ta));
            violated += d.violated();
        }
    }
    return {true, "200 verdicts agree, " + std::to_string(violated) + " violations"};
}

Outcome oera_decider() {
    auto ta = support::model("oera");
    auto v = check_opacity(ta, Mode::Weak);
    if (v.engine != "oera" || !v.violated() || !v.witness || v.witness->size() != 2)
        return fail("weak opacity not refuted by the oERA engine");
    const auto& w = *v.witness;
    if (w[0].action != "a" || w[1].action != "b" || !(w[1].time - w[0].time < 1))
        return fail("unexpected witness " + format_word(w));
    auto o = oracle_check(ta, Query::Weak, grid(3, q(1, 4)));
    if (o.status != Status::Violated) return fail("oracle does not concur");
    auto ng = check_opacity(support::model("oera_noguard"), Mode::Weak);
    if (!ng.holds()) return fail("guard-free variant reported " + std::string(status_name(ng.status)));
    return {true, "witness " + format_word(w) + ", oracle " + format_word(*o.witness) + ", guard-free variant holds"};
}

Outcome bounded_pipeline() {
    auto ta = support::model("secret_path");
    if (!check_bounded(ta, TimeSelection::first(1), Mode::Weak).holds()) return fail("FirstN(1) weak not holding");
    if (!check_bounded(ta, TimeSelection::first(1), Mode::Full).violated()) return fail("FirstN(1) full not violated");
    std::mt19937 rng(20240304);
    int checked = 0;
    for (int i = 0; i < 20; ++i) {
        std::vector<Rational> tau;
        const int len = support::uniform(rng, 0, 2), den = support::uniform(rng, 1, 4);
        for (int k = 0; k < len; ++k) tau.push_back(q(support::uniform(rng, 0, 3 * den), den));
        std::sort(tau.begin(), tau.end());
        auto norm = normalize_sequence(tau);
        for (Mode m : {Mode::Weak, Mode::Full}) {
            auto a = check_bounded(ta, TimeSelection::fixed(tau), m);
            auto b = check_bounded(ta, TimeSelection::fixed(norm), m);
            if (a.status != b.status)
                return fail("static " + format_selection(TimeSelection::fixed(tau)) + " and its normal form differ");
            ++checked;
        }
    }
    for (Mode m : {Mode::Weak, Mode::Full}) {
        auto d = check_bounded(ta, TimeSelection::dynamic(1), m);
        auto e = check_bounded(unfold_free(ta, 1), TimeSelection::first(2), m);
        if (d.status != e.status || d.witness != e.witness) return fail("dynamic(1) differs from first(2) of the unfolding");
    }
    return {true, "first:1 weak holds, full violated; " + std::to_string(checked) +
                      " static verdicts invariant; dynamic:1 matches"};
}

std::vector<TimedAutomaton> decidable_instances() {
    std::vector<TimedAutomaton> r{support::model("secret_path_discrete"), support::model("discrete_example")};
    std::mt19937 rng(20240305);
    for (int i = 0; i < 20; ++i) r.push_back(support::random_ta(rng, TimeDomain::Discrete));
    return r;
}

Outcome metamorphic() {
    auto inst = decidable_instances();
    int bad = 0, included = 0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const auto& ta = inst[i];
        bool weak = check_opacity(ta, Mode::Weak).holds();
        bool full = check_opacity(ta, Mode::Full).holds();
        bool weak_swap = check_opacity(swap_gadget(ta), Mode::Weak).holds();
        bool full_embed = check_opacity(embed_gadget(ta), Mode::Full).holds();
        if (full != (weak && weak_swap)) ++bad;
        if (weak != full_embed) ++bad;
        const auto& other = inst[(i + 1) % inst.size()];
        for (const auto* b : {&other, &ta}) {
            bool incl = regular_inclusion(ticked_language(ta), ticked_language(*b)).included;
            included += incl;
            if (check_opacity(inclusion_gadget(ta, *b), Mode::Weak).holds() != incl) ++bad;
        }
    }
    if (bad) return fail(std::to_string(bad) + " disagreements");
    return {true, std::to_string(inst.size()) + " instances, " + std::to_string(included) + "/" +
                      std::to_string(2 * inst.size()) + " inclusions, 0 disagreements"};
}

Outcome region_bounds() {
    std::vector<TimedAutomaton> automata;
    for (const char* m : {"secret_path", "secret_path_discrete", "discrete_example", "oera", "oera_noguard", "loop_then_b"}) {
        auto ta = support::model(m);
        automata.push_back(ta);
        automata.push_back(build_priv(ta));
        automata.push_back(build_pub(ta));
        automata.push_back(product(build_priv(ta), build_pub(ta)));
        if (ta.discrete()) automata.push_back(augment_ticks(ta));
        else automata.push_back(tick_construction(ta, 1));
    }
    std::mt19937 rng(20240306);
    for (int i = 0; i < 50; ++i) automata.push_back(support::random_ta(rng, i % 2 ? TimeDomain::Dense : TimeDomain::Discrete));
    for (const auto& ta : automata)
        if (Integer(static_cast<unsigned long>(build_region_automaton(ta).size())) > region_count_bound(ta))
            return fail("region bound exceeded by " + ta.name);
    std::size_t words = 0, worst = 0;
    for (const char* m : {"secret_path", "loop_then_b"}) {
        auto ta = support::model(m);
        for (int N = 1; N <= 2; ++N) {
            Nfa n = to_nfa(build_region_automaton(tick_construction(ta, N)));
            const Integer bound = visited_region_bound(ta, N);
            auto sides = collect_traces(ta, 3, 5, q(1, 2), TimeSelection::first(N));
            for (const auto* set : {&sides.priv, &sides.pub})
                for (const auto& w : *set) {
                    std::size_t visited = visited_states(n, ticked_word(w, N));
                    worst = std::max(worst, visited);
                    ++words;
                    if (Integer(static_cast<unsigned long>(visited)) > bound)
                        return fail("visited-region bound exceeded on " + format_word(w));
                }
        }
    }
    return {true, std::to_string(automata.size()) + " region automata within bound; " + std::to_string(words) +
                      " ticked words, at most " + std::to_string(worst) + " regions visited"};
}

// Letters along a random path of the NFA, preferring paths that end in an accepting state.
std::vector<std::string> random_path(const Nfa& n, std::mt19937& rng) {
    std::vector<std::string> w;
    std::vector<int> cur = n.closure(n.initial);
    for (int step = 0; step < 12 && !(n.any_accepting(cur) && support::uniform(rng, 0, 2) > 0); ++step) {
        std::vector<int> options;
        for (int l = 0; l < static_cast<int>(n.letters.size()); ++l)
            if (!n.post(cur, l).empty()) options.push_back(l);
        if (options.empty()) break;
        int l = options[support::uniform(rng, 0, static_cast<int>(options.size()) - 1)];
        w.push_back(n.letters[l]);
        cur = n.post(cur, l);
    }
    return w;
}

Outcome witness_verification() {
    std::vector<std::pair<Nfa, Nfa>> pairs;
    for (const auto& ta : decidable_instances())
        pairs.push_back({to_nfa(build_region_automaton(augment_ticks(build_priv(ta)))),
                         to_nfa(build_region_automaton(augment_ticks(build_pub(ta))))});
    std::mt19937 rng(20240307);
    int accepted = 0;
    for (int i = 0; i < 200; ++i) {
        const auto& [a, b] = pairs[i % pairs.size()];
        std::vector<std::pair<std::string, int>> tokens;
        if (i % 2) {
            const int len = support::uniform(rng, 1, 5);
            for (int k = 0; k < len; ++k) {
                int r = support::uniform(rng, 0, 4);
                if (r < 3) tokens.push_back({"t", support::uniform(rng, 1, 1024)});
                else tokens.push_back({a.letters[support::uniform(rng, 0, static_cast<int>(a.letters.size()) - 1)], 1});
            }
        } else {
            for (const auto& l : random_path(i % 4 ? b : a, rng))
                tokens.push_back({l, l == "t" && support::uniform(rng, 0, 3) == 0 ? support::uniform(rng, 1, 1024) : 1});
        }
        std::string desc, binary;
        std::vector<std::string> expanded;
        for (const auto& [letter, e] : tokens) {
            desc += letter + "^" + std::to_string(e) + " ";
            for (int bit = 10; bit >= 0; --bit)
                if (e >> bit & 1) binary += letter + "^" + std::to_string(1 << bit) + " ";
            expanded.insert(expanded.end(), e, letter);
        }
        auto got = verify_witness(a, b, desc);
        auto again = verify_witness(a, b, binary);
        std::pair<bool, bool> want{a.accepts(expanded), b.accepts(expanded)};
        if (got != want || again != want) return fail("mismatch on '" + desc + "'");
        accepted += want.first || want.second;
    }
    return {true, "200 descriptions, " + std::to_string(accepted) + " accepted by a side, expansion and squaring agree"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "worked example verdicts", 1, secret_path_verdicts},
        {2, "ticked word table", 1, ticked_table},
        {3, "ticked words characterize equivalence", 5, tick_bijection},
        {4, "class recognizer membership", 60, class_recognizer_membership},
        {5, "discrete decider agrees with the oracle", 120, discrete_vs_oracle},
        {6, "oERA decider", 1, oera_decider},
        {7, "bounded attacker pipeline", 60, bounded_pipeline},
        {8, "metamorphic inter-reductions", 120, metamorphic},
        {9, "region count bounds", 120, region_bounds},
        {10, "compressed witness verification", 30, witness_verification},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.pass && secs > c.seconds) o = fail(o.detail + "; took longer than the limit");
        std::printf("%s %2d %s (%.2f s, limit %.0f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs, c.seconds,
                    o.detail.c_str());
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
