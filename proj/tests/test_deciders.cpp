#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace topaq;
using support::q;
using support::word;

TEST_CASE("exists-opacity of the bundled example") {
    auto ta = support::model("secret_path");
    auto v = check_exists(ta);
    CHECK(v.holds());
    REQUIRE(v.witness);
    CHECK(member(*v.witness, build_priv(ta)));
    CHECK(member(*v.witness, build_pub(ta)));
}

TEST_CASE("exists-opacity fails without private runs or without finals") {
    auto ta = support::model("secret_path");
    auto none = ta;
    std::fill(none.priv.begin(), none.priv.end(), 0);
    CHECK(check_exists(none).violated());
    auto nofinal = ta;
    std::fill(nofinal.fin.begin(), nofinal.fin.end(), 0);
    CHECK(check_exists(nofinal).violated());
}

TEST_CASE("subclass detection") {
    CHECK(is_oera(support::model("oera")));
    CHECK(is_oera(support::model("oera_noguard")));
    CHECK_FALSE(is_oera(support::model("secret_path")));
    CHECK_FALSE(is_oera(support::model("discrete_example")));
}

TEST_CASE("discrete engine") {
    auto ta = support::model("secret_path_discrete");
    auto weak = check_opacity(ta, Mode::Weak);
    CHECK(weak.engine == "discrete");
    CHECK(weak.holds());
    auto full = check_opacity(ta, Mode::Full);
    CHECK(full.violated());
    CHECK(full.side == Side::PublicOnly);
    REQUIRE(full.witness);
    CHECK(*full.witness == word({{"b", 0}}));
    CHECK(member(*full.witness, build_pub(ta)));
    CHECK_FALSE(member(*full.witness, build_priv(ta)));
}

TEST_CASE("discrete engine on the tick example") {
    auto ta = support::model("discrete_example");
    auto v = check_opacity(ta, Mode::Weak);
    CHECK(v.violated());
    REQUIRE(v.witness);
    CHECK(*v.witness == word({{"a", 3}}));
    CHECK(v.note == "tick word: t t t a");
}

TEST_CASE("empty languages are opaque") {
    auto ta = support::model("secret_path_discrete");
    std::fill(ta.fin.begin(), ta.fin.end(), 0);
    CHECK(check_opacity(ta, Mode::Full).holds());
}

TEST_CASE("oERA engine") {
    auto v = check_opacity(support::model("oera"), Mode::Weak);
    CHECK(v.engine == "oera");
    CHECK(v.violated());
    REQUIRE(v.witness);
    REQUIRE(v.witness->size() == 2);
    CHECK((*v.witness)[1].time - (*v.witness)[0].time < 1);
    CHECK(*v.witness == word({{"a", 0}, {"b", 0}}));
    CHECK(check_opacity(support::model("oera_noguard"), Mode::Weak).holds());
    CHECK(check_opacity(support::model("oera_noguard"), Mode::Full).holds());
}

TEST_CASE("oERA full opacity finds public-only traces") {
    auto ta = support::model("oera_noguard");
    ta.edges[1].guard = {{ta.clock_index("x_a"), Cmp::Ge, 1}};
    CHECK(check_opacity(ta, Mode::Weak, Engine::Oera).holds());
    auto v = check_opacity(ta, Mode::Full, Engine::Oera);
    CHECK(v.violated());
    CHECK(v.side == Side::PublicOnly);
    REQUIRE(v.witness);
    CHECK(member(*v.witness, build_pub(ta)));
    CHECK_FALSE(member(*v.witness, build_priv(ta)));
}

TEST_CASE("clockless automata use the untimed engine") {
    TimedAutomaton ta;
    ta.add_action("a");
    ta.add_action("b");
    int l0 = ta.add_location("l0"), lp = ta.add_location("lp", {}, true), lf = ta.add_location("lf", {}, false, true);
    ta.add_edge(l0, lp, 0);
    ta.add_edge(lp, lf, 1);
    ta.add_edge(l0, lf, 0);
    auto v = check_opacity(ta, Mode::Weak);
    CHECK(v.engine == "untimed");
    CHECK(v.violated());
    REQUIRE(v.witness);
    CHECK(untimed(*v.witness) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("undecidable classes are refused with a reason") {
    auto ta = support::model("secret_path");
    try {
        check_opacity(ta, Mode::Weak);
        FAIL("expected a refusal");
    } catch (const Refused& e) {
        CHECK(std::string(e.what()).find("one-clock") != std::string::npos);
        CHECK(std::string(e.what()).find("silent") != std::string::npos);
    }
    CHECK_THROWS_AS(check_opacity(ta, Mode::Weak, Engine::Discrete), Refused);
    CHECK_THROWS_AS(check_opacity(ta, Mode::Weak, Engine::Oera), Refused);
}

TEST_CASE("bounded attacker on the bundled example") {
    auto ta = support::model("secret_path");
    CHECK(check_bounded(ta, TimeSelection::first(1), Mode::Weak).holds());
    auto full = check_bounded(ta, TimeSelection::first(1), Mode::Full);
    CHECK(full.violated());
    REQUIRE(full.witness);
    auto u = unfold_first_n(ta, 1);
    CHECK(member(*full.witness, unfold_first_n(build_pub(ta), 1)));
    CHECK_FALSE(member(*full.witness, unfold_first_n(build_priv(ta), 1)));
    CHECK(check_bounded(ta, TimeSelection::first(0), Mode::Full).holds());
    CHECK_THROWS_AS(check_bounded(ta, TimeSelection::first(9), Mode::Weak), ResourceExceeded);
}

TEST_CASE("static and dynamic attackers") {
    auto ta = support::model("secret_path");
    auto a = check_bounded(ta, TimeSelection::fixed({q(1, 2)}), Mode::Full);
    auto b = check_bounded(ta, TimeSelection::fixed(normalize_sequence({q(1, 2)})), Mode::Full);
    CHECK(a.status == b.status);
    auto d = check_bounded(ta, TimeSelection::dynamic(1), Mode::Weak);
    auto e = check_bounded(unfold_free(ta, 1), TimeSelection::first(2), Mode::Weak);
    CHECK(d.status == e.status);
    CHECK(d.witness == e.witness);
}

TEST_CASE("bounded exists-opacity") {
    auto ta = support::model("secret_path");
    auto v = check_bounded_exists(ta, TimeSelection::first(1));
    CHECK(v.holds());
    REQUIRE(v.witness);
    CHECK(member(*v.witness, unfold_first_n(build_priv(ta), 1)));
    CHECK(check_bounded_exists(ta, TimeSelection::fixed({1})).holds());
    CHECK_THROWS_AS(check_bounded_exists(ta, TimeSelection::dynamic(1)), std::invalid_argument);
}

TEST_CASE("exists and weak opacity are consistent on discrete instances") {
    std::mt19937 rng(17);
    for (int i = 0; i < 30; ++i) {
        auto ta = support::random_ta(rng, TimeDomain::Discrete);
        auto weak = check_opacity(ta, Mode::Weak);
        auto full = check_opacity(ta, Mode::Full);
        if (full.holds()) CHECK(weak.holds());
        bool priv_nonempty = language_nonempty(build_priv(ta));
        if (weak.holds() && priv_nonempty) CHECK(check_exists(ta).holds());
    }
}

TEST_CASE("witness descriptions") {
    auto t = parse_witness("t^5 a f{0,1}");
    REQUIRE(t.size() == 3);
    CHECK(t[0].letter == "t");
    CHECK(t[0].exponent == 5);
    CHECK(t[2].letter == "f{0,1}");
    CHECK_THROWS_AS(parse_witness("t^"), std::invalid_argument);
    CHECK_THROWS_AS(parse_witness("^3"), std::invalid_argument);
}

TEST_CASE("compressed witnesses are checked by matrix powers") {
    auto ta = support::model("discrete_example");
    Nfa pub = to_nfa(build_region_automaton(augment_ticks(build_pub(ta))));
    Nfa priv = to_nfa(build_region_automaton(augment_ticks(build_priv(ta))));
    CHECK(verify_witness(priv, pub, "t^3 a") == std::pair<bool, bool>{true, false});
    CHECK(verify_witness(priv, pub, "t^2 a") == std::pair<bool, bool>{false, false});
    CHECK(verify_witness(priv, pub, "t^1000000000000 a") == std::pair<bool, bool>{true, false});
    CHECK_THROWS_AS(verify_witness(priv, pub, "c"), std::invalid_argument);
    for (int k = 0; k < 20; ++k) {
        std::vector<std::string> w(k, "t");
        w.push_back("a");
        CHECK(accepts_compressed(priv, {{"t", k}, {"a", 1}}) == priv.accepts(w));
    }
}

TEST_CASE("boolean matrix powers") {
    BoolMatrix m(3);
    m.set(0, 1);
    m.set(1, 2);
    m.set(2, 0);
    CHECK(power(m, 3) == BoolMatrix::identity(3));
    CHECK(power(m, 0) == BoolMatrix::identity(3));
    CHECK(power(m, 4) == m);
    CHECK(power(m, Integer("300000000000000000002")) == power(m, 2));
}

TEST_CASE("witness description on a ticked language") {
    TimedAutomaton ta;
    ta.add_clock("x");
    ta.add_action("a");
    int l0 = ta.add_location("l0"), lf = ta.add_location("lf", {}, false, true);
    ta.add_edge(l0, lf, 0, {{0, Cmp::Gt, 2}, {0, Cmp::Lt, 3}});
    Nfa n = to_nfa(build_region_automaton(tick_construction(ta, 1)));
    CHECK(verify_witness(n, n, "t^2 a f{0} f{1}") == std::pair<bool, bool>{true, true});
    CHECK(verify_witness(n, n, "t^3 a f{0} f{1}") == std::pair<bool, bool>{false, false});
    CHECK(verify_witness(n, n, "t^2 a f{0,1}") == std::pair<bool, bool>{false, false});
    Nfa eps;
    eps.add_state(true);
    eps.initial = {0};
    CHECK(verify_witness(eps, eps, "") == std::pair<bool, bool>{true, true});
}

TEST_CASE("zero observations compare only the existence of runs") {
    auto ta = support::model("secret_path");
    CHECK(check_bounded(ta, TimeSelection::first(0), Mode::Weak).holds());
    auto no_public = ta;
    no_public.edges.erase(no_public.edges.begin() + 1);
    CHECK(check_bounded(no_public, TimeSelection::first(0), Mode::Weak).violated());
    auto no_private = ta;
    no_private.edges.erase(no_private.edges.begin() + 2);
    CHECK(check_bounded(no_private, TimeSelection::first(0), Mode::Weak).holds());
    CHECK(check_bounded(no_private, TimeSelection::first(0), Mode::Full).violated());
}
