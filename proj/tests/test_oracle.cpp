#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace topaq;
using support::q;
using support::word;

namespace {

OracleOptions options(Rational horizon, Rational g) {
    OracleOptions o;
    o.horizon = horizon;
    o.granularity = g;
    return o;
}

}  // namespace

TEST_CASE("exists query on the bundled example") {
    auto r = oracle_check(support::model("secret_path"), Query::Exists, options(4, q(1, 2)));
    CHECK(r.status == Status::Holds);
    CHECK(r.definitive);
    REQUIRE(r.witness);
    CHECK(*r.witness == word({{"b", q(3, 2)}}));
    CHECK(r.side == Side::Both);
}

TEST_CASE("full query finds the public-only trace") {
    auto ta = support::model("secret_path");
    auto r = oracle_check(ta, Query::Full, options(4, q(1, 2)));
    CHECK(r.status == Status::Violated);
    CHECK(r.side == Side::PublicOnly);
    REQUIRE(r.witness);
    CHECK(*r.witness == word({{"b", q(5, 2)}}));
    CHECK(member(*r.witness, build_pub(ta)));
    CHECK_FALSE(member(*r.witness, build_priv(ta)));
}

TEST_CASE("weak query is inconclusive in dense time") {
    auto r = oracle_check(support::model("secret_path"), Query::Weak, options(3, q(1, 2)));
    CHECK(r.status == Status::Inconclusive);
    CHECK_FALSE(r.definitive);
    CHECK(r.note.find("no witness") != std::string::npos);
}

TEST_CASE("empty languages are vacuously opaque") {
    auto ta = support::model("secret_path_discrete");
    std::fill(ta.fin.begin(), ta.fin.end(), 0);
    auto r = oracle_check(ta, Query::Weak);
    CHECK(r.status == Status::Holds);
    CHECK(r.definitive);
}

TEST_CASE("discrete exploration saturates") {
    auto ta = support::model("secret_path_discrete");
    auto weak = oracle_check(ta, Query::Weak);
    CHECK(weak.status == Status::Holds);
    CHECK(weak.definitive);
    auto full = oracle_check(ta, Query::Full);
    CHECK(full.status == Status::Violated);
    REQUIRE(full.witness);
    CHECK(*full.witness == word({{"b", 3}}));
    auto tick = oracle_check(support::model("discrete_example"), Query::Weak);
    CHECK(tick.status == Status::Violated);
    REQUIRE(tick.witness);
    CHECK(*tick.witness == word({{"a", 3}}));
    CHECK_THROWS_AS(oracle_check(ta, Query::Weak, options(4, q(1, 2))), std::invalid_argument);
}

TEST_CASE("answers are deterministic") {
    auto ta = support::model("oera");
    auto a = oracle_check(ta, Query::Weak, options(3, q(1, 2)));
    auto b = oracle_check(ta, Query::Weak, options(3, q(1, 2)));
    CHECK(a.status == b.status);
    CHECK(a.witness == b.witness);
    CHECK(a.nodes == b.nodes);
}

TEST_CASE("violations replay and separate the trace sets") {
    std::mt19937 rng(19);
    int violated = 0;
    for (int i = 0; i < 25; ++i) {
        auto ta = support::random_ta(rng, TimeDomain::Dense);
        for (Query query : {Query::Weak, Query::Full}) {
            auto r = oracle_check(ta, query, options(3, q(1, 2)));
            if (r.status != Status::Violated) continue;
            ++violated;
            REQUIRE(r.witness);
            auto has = r.side == Side::PrivateOnly ? build_priv(ta) : build_pub(ta);
            auto lacks = r.side == Side::PrivateOnly ? build_pub(ta) : build_priv(ta);
            CHECK(member(*r.witness, has));
            CHECK_FALSE(member(*r.witness, lacks));
            auto sides = collect_traces(ta, 3, 8, q(1, 2));
            const auto& produced = r.side == Side::PrivateOnly ? sides.priv : sides.pub;
            CHECK(produced.count(*r.witness) == 1);
        }
    }
    CHECK(violated > 0);
}

TEST_CASE("bounded selections") {
    auto ta = support::model("secret_path");
    OracleOptions o = options(4, q(1, 2));
    o.selection = TimeSelection::first(1);
    auto full = oracle_check(ta, Query::Full, o);
    CHECK(full.status == Status::Violated);
    REQUIRE(full.witness);
    CHECK(full.witness->size() <= 1);
    o.selection = TimeSelection::fixed({q(1, 3)});
    CHECK_THROWS_AS(oracle_check(ta, Query::Full, o), std::invalid_argument);
    o.selection = TimeSelection::dynamic(1);
    auto dyn = oracle_check(ta, Query::Exists, o);
    CHECK(dyn.status == Status::Holds);
}

TEST_CASE("default grid") {
    auto ta = support::model("secret_path");
    CHECK(default_granularity(ta, std::nullopt) == q(1, 3));
    CHECK(default_granularity(ta, TimeSelection::first(2)) == q(1, 5));
    CHECK(default_granularity(ta, TimeSelection::fixed({q(1, 2)})) == q(1, 8));
    CHECK(default_granularity(support::model("secret_path_discrete"), std::nullopt) == 1);
}
