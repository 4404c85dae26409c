#include <doctest.h>

#include "dks/core.hpp"
#include "dks/errors.hpp"
#include "dks/random.hpp"
#include "oracle.hpp"

using namespace dks;

namespace {

UniversePtr ab() { return make_universe({"a", "b"}); }

TokenSet S(const TokenUniverse& u, std::vector<std::string> names) { return u.set_of(names); }

} // namespace

TEST_CASE("token sets")
{
    const auto s = TokenSet::of({0, 2});
    CHECK(s.size() == 2);
    CHECK(s.contains(2));
    CHECK_FALSE(s.contains(1));
    CHECK(s.front() == 0);
    CHECK(TokenSet::first(3) == TokenSet::of({0, 1, 2}));
    CHECK(TokenSet::first(64).size() == 64);
    CHECK(TokenSet(0b101) == s);
    std::vector<Token> members(s.begin(), s.end());
    CHECK(members == std::vector<Token>{0, 2});

    int count = 0;
    for_each_subset(s, [&](TokenSet) { ++count; });
    CHECK(count == 4);

    // Shortlex: size first, then the smallest differing member.
    CHECK(shortlex_less(TokenSet{}, TokenSet::of({0})));
    CHECK(shortlex_less(TokenSet::of({0}), TokenSet::of({1})));
    CHECK(shortlex_less(TokenSet::of({5}), TokenSet::of({0, 1})));
    CHECK(shortlex_less(TokenSet::of({0, 2}), TokenSet::of({1, 2})));
    CHECK_FALSE(shortlex_less(s, s));
}

TEST_CASE("token names and universes")
{
    CHECK(is_valid_token_name("a"));
    CHECK(is_valid_token_name("[{a,b}]"));
    CHECK(is_valid_token_name("[{}]"));
    CHECK_FALSE(is_valid_token_name(""));
    CHECK_FALSE(is_valid_token_name("a b"));
    CHECK_FALSE(is_valid_token_name("a,b"));
    CHECK_FALSE(is_valid_token_name("a#"));
    CHECK_FALSE(is_valid_token_name("[a"));

    const TokenUniverse u({"c", "a", "b"});
    CHECK(u.names() == std::vector<std::string>{"a", "b", "c"});
    CHECK(u.index("c") == 2);
    CHECK_FALSE(u.find("z"));
    CHECK_THROWS_AS((void)u.index("z"), ModelError);
    CHECK(u.format(S(u, {"c", "a"})) == "{a,c}");
    CHECK(u.format({}) == "{}");
    CHECK(format_family(u, {TokenSet{}, S(u, {"b", "c"})}) == "[{}, {b,c}]");
    CHECK_THROWS_AS(TokenUniverse({"a", "a"}), ModelError);
}

TEST_CASE("consistency predicate")
{
    const auto u = make_universe({"a", "b", "c"});
    SUBCASE("singleton conflicts are rejected")
    {
        CHECK_THROWS_WITH_AS(ConsistencyPredicate(u, {TokenSet::of({0})}), doctest::Contains("singleton conflicts forbidden"),
                             ModelError);
    }
    SUBCASE("forbidden sets normalise to an antichain")
    {
        const ConsistencyPredicate con(u, {TokenSet::of({0, 1, 2}), TokenSet::of({0, 1}), TokenSet::of({0, 1})});
        CHECK(con.forbidden() == std::vector<TokenSet>{TokenSet::of({0, 1})});
        CHECK(con.enumerate() == std::vector<TokenSet>{TokenSet{}, TokenSet::of({0}), TokenSet::of({1}),
                                                       TokenSet::of({2}), TokenSet::of({0, 2}), TokenSet::of({1, 2})});
    }
    SUBCASE("compatible_with matches a direct scan")
    {
        Rng rng(7);
        for (int i = 0; i < 200; ++i) {
            const auto con = random_consistency(rng, u, 3);
            for_each_subset(u->all(), [&](TokenSet s) {
                TokenSet want;
                if (con.contains(s)) {
                    for (Token t = 0; t < 3; ++t) {
                        if (con.contains(s.with(t))) want.insert(t);
                    }
                }
                CHECK(con.compatible_with(s) == want);
            });
        }
    }
}

TEST_CASE("validate_system")
{
    const auto u = ab();
    const Token a = 0;
    const Token b = 1;
    SUBCASE("no conflicts: {a} |- b is lawful")
    {
        const InformationSystem sys(ConsistencyPredicate::unconstrained(u), EntailmentRelation({{TokenSet::of({a}), b}}));
        CHECK(validate_system(sys).ok());
    }
    SUBCASE("{a} |- b with {a,b} forbidden breaks property 3")
    {
        const InformationSystem sys(ConsistencyPredicate(u, {TokenSet::of({a, b})}),
                                    EntailmentRelation({{TokenSet::of({a}), b}}));
        const auto report = validate_system(sys);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].property == 3);
        CHECK(report.violations[0].witness.parts == std::vector<std::string>{"{a}", "b"});
        CHECK_THROWS_AS(load_system(sys.con(), sys.entail()), LoadError);
    }
    SUBCASE("random lawful systems pass")
    {
        Rng rng(11);
        StructureShape shape;
        shape.entailment_percent = 100;
        for (int i = 0; i < 100; ++i) CHECK(validate_system(random_default_structure(rng, shape).system()).ok());
    }
}

TEST_CASE("closure")
{
    const auto u = make_universe({"a", "b", "c"});
    const auto con = ConsistencyPredicate::unconstrained(u);
    SUBCASE("identity without sequents")
    {
        const InformationSystem sys(con);
        CHECK(closure(sys, TokenSet::of({0})) == TokenSet::of({0}));
        CHECK(closure(sys, {}) == TokenSet{});
    }
    SUBCASE("chained sequents")
    {
        const InformationSystem sys(con, EntailmentRelation({{TokenSet::of({0}), 1}, {TokenSet::of({1}), 2}}));
        const auto want = naive::saturate(naive::from(sys), {"a"});
        CHECK(want == naive::Names{"a", "b", "c"});
        CHECK(closure(sys, TokenSet::of({0})) == naive::bits(*u, want));
        CHECK(closure(sys, {}) == TokenSet{});
    }
    SUBCASE("inconsistent premise")
    {
        const InformationSystem sys(ConsistencyPredicate(u, {TokenSet::of({0, 1})}));
        CHECK_THROWS_WITH_AS((void)closure(sys, TokenSet::of({0, 1})), "inconsistent premise set", ModelError);
    }
}

TEST_CASE("enumerate_states")
{
    const auto u = ab();
    CHECK(enumerate_states(InformationSystem(ConsistencyPredicate(u, {TokenSet::of({0, 1})}))) ==
          std::vector<TokenSet>{TokenSet{}, TokenSet::of({0}), TokenSet::of({1})});
    CHECK(enumerate_states(InformationSystem(ConsistencyPredicate::unconstrained(u))) ==
          std::vector<TokenSet>{TokenSet{}, TokenSet::of({0}), TokenSet::of({1}), TokenSet::of({0, 1})});

    const InformationSystem chained(ConsistencyPredicate::unconstrained(u), EntailmentRelation({{TokenSet::of({0}), 1}}));
    const auto states = enumerate_states(chained);
    CHECK(states == std::vector<TokenSet>{TokenSet{}, TokenSet::of({1}), TokenSet::of({0, 1})});
    std::vector<TokenSet> want;
    for (const auto& s : naive::states(naive::from(chained))) want.push_back(naive::bits(*u, s));
    std::sort(want.begin(), want.end(), ShortlexLess{});
    CHECK(states == want);
}

TEST_CASE("closure operator laws on random systems")
{
    Rng rng(2024);
    StructureShape shape;
    shape.max_tokens = 5;
    shape.entailment_percent = 100;
    for (int i = 0; i < 150; ++i) {
        const auto sys = random_default_structure(rng, shape).system();
        const auto& u = sys.universe();
        const auto oracle = naive::from(sys);
        const auto cons = sys.con().enumerate();
        for (TokenSet x : cons) {
            const TokenSet fx = closure(sys, x);
            CHECK(fx == naive::bits(u, naive::saturate(oracle, naive::names(u, x))));
            CHECK(x.subset_of(fx));
            CHECK(closure(sys, fx) == fx);
            for (TokenSet y : cons) {
                if (x.subset_of(y)) CHECK(fx.subset_of(closure(sys, y)));
            }
        }
        std::vector<TokenSet> want;
        for (const auto& s : naive::states(oracle)) want.push_back(naive::bits(u, s));
        std::sort(want.begin(), want.end(), ShortlexLess{});
        CHECK(enumerate_states(sys) == want);
    }
}
