#include <doctest.h>

#include "dks/errors.hpp"
#include "dks/random.hpp"
#include "dks/represent.hpp"
#include "oracle.hpp"

using namespace dks;

namespace {

constexpr Token a = 0;
constexpr Token b = 1;

NmRelation abs_ab()
{
    const auto con = ConsistencyPredicate::unconstrained(make_universe({"a", "b"}));
    return generate_closure(con, std::vector<Instance>{{TokenSet{}, a}, {TokenSet{}, b}});
}

TokenSet named(const DefaultStructure& ds, std::vector<std::string> names) { return ds.universe().set_of(names); }

std::vector<std::string> rule_texts(const DefaultStructure& ds)
{
    std::vector<std::string> out;
    for (const auto& r : ds.rules()) out.push_back(ds.format_rule(r));
    std::sort(out.begin(), out.end());
    return out;
}

// Source set named by a label "[{a,b}]", parsed from the name alone.
naive::Names label_source(const std::string& label)
{
    naive::Names out;
    std::string cur;
    for (char ch : label.substr(2, label.size() - 4)) {
        if (ch == ',') {
            out.insert(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.insert(cur);
    return out;
}

// The three defining conditions of the constructed consistency predicate,
// evaluated on names.
bool direct_consistent(const naive::System& source, const naive::Table& t, const naive::Names& w, bool cumulative)
{
    naive::Names plain;
    std::vector<naive::Names> labels;
    for (const auto& n : w) {
        if (n.front() == '[') {
            labels.push_back(label_source(n));
        } else {
            plain.insert(n);
        }
    }
    if (!naive::consistent(source, plain)) return false;
    if (!cumulative && labels.size() > 1) return false;
    for (const auto& x : labels) {
        if (!t.count(x) || !naive::subset(plain, t.at(x))) return false;
        for (const auto& y : labels) {
            if (t.at(x) != t.at(y)) return false;
        }
    }
    return true;
}

void check_against_oracle(const NmRelation& nm, const RepresentationResult& rep)
{
    const auto& ds = rep.structure();
    const auto& bu = ds.universe();
    const auto source = naive::from(nm.con());
    const auto table = naive::table(nm);
    const bool cumulative = rep.mode() == RepresentationMode::cumulative;
    for_each_subset(bu.all(), [&](TokenSet w) {
        REQUIRE(ds.con().contains(w) == direct_consistent(source, table, naive::names(bu, w), cumulative));
    });

    // Extensions of source premises in B, by the naive subset scan.
    const auto oracle = naive::from(ds);
    for (TokenSet p : nm.premises()) {
        const auto pn = naive::names(nm.universe(), p);
        const auto exts = naive::extensions(oracle, pn);
        REQUIRE(!exts.empty());
        naive::Names common = naive::intersection(exts);
        naive::Names restricted;
        for (const auto& n : common) {
            if (n.front() != '[') restricted.insert(n);
        }
        CHECK(restricted == table.at(pn));
        for (const auto& e : exts) {
            std::size_t depth = 0;
            naive::phi(oracle, pn, e, &depth);
            CHECK(depth <= (cumulative ? 3U : 2U));
        }
        if (cumulative) CHECK(exts.size() == 1);
        std::vector<TokenSet> want;
        for (const auto& e : exts) want.push_back(naive::bits(bu, e));
        std::sort(want.begin(), want.end(), ShortlexLess{});
        CHECK(guided_extensions(ds, rep.lift(p)) == want);
    }
}

} // namespace

TEST_CASE("plain representation of two assumptions from nothing")
{
    const auto nm = abs_ab();
    const auto rep = build_plain(nm);
    const auto& ds = rep.structure();
    std::vector<std::string> labels;
    for (const auto& l : rep.labels()) labels.push_back(l.name);
    CHECK(labels == std::vector<std::string>{"[{}]", "[{a}]", "[{b}]", "[{a,b}]"});
    CHECK(ds.universe().size() == 6);
    CHECK(rule_texts(ds) == std::vector<std::string>{"{[{}]}:a/a", "{[{}]}:b/b", "{a,b}:[{a,b}]/[{a,b}]",
                                                     "{a}:[{a}]/[{a}]", "{b}:[{b}]/[{b}]", "{}:[{}]/[{}]"});
    CHECK_FALSE(ds.con().contains(named(ds, {"[{}]", "[{a}]"})));
    CHECK_FALSE(ds.con().contains(named(ds, {"[{a}]", "b"})));
    CHECK(ds.con().contains(named(ds, {"[{}]", "a", "b"})));

    CHECK(guided_extensions(ds, {}) == std::vector<TokenSet>{named(ds, {"[{}]", "a", "b"})});
    CHECK(guided_extensions(ds, named(ds, {"b"})) ==
          std::vector<TokenSet>{named(ds, {"[{b}]", "b"}), named(ds, {"[{}]", "a", "b"})});

    CHECK(verify_conservativity(nm, rep).passed);
    CHECK(verify_extension_shape(nm, rep).passed);
    CHECK(rep.stats().tokens == 6);
    CHECK(rep.stats().rules == 6);
    CHECK(rep.stats().max_depth == 2);
    CHECK_THROWS_AS((void)verify_unique_extension(nm, rep), ModelError);

    const auto derived = derive_nm(ds);
    CHECK(derived.entails({}, named(ds, {"a"})));
    CHECK(derived.entails({}, named(ds, {"b"})));
    CHECK_FALSE(derived.entails(named(ds, {"b"}), named(ds, {"a"})));
    CHECK_FALSE(derived.entails(named(ds, {"a"}), named(ds, {"b"})));
    check_against_oracle(nm, rep);
}

TEST_CASE("reflexive-only relations")
{
    const auto con = ConsistencyPredicate::unconstrained(make_universe({"a"}));
    const auto nm = generate_closure(con, std::vector<Instance>{});
    const auto plain = build_plain(nm);
    CHECK(rule_texts(plain.structure()) == std::vector<std::string>{"{a}:[{a}]/[{a}]", "{}:[{}]/[{}]"});
    CHECK(verify_conservativity(nm, plain).passed);
    CHECK(verify_extension_shape(nm, plain).passed);

    const auto cum = build_cumulative(nm);
    const auto& ds = cum.structure();
    CHECK_FALSE(ds.con().contains(named(ds, {"[{}]", "[{a}]"})));
    CHECK(verify_unique_extension(nm, cum).passed);
}

TEST_CASE("cumulative representation of {} |~ a over {a}")
{
    const auto con = ConsistencyPredicate::unconstrained(make_universe({"a"}));
    const auto nm = generate_closure(con, std::vector<Instance>{{TokenSet{}, a}});
    const auto rep = build_cumulative(nm);
    const auto& ds = rep.structure();
    CHECK(ds.universe().names() == std::vector<std::string>{"[{a}]", "[{}]", "a"});
    CHECK(ds.con().contains(named(ds, {"[{}]", "[{a}]"})));
    CHECK(ds.con().contains(named(ds, {"[{}]", "[{a}]", "a"})));
    CHECK(guided_extensions(ds, {}) == std::vector<TokenSet>{named(ds, {"[{}]", "[{a}]", "a"})});
    CHECK(verify_unique_extension(nm, rep).passed);
    CHECK(verify_conservativity(nm, rep).passed);
    CHECK_THROWS_AS((void)verify_extension_shape(nm, rep), ModelError);
    check_against_oracle(nm, rep);
}

TEST_CASE("builders reject relations that miss their axioms")
{
    CHECK_THROWS_WITH_AS((void)build_cumulative(abs_ab()), doctest::Contains("cautious monotony"), ModelError);

    const auto con = ConsistencyPredicate::unconstrained(make_universe({"a", "b"}));
    const NmRelation no_cut(con,
                            {{TokenSet{}, TokenSet::of({a})},
                             {TokenSet::of({a}), TokenSet::of({a, b})},
                             {TokenSet::of({b}), TokenSet::of({b})},
                             {TokenSet::of({a, b}), TokenSet::of({a, b})}},
                            Provenance::user_supplied);
    CHECK_THROWS_WITH_AS((void)build_plain(no_cut), doctest::Contains("cautious cut"), ModelError);
}

TEST_CASE("label bookkeeping")
{
    const auto nm = abs_ab();
    const auto rep = build_plain(nm);
    const TokenSet x = TokenSet::of({a});
    const Token label = rep.label_of(x);
    CHECK(rep.source_of(label) == x);
    CHECK(rep.label_tokens().contains(label));
    CHECK(rep.restrict(rep.lift(x).with(label)) == x);
    CHECK_FALSE(rep.source_of(rep.lift(x).front()));
    CHECK(label_name(nm.universe(), TokenSet{}) == "[{}]");
    CHECK(label_name(nm.universe(), TokenSet::of({a, b})) == "[{a,b}]");
    for_each_subset(rep.structure().universe().all(), [&](TokenSet w) {
        CHECK(label_consistency_direct(nm, rep, w) == rep.structure().con().contains(w));
    });
}

TEST_CASE("random plain representations match the oracle")
{
    Rng rng(12);
    for (int i = 0; i < 40; ++i) {
        const auto nm = random_abstract_system(rng, SystemShape{});
        const auto rep = build_plain(nm);
        CHECK(verify_conservativity(nm, rep).passed);
        CHECK(verify_extension_shape(nm, rep).passed);
        check_against_oracle(nm, rep);
    }
}

TEST_CASE("random cumulative representations match the oracle")
{
    Rng rng(13);
    for (int i = 0; i < 40; ++i) {
        const auto nm = random_cumulative_system(rng, SystemShape{});
        REQUIRE(check_axioms(nm).cumulative());
        const auto rep = build_cumulative(nm);
        CHECK(verify_unique_extension(nm, rep).passed);
        CHECK(verify_conservativity(nm, rep).passed);
        check_against_oracle(nm, rep);
    }
}
