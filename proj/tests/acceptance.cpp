// Acceptance suite: one PASS/FAIL line per criterion, with the sample
// counts and runtime limits pinned below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dks/defaults.hpp"
#include "dks/errors.hpp"
#include "dks/nonmono.hpp"
#include "dks/random.hpp"
#include "dks/represent.hpp"

using namespace dks;

namespace {

constexpr std::uint64_t seed = 20240601;
constexpr int structure_samples = 2000;          // criterion 4, at least 500
constexpr int plain_samples = 1000;              // criterion 5, at least 200
constexpr int cumulative_samples = 1000;         // criterion 6, at least 200
constexpr int precondition_free_samples = 1000;  // criterion 8, at least 200
constexpr double example_limit_s = 1.0;
constexpr double structure_limit_s = 60.0;
constexpr double representation_limit_s = 120.0;

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok && passed) {
            passed = false;
            detail = what;
        }
    }
};

// Shared tallies for the cross-cutting criteria 7 and 9.
struct Tally {
    std::size_t oracle_cases = 0;
    std::size_t oracle_discrepancies = 0;
    std::string first_discrepancy;
    std::size_t closure_systems = 0;
    std::size_t closure_failures = 0;
    std::string first_closure_failure;

    void agreement(const CheckReport& r, const std::string& where)
    {
        oracle_cases += r.cases;
        if (!r.passed) {
            ++oracle_discrepancies;
            if (first_discrepancy.empty()) first_discrepancy = where + ": " + r.witness->tuple();
        }
    }

    void closure_laws(const InformationSystem& sys, const std::string& where)
    {
        if (sys.universe().size() > 5) return;
        ++closure_systems;
        const auto cons = sys.con().enumerate();
        for (TokenSet x : cons) {
            const TokenSet fx = closure(sys, x);
            bool ok = x.subset_of(fx) && closure(sys, fx) == fx;
            for (TokenSet y : cons) {
                if (x.subset_of(y) && !fx.subset_of(closure(sys, y))) ok = false;
            }
            if (!ok) {
                ++closure_failures;
                if (first_closure_failure.empty()) first_closure_failure = where + " at " + sys.universe().format(x);
                return;
            }
        }
    }
};

std::string sample(const char* kind, int i) { return std::string{kind} + " sample " + std::to_string(i); }

std::vector<TokenSet> lifted(const NmRelation& nm, const RepresentationResult& rep)
{
    std::vector<TokenSet> out;
    for (TokenSet p : nm.premises()) out.push_back(rep.lift(p));
    return out;
}

DefaultStructure blocked_default()
{
    const auto u = make_universe({"a", "b"});
    return DefaultStructure(InformationSystem(ConsistencyPredicate(u, {u->set_of({"a", "b"})})), {{TokenSet{}, 1}});
}

DefaultStructure chained_defaults()
{
    const auto u = make_universe({"a", "b", "c"});
    return DefaultStructure(InformationSystem(ConsistencyPredicate(u, {u->set_of({"a", "b", "c"})})),
                            {{TokenSet{}, 0}, {u->set_of({"a"}), 1}, {u->set_of({"b"}), 2}});
}

Outcome criterion1()
{
    Outcome o;
    const auto ds = blocked_default();
    const auto& u = ds.universe();
    o.require(guided_extensions(ds, {}) == std::vector<TokenSet>{u.set_of({"b"})}, "extensions of {} differ from [{b}]");
    o.require(guided_extensions(ds, u.set_of({"a"})) == std::vector<TokenSet>{u.set_of({"a"})},
              "extensions of {a} differ from [{a}]");
    const auto nm = derive_nm(ds);
    o.require(nm.entails({}, u.set_of({"b"})), "{} |~ b does not hold");
    o.require(!nm.entails(u.set_of({"a"}), u.set_of({"b"})), "{a} |~ b holds");
    return o;
}

Outcome criterion2()
{
    Outcome o;
    const auto ds = chained_defaults();
    const auto& u = ds.universe();
    o.require(guided_extensions(ds, {}) == std::vector<TokenSet>{u.set_of({"a", "b"})}, "extensions of {} differ");
    o.require(guided_extensions(ds, u.set_of({"b"})) == std::vector<TokenSet>{u.set_of({"a", "b"}), u.set_of({"b", "c"})},
              "extensions of {b} differ");
    const auto v = check_axioms(derive_nm(ds));
    const auto& cm = v.cautious_monotony();
    o.require(!cm.passed && cm.witness && cm.witness->parts == std::vector<std::string>{"{}", "a", "b"},
              "cautious monotony witness is not ({}, a, b)");
    o.require(check_cautious_cut_theorem(ds).passed, "cautious cut fails");
    return o;
}

Outcome criterion3()
{
    Outcome o;
    const auto con = ConsistencyPredicate::unconstrained(make_universe({"a", "b"}));
    const auto nm = generate_closure(con, std::vector<Instance>{{TokenSet{}, 0}, {TokenSet{}, 1}});
    const auto rep = build_plain(nm);
    const auto& ds = rep.structure();
    const auto& u = ds.universe();
    o.require(rep.labels().size() == 4, "label count is not 4");
    std::vector<std::string> rules;
    for (const auto& r : ds.rules()) rules.push_back(ds.format_rule(r));
    const std::vector<std::string> want_rules{"{}:[{}]/[{}]", "{[{}]}:a/a", "{[{}]}:b/b",
                                              "{a}:[{a}]/[{a}]", "{b}:[{b}]/[{b}]", "{a,b}:[{a,b}]/[{a,b}]"};
    o.require(rules == want_rules, "default rules differ from the six listed");
    o.require(!ds.con().contains(u.set_of({"[{}]", "[{a}]"})), "{[{}],[{a}]} is consistent");
    o.require(!ds.con().contains(u.set_of({"[{a}]", "b"})), "{[{a}],b} is consistent");
    o.require(guided_extensions(ds, {}) == std::vector<TokenSet>{u.set_of({"[{}]", "a", "b"})}, "extension of {} differs");
    o.require(guided_extensions(ds, u.set_of({"b"})) ==
                  std::vector<TokenSet>{u.set_of({"b", "[{b}]"}), u.set_of({"a", "b", "[{}]"})},
              "extensions of {b} differ");
    o.require(verify_conservativity(nm, rep).passed, "conservativity fails");
    return o;
}

Outcome criterion4(Tally& tally)
{
    Outcome o;
    Rng rng(seed);
    StructureShape shape;
    shape.max_tokens = 6;
    shape.max_rules = 8;
    shape.entailment_percent = 30;
    for (int i = 0; i < structure_samples; ++i) {
        const auto ds = random_default_structure(rng, shape);
        const auto laws = check_extension_laws(ds);
        const auto absorption = check_extension_absorption(ds);
        o.require(laws.passed, sample("structure", i) + ": " + laws.name + " " + (laws.witness ? laws.witness->tuple() : ""));
        o.require(absorption.passed, sample("structure", i) + ": " + absorption.name);
        tally.agreement(check_enumeration_agreement(ds), sample("structure", i));
        tally.closure_laws(ds.system(), sample("structure", i));
    }
    if (o.passed) o.detail = std::to_string(structure_samples) + " structures";
    return o;
}

// Restricted derived relation equals the source relation, computed here
// from the constructed structure's extensions.
bool round_trips(const NmRelation& nm, const RepresentationResult& rep)
{
    const auto& ds = rep.structure();
    for (TokenSet p : nm.premises()) {
        if (rep.restrict(skeptical_consequences(ds, rep.lift(p))) != tilde(nm, p)) return false;
    }
    for_each_subset(nm.universe().all(), [&](TokenSet x) {
        if (nm.con().contains(x) != ds.con().contains(rep.lift(x))) throw InvariantBreach("consistency differs on source sets");
    });
    return true;
}

Outcome criterion5(Tally& tally)
{
    Outcome o;
    Rng rng(seed + 5);
    for (int i = 0; i < plain_samples; ++i) {
        const auto nm = random_abstract_system(rng, SystemShape{});
        const auto rep = build_plain(nm);
        const auto where = sample("plain", i);
        o.require(round_trips(nm, rep), where + ": derived relation differs from the source");
        for (TokenSet p : nm.premises()) {
            for (const auto& e : enumerate_extensions(rep.structure(), rep.lift(p)).extensions) {
                o.require(e.depth <= 2, where + ": extension depth " + std::to_string(e.depth));
            }
        }
        o.require(verify_extension_shape(nm, rep).passed, where + ": extension shape");
        tally.agreement(check_enumeration_agreement(rep.structure(), lifted(nm, rep)), where);
    }
    if (o.passed) o.detail = std::to_string(plain_samples) + " systems";
    return o;
}

Outcome criterion6(Tally& tally)
{
    Outcome o;
    Rng rng(seed + 6);
    for (int i = 0; i < cumulative_samples; ++i) {
        const auto nm = random_cumulative_system(rng, SystemShape{});
        const auto rep = build_cumulative(nm);
        const auto& ds = rep.structure();
        const auto where = sample("cumulative", i);
        for (TokenSet p : nm.premises()) {
            const TokenSet tp = tilde(nm, p);
            TokenSet delta = rep.lift(tp);
            for (TokenSet q : nm.premises()) {
                if (q.subset_of(tp) && tilde(nm, q) == tp) delta.insert(rep.label_of(q));
            }
            const auto report = enumerate_extensions(ds, rep.lift(p));
            o.require(report.sets() == std::vector<TokenSet>{delta}, where + ": extension of " + nm.universe().format(p));
            for (const auto& e : report.extensions) o.require(e.depth <= 3, where + ": depth " + std::to_string(e.depth));
        }
        o.require(round_trips(nm, rep), where + ": derived relation differs from the source");
        const auto unique = verify_unique_extension(nm, rep);
        o.require(unique.passed, where + ": " + (unique.witness ? unique.witness->explanation : unique.name));
        o.require(check_axioms(derive_nm(ds)).cumulative(), where + ": rebuilt relation is not cumulative");
        tally.agreement(check_enumeration_agreement(ds, lifted(nm, rep)), where);
    }
    if (o.passed) o.detail = std::to_string(cumulative_samples) + " systems";
    return o;
}

Outcome criterion7(const Tally& tally)
{
    Outcome o;
    o.require(tally.oracle_discrepancies == 0,
              std::to_string(tally.oracle_discrepancies) + " discrepancies, first at " + tally.first_discrepancy);
    if (o.passed) o.detail = std::to_string(tally.oracle_cases) + " premises compared, 0 discrepancies";
    return o;
}

Outcome criterion8(Tally& tally)
{
    Outcome o;
    Rng rng(seed + 8);
    StructureShape shape;
    shape.max_tokens = 5;
    shape.precondition_free = true;
    for (int i = 0; i < precondition_free_samples; ++i) {
        const auto ds = random_default_structure(rng, shape);
        const auto v = check_axioms(derive_nm(ds));
        o.require(v.cumulative(), sample("precondition-free", i) + ": " +
                                      (v.cautious_monotony().witness ? v.cautious_monotony().witness->tuple() : ""));
        tally.closure_laws(ds.system(), sample("precondition-free", i));
    }
    if (o.passed) o.detail = std::to_string(precondition_free_samples) + " structures";
    return o;
}

Outcome criterion9(const Tally& tally)
{
    Outcome o;
    o.require(tally.closure_failures == 0, tally.first_closure_failure);
    o.require(tally.closure_systems > 0, "no systems with at most 5 tokens were generated");
    if (o.passed) o.detail = std::to_string(tally.closure_systems) + " systems";
    return o;
}

bool report(int id, const char* title, double limit, const std::function<Outcome()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.passed = false;
        o.detail = std::string{"exception: "} + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = limit <= 0 || secs < limit;
    if (o.passed && !in_time) o.detail = "exceeded the time limit";
    const bool ok = o.passed && in_time;
    char timing[64];
    if (limit > 0) {
        std::snprintf(timing, sizeof timing, "%.3fs < %.0fs", secs, limit);
    } else {
        std::snprintf(timing, sizeof timing, "%.3fs", secs);
    }
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << "  " << title << "  [" << timing << "]";
    if (!o.detail.empty()) std::cout << "  " << o.detail;
    std::cout << std::endl;
    return ok;
}

} // namespace

int main()
{
    Tally tally;
    bool all = true;
    all &= report(1, "blocked default example", example_limit_s, criterion1);
    all &= report(2, "chained defaults example", example_limit_s, criterion2);
    all &= report(3, "plain representation example", example_limit_s, criterion3);
    all &= report(4, "extension laws and absorption on random structures", structure_limit_s, [&] { return criterion4(tally); });
    all &= report(5, "plain representation round trip", representation_limit_s, [&] { return criterion5(tally); });
    all &= report(6, "cumulative representation round trip", representation_limit_s, [&] { return criterion6(tally); });
    all &= report(7, "guided search equals exhaustive oracle", 0, [&] { return criterion7(tally); });
    all &= report(8, "precondition-free structures are cumulative", 0, [&] { return criterion8(tally); });
    all &= report(9, "closure operator laws", 0, [&] { return criterion9(tally); });
    return all ? 0 : 1;
}
