#include "dks/defaults.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "dks/errors.hpp"

namespace dks {

namespace {

// F on an arbitrary token set: the union of what its consistent subsets
// entail. Monotonicity lets us use only the maximal consistent subsets.
TokenSet apply_entailment(const InformationSystem& sys, TokenSet x)
{
    const auto& entail = sys.entail();
    if (entail.trivial()) return x;
    if (sys.con().contains(x)) return entail.saturate(x);
    TokenSet out = x;
    for_each_subset(x, [&](TokenSet y) {
        if (!sys.con().contains(y)) return;
        for (Token t : x - y) {
            if (sys.con().contains(y.with(t))) return;
        }
        out |= entail.saturate(y);
    });
    return out;
}

void require_state(const DefaultStructure& ds, TokenSet x)
{
    if (!is_state(ds.system(), x)) throw ModelError("premise is not an information state");
}

// One φ step under a fixed candidate context, given {a | {a} ∪ S ∈ Con}.
TokenSet phi_step(const DefaultStructure& ds, TokenSet current, TokenSet allowed)
{
    TokenSet next = apply_entailment(ds.system(), current);
    for (const auto& r : ds.rules()) {
        if (allowed.contains(r.consequent) && r.precondition.subset_of(current)) next.insert(r.consequent);
    }
    return next;
}

PhiResult run_phi(const DefaultStructure& ds, TokenSet x, TokenSet allowed, std::vector<FiredRule>* trace = nullptr)
{
    TokenSet current = x;
    std::size_t depth = 0;
    while (true) {
        TokenSet next = phi_step(ds, current, allowed);
        if (trace) {
            for (const auto& r : ds.rules()) {
                if (allowed.contains(r.consequent) && r.precondition.subset_of(current) &&
                    !current.contains(r.consequent)) {
                    trace->push_back({depth + 1, r});
                }
            }
        }
        if (next == current) return {current, depth};
        current = next;
        ++depth;
    }
}

// Φ(x,S) = S, abandoning the iteration as soon as some φ(x,S,i) leaves S
// (the chain is increasing, so it can never come back).
bool phi_reaches(const DefaultStructure& ds, TokenSet x, TokenSet candidate, TokenSet allowed)
{
    TokenSet current = x;
    while (current.subset_of(candidate)) {
        TokenSet next = phi_step(ds, current, allowed);
        if (next == current) return current == candidate;
        current = next;
    }
    return false;
}

void sort_sets(std::vector<TokenSet>& sets)
{
    std::sort(sets.begin(), sets.end(), ShortlexLess{});
}

} // namespace

bool rule_less(const DefaultRule& a, const DefaultRule& b)
{
    if (a.precondition != b.precondition) return shortlex_less(a.precondition, b.precondition);
    return a.consequent < b.consequent;
}

DefaultStructure::DefaultStructure(InformationSystem system, std::vector<DefaultRule> rules)
    : system_{std::move(system)}
{
    const auto& u = system_.universe();
    for (const auto& r : rules) {
        if (!r.precondition.subset_of(u.all()) || r.consequent >= u.size()) {
            throw ModelError("default rule mentions a token outside the universe");
        }
        if (!system_.con().contains(r.precondition)) {
            throw ModelError("default precondition " + u.format(r.precondition) + " is inconsistent");
        }
    }
    std::sort(rules.begin(), rules.end(), rule_less);
    const std::size_t before = rules.size();
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
    merged_ = before - rules.size();
    rules_ = std::move(rules);
}

bool DefaultStructure::precondition_free() const
{
    return std::all_of(rules_.begin(), rules_.end(), [](const DefaultRule& r) { return r.precondition_free(); });
}

std::string DefaultStructure::format_rule(const DefaultRule& r) const
{
    return universe().format(r.precondition) + ":" + universe().name(r.consequent) + "/" +
           universe().name(r.consequent);
}

std::vector<TokenSet> ExtensionReport::sets() const
{
    std::vector<TokenSet> out;
    out.reserve(extensions.size());
    for (const auto& e : extensions) out.push_back(e.set);
    return out;
}

PhiResult phi_iterate(const DefaultStructure& ds, TokenSet x, TokenSet candidate)
{
    require_state(ds, x);
    if (!candidate.subset_of(ds.universe().all())) throw ModelError("candidate mentions a token outside the universe");
    return run_phi(ds, x, ds.con().compatible_with(candidate));
}

bool is_extension(const DefaultStructure& ds, TokenSet x, TokenSet y)
{
    return phi_iterate(ds, x, y).result == y;
}

std::vector<TokenSet> guided_extensions(const DefaultStructure& ds, TokenSet x)
{
    require_state(ds, x);
    const auto& con = ds.con();
    TokenSet conflicting;
    for (TokenSet f : con.forbidden()) conflicting |= f;

    std::vector<TokenSet> stack{x};
    std::unordered_set<TokenSet> visited{x};
    std::vector<TokenSet> terminals;
    auto push = [&](TokenSet s) {
        if (visited.insert(s).second) stack.push_back(s);
    };
    while (!stack.empty()) {
        TokenSet current = stack.back();
        stack.pop_back();
        TokenSet applicable;
        for (const auto& r : ds.rules()) {
            if (!current.contains(r.consequent) && r.precondition.subset_of(current)) {
                applicable.insert(r.consequent);
            }
        }
        applicable &= con.compatible_with(current);
        if (applicable.empty()) {
            terminals.push_back(current);
            continue;
        }
        // A consequent that occurs in no conflict belongs to every extension
        // reachable from here, so it is fired without branching.
        TokenSet free = applicable - conflicting;
        if (!free.empty()) {
            push(closure(ds.system(), current | free));
            continue;
        }
        for (Token a : applicable) push(closure(ds.system(), current.with(a)));
    }

    sort_sets(terminals);
    for (TokenSet y : terminals) {
        if (!is_extension(ds, x, y)) {
            throw InvariantBreach("guided search produced non-extension " + ds.universe().format(y) + " of " +
                                  ds.universe().format(x));
        }
    }
    return terminals;
}

std::vector<TokenSet> oracle_extensions(const DefaultStructure& ds, TokenSet x)
{
    require_state(ds, x);
    const std::size_t n = ds.universe().size();
    if (n > 24) throw ModelError("exhaustive extension oracle limited to 24 tokens");
    std::vector<TokenSet> out;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        const TokenSet candidate(bits);
        if (phi_reaches(ds, x, candidate, ds.con().compatible_with(candidate))) out.push_back(candidate);
    }
    sort_sets(out);
    return out;
}

ExtensionReport enumerate_extensions(const DefaultStructure& ds, TokenSet x)
{
    ExtensionReport report{x, {}};
    for (TokenSet y : guided_extensions(ds, x)) {
        Extension e{y, 0, {}};
        e.depth = run_phi(ds, x, ds.con().compatible_with(y), &e.trace).depth;
        report.extensions.push_back(std::move(e));
    }
    if (report.extensions.empty()) {
        throw InvariantBreach("state " + ds.universe().format(x) + " has no extension");
    }
    return report;
}

std::string KripkeGraph::to_dot(const TokenUniverse& u) const
{
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out + "\"";
    };
    std::string out = "digraph kripke {\n  node [shape=ellipse];\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out += "  s" + std::to_string(i) + " [label=" + quote(u.format(nodes[i]));
        if (stable[i]) out += ", peripheries=2";
        out += "];\n";
    }
    for (auto [from, to] : edges) out += "  s" + std::to_string(from) + " -> s" + std::to_string(to) + ";\n";
    return out + "}\n";
}

KripkeGraph kripke_graph(const DefaultStructure& ds)
{
    KripkeGraph g;
    g.nodes = enumerate_states(ds.system());
    std::unordered_map<TokenSet, std::size_t> index;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) index.emplace(g.nodes[i], i);
    g.stable.assign(g.nodes.size(), false);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const auto exts = guided_extensions(ds, g.nodes[i]);
        for (TokenSet y : exts) {
            auto it = index.find(y);
            if (it == index.end()) {
                throw InvariantBreach("extension " + ds.universe().format(y) + " is not an information state");
            }
            g.edges.emplace_back(i, it->second);
        }
        g.stable[i] = exts.size() == 1 && exts.front() == g.nodes[i];
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

CheckReport check_extension_laws(const DefaultStructure& ds)
{
    const auto& u = ds.universe();
    CheckReport report{"extension laws", true, 0, std::nullopt};
    for (TokenSet x : enumerate_states(ds.system())) {
        ++report.cases;
        const auto exts = guided_extensions(ds, x);
        if (exts.empty()) {
            report.fail({{"1", u.format(x)}, "state " + u.format(x) + " has no extension"});
            continue;
        }
        for (std::size_t i = 0; i < exts.size(); ++i) {
            const TokenSet y = exts[i];
            if (!x.subset_of(y)) {
                report.fail({{"2", u.format(x), u.format(y)},
                             "extension " + u.format(y) + " does not contain its state " + u.format(x)});
            }
            if (!is_state(ds.system(), y)) {
                report.fail({{"3", u.format(x), u.format(y)},
                             "extension " + u.format(y) + " of " + u.format(x) + " is not an information state"});
                continue;
            }
            const auto own = guided_extensions(ds, y);
            if (own != std::vector<TokenSet>{y}) {
                report.fail({{"3", u.format(x), u.format(y)},
                             "extension " + u.format(y) + " of " + u.format(x) + " has extensions " +
                                 format_family(u, own)});
            }
            for (std::size_t j = i + 1; j < exts.size(); ++j) {
                if (ds.con().contains(y | exts[j])) {
                    report.fail({{"4", u.format(x), u.format(y), u.format(exts[j])},
                                 "distinct extensions " + u.format(y) + " and " + u.format(exts[j]) + " of " +
                                     u.format(x) + " are jointly consistent"});
                }
            }
        }
    }
    return report;
}

CheckReport check_extension_absorption(const DefaultStructure& ds)
{
    const auto& u = ds.universe();
    CheckReport report{"extension absorption", true, 0, std::nullopt};
    for (TokenSet p : enumerate_states(ds.system())) {
        for (TokenSet r : guided_extensions(ds, p)) {
            for_each_subset(r, [&](TokenSet q) {
                ++report.cases;
                const TokenSet premise = closure(ds.system(), p | q);
                if (!is_extension(ds, premise, r)) {
                    report.fail({{u.format(p), u.format(q), u.format(r)},
                                 u.format(r) + " extends " + u.format(p) + " and contains " + u.format(q) +
                                     " but does not extend " + u.format(premise)});
                }
            });
        }
    }
    return report;
}

CheckReport check_enumeration_agreement(const DefaultStructure& ds, const std::vector<TokenSet>& premises)
{
    const auto& u = ds.universe();
    CheckReport report{"guided search matches exhaustive oracle", true, 0, std::nullopt};
    const auto states = premises.empty() ? enumerate_states(ds.system()) : premises;
    for (TokenSet x : states) {
        ++report.cases;
        const auto guided = guided_extensions(ds, x);
        const auto oracle = oracle_extensions(ds, x);
        if (guided != oracle) {
            report.fail({{u.format(x), format_family(u, guided), format_family(u, oracle)},
                         "state " + u.format(x) + ": guided " + format_family(u, guided) + ", oracle " +
                             format_family(u, oracle)});
        }
    }
    return report;
}

} // namespace dks
