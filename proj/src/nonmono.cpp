#include "dks/nonmono.hpp"

#include <algorithm>

#include "dks/errors.hpp"

namespace dks {

namespace {

// Keeps the smallest witness seen so far: fewest tokens over all
// components, then component-wise shortlex.
class MinimalWitness {
public:
    void offer(std::vector<TokenSet> key, Witness w)
    {
        std::size_t total = 0;
        for (TokenSet s : key) total += s.size();
        if (!best_ || total < total_ || (total == total_ && less(key, key_))) {
            best_ = std::move(w);
            key_ = std::move(key);
            total_ = total;
        }
    }

    void report_into(CheckReport& r) const
    {
        if (best_) r.fail(*best_);
    }

    [[nodiscard]] const std::optional<Witness>& best() const { return best_; }

private:
    static bool less(const std::vector<TokenSet>& a, const std::vector<TokenSet>& b)
    {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), ShortlexLess{});
    }

    std::optional<Witness> best_;
    std::vector<TokenSet> key_;
    std::size_t total_ = 0;
};

std::string sname(const TokenUniverse& u, Token t)
{
    return u.name(t);
}

CheckReport check_downward_closure(const NmRelation& nm)
{
    const auto& u = nm.universe();
    CheckReport r{"1 downward closure", true, 0, std::nullopt};
    MinimalWitness best;
    for (TokenSet y : nm.premises()) {
        for (Token t : y) {
            ++r.cases;
            const TokenSet x = y.without(t);
            if (!nm.con().contains(x)) {
                best.offer({x, y}, {{u.format(x), u.format(y)},
                                    u.format(x) + " is inconsistent but its superset " + u.format(y) + " is not"});
            }
        }
    }
    best.report_into(r);
    return r;
}

CheckReport check_singletons(const NmRelation& nm)
{
    const auto& u = nm.universe();
    CheckReport r{"2 singletons consistent", true, 0, std::nullopt};
    for (Token a = 0; a < u.size(); ++a) {
        ++r.cases;
        if (!nm.con().contains(TokenSet::single(a))) {
            r.fail({{sname(u, a)}, "{" + sname(u, a) + "} is inconsistent"});
        }
    }
    return r;
}

CheckReport check_consistent_conclusions(const NmRelation& nm)
{
    const auto& u = nm.universe();
    CheckReport r{"3 consequences consistent with premise", true, 0, std::nullopt};
    MinimalWitness best;
    for (TokenSet x : nm.premises()) {
        ++r.cases;
        const TokenSet reach = x | nm.consequences(x);
        if (nm.con().contains(reach)) continue;
        for (TokenSet f : nm.con().forbidden()) {
            if (!f.subset_of(reach) || !f.intersects(x)) continue;
            const TokenSet t = f - x;
            best.offer({x, t}, {{u.format(x), u.format(t)},
                                u.format(x) + " |~ " + u.format(t) + " but " + u.format(x | t) + " is inconsistent"});
        }
    }
    best.report_into(r);
    return r;
}

CheckReport check_reflexivity(const NmRelation& nm)
{
    const auto& u = nm.universe();
    CheckReport r{"4 reflexivity", true, 0, std::nullopt};
    MinimalWitness best;
    for (TokenSet x : nm.premises()) {
        ++r.cases;
        const TokenSet missing = x - nm.consequences(x);
        if (!missing.empty()) {
            const Token b = missing.front();
            best.offer({x, TokenSet::single(b)},
                       {{u.format(x), sname(u, b)}, u.format(x) + " does not entail its member " + sname(u, b)});
        }
    }
    best.report_into(r);
    return r;
}

CheckReport check_cautious_cut(const NmRelation& nm)
{
    const auto& u = nm.universe();
    CheckReport r{"5 cautious cut", true, 0, std::nullopt};
    MinimalWitness best;
    for (TokenSet x : nm.premises()) {
        const TokenSet tx = nm.consequences(x);
        for_each_subset(tx - x, [&](TokenSet t) {
            if (t.empty() || !nm.con().contains(x | t)) return;
            ++r.cases;
            const TokenSet gained = nm.consequences(x | t) - tx;
            if (gained.empty()) return;
            const Token b = gained.front();
            best.offer({x, t, TokenSet::single(b)},
                       {{u.format(x), u.format(t), sname(u, b)},
                        u.format(x) + " |~ " + u.format(t) + " and " + u.format(x | t) + " |~ " + sname(u, b) +
                            " but " + u.format(x) + " does not entail " + sname(u, b)});
        });
    }
    best.report_into(r);
    return r;
}

CheckReport check_union(const NmRelation& nm)
{
    const auto& u = nm.universe();
    CheckReport r{"6 union of conclusions", true, 0, std::nullopt};
    MinimalWitness best;
    for (TokenSet x : nm.premises()) {
        ++r.cases;
        const TokenSet tx = nm.consequences(x);
        // X |~ Y ∪ Z needs Y ∪ Z consistent; a failure splits some forbidden
        // subset of tilde(X) into two consistent halves.
        for (TokenSet f : nm.con().forbidden()) {
            if (!f.subset_of(tx)) continue;
            const TokenSet y = TokenSet::single(f.front());
            const TokenSet z = f - y;
            best.offer({x, y, z}, {{u.format(x), u.format(y), u.format(z)},
                                   u.format(x) + " |~ " + u.format(y) + " and " + u.format(x) + " |~ " + u.format(z) +
                                       " but " + u.format(y | z) + " is inconsistent"});
        }
    }
    best.report_into(r);
    return r;
}

CheckReport check_cautious_monotony(const NmRelation& nm)
{
    const auto& u = nm.universe();
    CheckReport r{"cautious monotony", true, 0, std::nullopt};
    MinimalWitness best;
    for (TokenSet x : nm.premises()) {
        const TokenSet tx = nm.consequences(x);
        for (Token b : tx - x) {
            if (!nm.con().contains(x.with(b))) continue;
            ++r.cases;
            const TokenSet lost = tx - nm.consequences(x.with(b));
            for (Token a : lost) {
                best.offer({x, TokenSet::single(a), TokenSet::single(b)},
                           {{u.format(x), sname(u, a), sname(u, b)},
                            u.format(x) + " |~ " + sname(u, a) + " and " + u.format(x) + " |~ " + sname(u, b) +
                                " but " + u.format(x.with(b)) + " does not entail " + sname(u, a)});
            }
        }
    }
    best.report_into(r);
    return r;
}

} // namespace

const char* to_string(Provenance p)
{
    switch (p) {
    case Provenance::derived_from_structure: return "derived-from-structure";
    case Provenance::user_supplied: return "user-supplied";
    case Provenance::closure_generated: return "closure-generated";
    }
    return "unknown";
}

NmRelation::NmRelation(ConsistencyPredicate con, const std::vector<std::pair<TokenSet, TokenSet>>& consequences,
                       Provenance provenance)
    : con_{std::move(con)}, premises_{con_.enumerate()}, provenance_{provenance}
{
    const TokenSet all = con_.universe().all();
    for (auto [x, c] : consequences) {
        if (!con_.contains(x) || !x.subset_of(all)) {
            throw ModelError("relation premise " + con_.universe().format(x) + " is not a consistent set");
        }
        if (!c.subset_of(all)) throw ModelError("relation conclusion mentions a token outside the universe");
        if (!table_.emplace(x, c).second) {
            throw ModelError("relation lists premise " + con_.universe().format(x) + " twice");
        }
    }
    if (table_.size() != premises_.size()) throw ModelError("relation must list every consistent premise");
}

TokenSet NmRelation::consequences(TokenSet x) const
{
    auto it = table_.find(x);
    if (it == table_.end()) throw ModelError("premise " + universe().format(x) + " is inconsistent");
    return it->second;
}

bool NmRelation::entails(TokenSet x, TokenSet y) const
{
    return con_.contains(y) && y.subset_of(consequences(x));
}

std::vector<Instance> NmRelation::instances() const
{
    std::vector<Instance> out;
    for (TokenSet x : premises_) {
        for (Token b : consequences(x)) out.push_back({x, b});
    }
    return out;
}

bool operator==(const NmRelation& a, const NmRelation& b)
{
    return a.con_ == b.con_ && a.table_ == b.table_;
}

TokenSet skeptical_consequences(const DefaultStructure& ds, TokenSet x)
{
    TokenSet common = ds.universe().all();
    for (TokenSet y : guided_extensions(ds, x)) common &= y;
    return common;
}

NmRelation derive_nm(const DefaultStructure& ds)
{
    if (!ds.system().entail().trivial()) throw ModelError("skeptical relation requires trivial entailment");
    std::vector<std::pair<TokenSet, TokenSet>> rows;
    for (TokenSet x : ds.con().enumerate()) rows.emplace_back(x, skeptical_consequences(ds, x));
    return NmRelation{ds.con(), rows, Provenance::derived_from_structure};
}

TokenSet tilde(const NmRelation& nm, TokenSet x)
{
    return nm.consequences(x);
}

bool AxiomVerdict::abstract() const
{
    return std::all_of(axioms.begin(), axioms.begin() + 6, [](const CheckReport& r) { return r.passed; });
}

bool AxiomVerdict::cumulative() const
{
    return abstract() && cautious_monotony().passed;
}

AxiomVerdict check_axioms(const NmRelation& nm)
{
    AxiomVerdict v;
    v.axioms.push_back(check_downward_closure(nm));
    v.axioms.push_back(check_singletons(nm));
    v.axioms.push_back(check_consistent_conclusions(nm));
    v.axioms.push_back(check_reflexivity(nm));
    v.axioms.push_back(check_cautious_cut(nm));
    v.axioms.push_back(check_union(nm));
    v.axioms.push_back(check_cautious_monotony(nm));
    return v;
}

NmRelation generate_closure(const ConsistencyPredicate& con, std::span<const Instance> base)
{
    const auto& u = con.universe();
    std::unordered_map<TokenSet, TokenSet> table;
    const auto premises = con.enumerate();
    for (TokenSet x : premises) table.emplace(x, x);
    for (const auto& inst : base) {
        if (!inst.premise.subset_of(u.all()) || inst.conclusion >= u.size()) {
            throw ModelError("base instance mentions a token outside the universe");
        }
        auto it = table.find(inst.premise);
        if (it == table.end()) throw ModelError("base instance premise " + u.format(inst.premise) + " is inconsistent");
        it->second.insert(inst.conclusion);
    }

    // Round-robin cautious cut until nothing changes.
    bool changed = true;
    while (changed) {
        changed = false;
        for (TokenSet x : premises) {
            TokenSet& tx = table.at(x);
            const TokenSet before = tx;
            for_each_subset(before - x, [&](TokenSet t) {
                if (t.empty()) return;
                auto it = table.find(x | t);
                if (it != table.end()) tx |= it->second;
            });
            if (tx != before) changed = true;
        }
    }

    for (TokenSet x : premises) {
        const TokenSet reach = x | table.at(x);
        if (!con.contains(reach)) {
            throw ModelError("base instances inconsistent with Con: " + u.format(x) + " |~ " +
                             u.format(table.at(x) - x) + " but " + u.format(reach) + " is inconsistent");
        }
    }

    std::vector<std::pair<TokenSet, TokenSet>> rows(table.begin(), table.end());
    return NmRelation{con, rows, Provenance::closure_generated};
}

CheckReport check_cautious_cut_theorem(const DefaultStructure& ds)
{
    CheckReport r = check_cautious_cut(derive_nm(ds));
    r.name = "skeptical consequence satisfies cautious cut";
    return r;
}

CheckReport check_tilde_intersection_law(const NmRelation& nm)
{
    const auto& u = nm.universe();
    CheckReport r{"tilde intersection law", true, 0, std::nullopt};
    for (TokenSet x : nm.premises()) {
        ++r.cases;
        TokenSet common = u.all();
        for_each_subset(x, [&](TokenSet y) {
            const TokenSet ty = nm.consequences(y);
            if (x.subset_of(ty)) common &= ty;
        });
        const TokenSet tx = nm.consequences(x);
        if (common != tx) {
            r.fail({{u.format(x), u.format(common), u.format(tx)},
                    "intersection over Y ⊆ " + u.format(x) + " ⊆ tilde(Y) is " + u.format(common) + " but tilde(" +
                        u.format(x) + ") is " + u.format(tx)});
        }
    }
    return r;
}

CheckReport check_cumulative_tilde_law(const NmRelation& nm)
{
    if (!check_cautious_monotony(nm).passed) throw ModelError("requires cumulative system");
    const auto& u = nm.universe();
    CheckReport r{"cumulative tilde law", true, 0, std::nullopt};
    for (TokenSet q : nm.premises()) {
        const TokenSet tq = nm.consequences(q);
        for_each_subset(tq - q, [&](TokenSet extra) {
            const TokenSet p = q | extra;
            if (!nm.con().contains(p)) return;
            ++r.cases;
            const TokenSet tp = nm.consequences(p);
            if (tp != tq) {
                r.fail({{u.format(q), u.format(p)}, "tilde(" + u.format(p) + ") = " + u.format(tp) + " but tilde(" +
                                                        u.format(q) + ") = " + u.format(tq)});
            }
        });
    }
    return r;
}

std::optional<Witness> find_cut_violation(const NmRelation& nm)
{
    const auto& u = nm.universe();
    MinimalWitness best;
    for (TokenSet x : nm.premises()) {
        const TokenSet tx = nm.consequences(x);
        for_each_subset(tx, [&](TokenSet t) {
            if (!nm.con().contains(t)) return;
            for (TokenSet y : nm.premises()) {
                if (!nm.con().contains(t | y) || !nm.con().contains(x | y)) continue;
                const TokenSet lost = nm.consequences(t | y) - nm.consequences(x | y);
                if (lost.empty()) continue;
                const Token b = lost.front();
                best.offer({x, t, y, TokenSet::single(b)},
                           {{u.format(x), u.format(t), u.format(y), sname(u, b)},
                            u.format(x) + " |~ " + u.format(t) + " and " + u.format(t | y) + " |~ " + sname(u, b) +
                                " but " + u.format(x | y) + " does not entail " + sname(u, b)});
            }
        });
    }
    return best.best();
}

} // namespace dks
