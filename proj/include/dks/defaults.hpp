#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dks/core.hpp"
#include "dks/report.hpp"

namespace dks {

/// Normal default X:a/a: if X is established and a is consistent with the
/// candidate context, conclude a.
struct DefaultRule {
    TokenSet precondition;
    Token consequent = 0;

    [[nodiscard]] bool precondition_free() const { return precondition.empty(); }

    friend bool operator==(const DefaultRule&, const DefaultRule&) = default;
};

/// Rules sort by precondition (shortlex), then consequent.
bool rule_less(const DefaultRule& a, const DefaultRule& b);

class DefaultStructure {
public:
    /// Rules must have consistent preconditions over the universe. Duplicate
    /// rules are merged; merged_duplicates() reports how many were dropped.
    DefaultStructure(InformationSystem system, std::vector<DefaultRule> rules);

    [[nodiscard]] const InformationSystem& system() const { return system_; }
    [[nodiscard]] const TokenUniverse& universe() const { return system_.universe(); }
    [[nodiscard]] const ConsistencyPredicate& con() const { return system_.con(); }
    [[nodiscard]] const std::vector<DefaultRule>& rules() const { return rules_; }
    [[nodiscard]] std::size_t merged_duplicates() const { return merged_; }
    [[nodiscard]] bool precondition_free() const;

    [[nodiscard]] std::string format_rule(const DefaultRule& r) const;

private:
    InformationSystem system_;
    std::vector<DefaultRule> rules_;
    std::size_t merged_ = 0;
};

struct PhiResult {
    TokenSet result;
    /// Least i with φ(i+1) = φ(i).
    std::size_t depth = 0;
};

/// Iterates φ(x,S,0) = x, φ(x,S,i+1) = F(φ(x,S,i)) ∪ {a | X:a/a ∈ Δ,
/// X ⊆ φ(x,S,i), {a} ∪ S consistent} to its fixed point Φ(x,S).
/// Throws ModelError("premise is not an information state") if x is not a
/// state.
PhiResult phi_iterate(const DefaultStructure& ds, TokenSet x, TokenSet candidate);

/// Φ(x,y) = y.
bool is_extension(const DefaultStructure& ds, TokenSet x, TokenSet y);

struct FiredRule {
    std::size_t step = 0;
    DefaultRule rule;
};

struct Extension {
    TokenSet set;
    std::size_t depth = 0;
    /// Rules whose consequent first enters the construction at `step`.
    std::vector<FiredRule> trace;
};

struct ExtensionReport {
    TokenSet state;
    std::vector<Extension> extensions;

    [[nodiscard]] std::vector<TokenSet> sets() const;
};

/// Extensions of x by guided search: forward chaining from x that fires at
/// once every applicable consequent that occurs in no conflict, and branches
/// on each remaining applicable consequent. Terminal sets are deduplicated
/// and confirmed with is_extension. Shortlex ordered.
std::vector<TokenSet> guided_extensions(const DefaultStructure& ds, TokenSet x);

/// Extensions of x by testing Φ(x,S) = S for every subset S of the universe.
std::vector<TokenSet> oracle_extensions(const DefaultStructure& ds, TokenSet x);

/// Guided-search extensions with depth and fired-rule trace.
ExtensionReport enumerate_extensions(const DefaultStructure& ds, TokenSet x);

struct KripkeGraph {
    std::vector<TokenSet> nodes;
    /// (from, to) indices into `nodes`, sorted.
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    /// Nodes whose only outgoing edge is a self-loop.
    std::vector<bool> stable;

    [[nodiscard]] std::string to_dot(const TokenUniverse& u) const;
};

/// Nodes are the information states; x → y iff y is an extension of x.
KripkeGraph kripke_graph(const DefaultStructure& ds);

/// Over every state x: x has an extension; extensions contain x; each
/// extension is its own unique extension; distinct extensions of x are
/// jointly inconsistent.
CheckReport check_extension_laws(const DefaultStructure& ds);

/// If P ε R and Q ⊆ R then (P ∪ Q) ε R, for every state P, extension R and
/// Q ⊆ R. With non-trivial entailment the premise is F(P ∪ Q).
CheckReport check_extension_absorption(const DefaultStructure& ds);

/// Guided search and the exhaustive oracle agree on every state (or on the
/// given premises when non-empty).
CheckReport check_enumeration_agreement(const DefaultStructure& ds, const std::vector<TokenSet>& premises = {});

} // namespace dks
