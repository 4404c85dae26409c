#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "dks/core.hpp"
#include "dks/defaults.hpp"
#include "dks/report.hpp"

namespace dks {

enum class Provenance { derived_from_structure, user_supplied, closure_generated };

const char* to_string(Provenance p);

/// A single pointwise instance X |~ {a}.
struct Instance {
    TokenSet premise;
    Token conclusion = 0;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Nonmonotonic consequence over the consistent sets of a universe, stored
/// pointwise: for every consistent X the set of tokens b with X |~ {b}.
/// X |~ Y holds iff Y is consistent and every member of Y is such a b, so
/// X |~ ∅ always holds.
class NmRelation {
public:
    /// `consequences` must hold exactly one entry per consistent set.
    NmRelation(ConsistencyPredicate con, const std::vector<std::pair<TokenSet, TokenSet>>& consequences,
               Provenance provenance);

    [[nodiscard]] const ConsistencyPredicate& con() const { return con_; }
    [[nodiscard]] const TokenUniverse& universe() const { return con_.universe(); }
    [[nodiscard]] Provenance provenance() const { return provenance_; }

    /// All consistent sets, shortlex ordered.
    [[nodiscard]] const std::vector<TokenSet>& premises() const { return premises_; }

    /// {b | X |~ {b}}. Throws ModelError if X is inconsistent.
    [[nodiscard]] TokenSet consequences(TokenSet x) const;

    [[nodiscard]] bool entails(TokenSet x, TokenSet y) const;
    [[nodiscard]] bool entails(TokenSet x, Token b) const { return consequences(x).contains(b); }

    /// Every instance X |~ {b}, ordered by premise then token.
    [[nodiscard]] std::vector<Instance> instances() const;

    /// Same universe, consistency and instances; provenance is ignored.
    friend bool operator==(const NmRelation& a, const NmRelation& b);

private:
    ConsistencyPredicate con_;
    std::vector<TokenSet> premises_;
    std::unordered_map<TokenSet, TokenSet> table_;
    Provenance provenance_;
};

/// Skeptical consequence of a default structure with trivial entailment:
/// X |~ a iff a lies in every extension of X. Materialised for every
/// consistent X. Throws ModelError("skeptical relation requires trivial
/// entailment") otherwise.
NmRelation derive_nm(const DefaultStructure& ds);

/// Intersection of the extensions of a single consistent premise.
TokenSet skeptical_consequences(const DefaultStructure& ds, TokenSet x);

/// The set of all nonmonotonic consequences of X.
TokenSet tilde(const NmRelation& nm, TokenSet x);

/// Per-axiom results: six abstract-system axioms then cautious monotony.
struct AxiomVerdict {
    std::vector<CheckReport> axioms;

    /// Axioms 1-6 pass.
    [[nodiscard]] bool abstract() const;
    /// Additionally cautious monotony passes.
    [[nodiscard]] bool cumulative() const;
    [[nodiscard]] const CheckReport& cautious_monotony() const { return axioms.back(); }
};

/// Exhaustive check over every consistent set. Witnesses are minimal by
/// total token count, ties broken lexicographically:
///   1 (X, Y)     X ⊆ Y, Y consistent, X not
///   2 (a)        {a} inconsistent
///   3 (X, T)     X |~ T but X ∪ T inconsistent
///   4 (X, b)     b ∈ X but not X |~ b
///   5 (X, T, b)  X |~ T and X ∪ T |~ b but not X |~ b
///   6 (X, Y, Z)  X |~ Y and X |~ Z but Y ∪ Z is inconsistent
///   cautious monotony (X, a, b): X |~ a and X |~ b but not X ∪ {b} |~ a
AxiomVerdict check_axioms(const NmRelation& nm);

/// Least relation containing `base` closed under reflexivity, cautious cut
/// and union, by fixed-point saturation. Throws ModelError("base instances
/// inconsistent with Con: ...") when the result violates axiom 3.
NmRelation generate_closure(const ConsistencyPredicate& con, std::span<const Instance> base);

/// Cautious cut holds for derive_nm(ds).
CheckReport check_cautious_cut_theorem(const DefaultStructure& ds);

/// For every consistent X: ⋂{tilde(Y) | Y ⊆ X ⊆ tilde(Y)} = tilde(X).
CheckReport check_tilde_intersection_law(const NmRelation& nm);

/// For Q ⊆ P ⊆ tilde(Q): tilde(P) = tilde(Q). Throws ModelError("requires
/// cumulative system") unless cautious monotony holds.
CheckReport check_cumulative_tilde_law(const NmRelation& nm);

/// Searches for a violation of the unrestricted cut rule
/// X |~ T & T ∪ Y |~ Z ⇒ X ∪ Y |~ Z. Returns the minimal witness
/// (X, T, Y, b) if any.
std::optional<Witness> find_cut_violation(const NmRelation& nm);

} // namespace dks
