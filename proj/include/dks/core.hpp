#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dks/report.hpp"
#include "dks/token_set.hpp"

namespace dks {

/// True when `name` can be used as a token: non-empty, no whitespace, no
/// '#', and any of `{ } , : |` only inside balanced square brackets (so
/// that label tokens such as "[{a,b}]" survive the text format).
bool is_valid_token_name(std::string_view name);

/// Finite set of named tokens. Names are kept in lexicographic order and a
/// token's index is its position in that order.
class TokenUniverse {
public:
    TokenUniverse() = default;
    explicit TokenUniverse(std::vector<std::string> names);

    [[nodiscard]] std::size_t size() const { return names_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
    [[nodiscard]] const std::string& name(Token t) const { return names_.at(t); }
    [[nodiscard]] TokenSet all() const { return TokenSet::first(names_.size()); }

    [[nodiscard]] std::optional<Token> find(std::string_view name) const;
    /// Throws ModelError for unknown names.
    [[nodiscard]] Token index(std::string_view name) const;
    [[nodiscard]] TokenSet set_of(const std::vector<std::string>& names) const;

    /// "{a,b}" with members in token order; "{}" for the empty set.
    [[nodiscard]] std::string format(TokenSet s) const;

    friend bool operator==(const TokenUniverse&, const TokenUniverse&) = default;

private:
    std::vector<std::string> names_;
};

using UniversePtr = std::shared_ptr<const TokenUniverse>;

/// "[{a}, {b,c}]" in the given order.
std::string format_family(const TokenUniverse& u, const std::vector<TokenSet>& sets);

UniversePtr make_universe(std::vector<std::string> names);

/// Downward-closed family of token sets, encoded by its minimal forbidden
/// sets. X is consistent iff no forbidden set is a subset of X.
class ConsistencyPredicate {
public:
    /// Forbidden sets are normalised to an antichain. Throws ModelError on a
    /// forbidden set with fewer than two members or foreign tokens.
    ConsistencyPredicate(UniversePtr universe, std::vector<TokenSet> forbidden);

    static ConsistencyPredicate unconstrained(UniversePtr universe);

    [[nodiscard]] bool contains(TokenSet x) const;
    [[nodiscard]] const std::vector<TokenSet>& forbidden() const { return forbidden_; }
    [[nodiscard]] const TokenUniverse& universe() const { return *universe_; }
    [[nodiscard]] const UniversePtr& universe_ptr() const { return universe_; }

    /// {a | s ∪ {a} consistent}; empty when s itself is inconsistent.
    [[nodiscard]] TokenSet compatible_with(TokenSet s) const;

    /// Every consistent set, shortlex ordered.
    [[nodiscard]] std::vector<TokenSet> enumerate() const;

    friend bool operator==(const ConsistencyPredicate& a, const ConsistencyPredicate& b)
    {
        return *a.universe_ == *b.universe_ && a.forbidden_ == b.forbidden_;
    }

private:
    UniversePtr universe_;
    std::vector<TokenSet> forbidden_;
};

struct Sequent {
    TokenSet premise;
    Token conclusion = 0;

    friend bool operator==(const Sequent&, const Sequent&) = default;
};

/// Entailment generated by a list of base sequents: the least relation that
/// contains them and is reflexive and transitive. Computed on demand by
/// forward chaining.
class EntailmentRelation {
public:
    EntailmentRelation() = default;
    explicit EntailmentRelation(std::vector<Sequent> base);

    /// Deduplicated, sorted base sequents as supplied (reflexive ones kept).
    [[nodiscard]] const std::vector<Sequent>& base() const { return base_; }

    /// True when X ⊢ a holds only for a ∈ X.
    [[nodiscard]] bool trivial() const { return chaining_.empty(); }

    /// Forward-chaining closure of x under the base sequents.
    [[nodiscard]] TokenSet saturate(TokenSet x) const;

private:
    std::vector<Sequent> base_;
    std::vector<Sequent> chaining_;
};

class InformationSystem {
public:
    /// Checks that sequents are over the universe and have consistent
    /// premises. Does not check consistency compatibility; see
    /// validate_system and load_system.
    explicit InformationSystem(ConsistencyPredicate con, EntailmentRelation entail = {});

    [[nodiscard]] const TokenUniverse& universe() const { return con_.universe(); }
    [[nodiscard]] const UniversePtr& universe_ptr() const { return con_.universe_ptr(); }
    [[nodiscard]] const ConsistencyPredicate& con() const { return con_; }
    [[nodiscard]] const EntailmentRelation& entail() const { return entail_; }

private:
    ConsistencyPredicate con_;
    EntailmentRelation entail_;
};

struct AxiomViolation {
    int property = 0;
    Witness witness;
};

struct ValidationReport {
    std::vector<AxiomViolation> violations;
    std::size_t sets_checked = 0;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Checks the five information-system laws over every consistent set.
/// Reports at most one witness per violated law, minimal in shortlex order.
ValidationReport validate_system(const InformationSystem& sys);

/// Builds a system and rejects it with LoadError if validation fails.
InformationSystem load_system(ConsistencyPredicate con, EntailmentRelation entail = {});

/// F(X): everything X entails. Throws ModelError("inconsistent premise set")
/// when X is inconsistent.
TokenSet closure(const InformationSystem& sys, TokenSet x);

/// X is consistent and F(X) = X.
bool is_state(const InformationSystem& sys, TokenSet x);

/// All fixed points of F on consistent sets, shortlex ordered.
std::vector<TokenSet> enumerate_states(const InformationSystem& sys);

} // namespace dks
