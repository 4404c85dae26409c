#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dks/defaults.hpp"
#include "dks/nonmono.hpp"
#include "dks/report.hpp"

namespace dks {

enum class RepresentationMode { plain, cumulative };

const char* to_string(RepresentationMode m);

/// Fresh token standing for a consistent set of the source universe.
struct LabelToken {
    Token token = 0;   // index in the constructed universe
    TokenSet source;   // set over the source universe
    std::string name;  // "[{a,b}]"
};

/// Canonical label name for a source set: "[{a,b}]", "[{}]".
std::string label_name(const TokenUniverse& source, TokenSet x);

struct RepresentationStats {
    std::size_t tokens = 0;
    std::size_t rules = 0;
    /// Largest φ stabilisation depth over all extensions of source premises.
    std::size_t max_depth = 0;
};

/// A default structure over B = A ∪ {[X] | X ∈ Con} whose skeptical
/// consequence restricted to A reproduces a given relation.
class RepresentationResult {
public:
    RepresentationResult(DefaultStructure structure, RepresentationMode mode, UniversePtr source,
                         std::vector<Token> embedding, std::vector<LabelToken> labels);

    [[nodiscard]] const DefaultStructure& structure() const { return structure_; }
    [[nodiscard]] RepresentationMode mode() const { return mode_; }
    [[nodiscard]] const TokenUniverse& source_universe() const { return *source_; }
    /// Labels ordered by source set (shortlex).
    [[nodiscard]] const std::vector<LabelToken>& labels() const { return labels_; }
    [[nodiscard]] const RepresentationStats& stats() const { return stats_; }

    /// Image of a source set in B.
    [[nodiscard]] TokenSet lift(TokenSet x) const;
    /// Source tokens of a set over B; labels are dropped.
    [[nodiscard]] TokenSet restrict(TokenSet w) const;
    /// The label tokens of B.
    [[nodiscard]] TokenSet label_tokens() const { return label_mask_; }
    /// Token [X]; throws ModelError if X has no label.
    [[nodiscard]] Token label_of(TokenSet x) const;
    [[nodiscard]] std::optional<TokenSet> source_of(Token t) const;

    void set_max_depth(std::size_t d) { stats_.max_depth = d; }

private:
    DefaultStructure structure_;
    RepresentationMode mode_;
    UniversePtr source_;
    std::vector<Token> embedding_;
    std::vector<LabelToken> labels_;
    TokenSet label_mask_;
    RepresentationStats stats_;
};

/// Rules X:[X]/[X] for X ∈ Con and {[X]}:a/a for a ∈ tilde(X) \ X. In
/// plain mode label tokens are pairwise inconsistent; in cumulative mode
/// [X] and [Y] conflict only when tilde(X) ≠ tilde(Y). In both, [X]
/// conflicts with every source token outside tilde(X) and the source
/// conflicts are inherited.
///
/// build_plain requires axioms 1-6; build_cumulative additionally cautious
/// monotony. Failures throw ModelError naming the failed axiom and witness.
RepresentationResult build_plain(const NmRelation& nm);
RepresentationResult build_cumulative(const NmRelation& nm);

/// Evaluates the three defining conditions of the constructed consistency
/// predicate directly (independent of the compiled forbidden sets).
bool label_consistency_direct(const NmRelation& nm, const RepresentationResult& rep, TokenSet w);

/// Constructed consistency agrees with the source on source sets, and
/// X |~ Y ⇔ X |~_B Y for all consistent X, Y over the source universe.
CheckReport verify_conservativity(const NmRelation& nm, const RepresentationResult& rep);

/// Plain mode: the extensions of every source premise P are exactly
/// tilde(Q) ∪ {[Q]} for Q ⊆ P ⊆ tilde(Q), each reached within depth 2.
CheckReport verify_extension_shape(const NmRelation& nm, const RepresentationResult& rep);

/// Cumulative mode: every source premise P has the single extension
/// tilde(P) ∪ {[Q] | Q ⊆ tilde(P), tilde(Q) = tilde(P)} within depth 3;
/// every state of B has exactly one extension; the derived relation over B
/// is cumulative and conservative.
CheckReport verify_unique_extension(const NmRelation& nm, const RepresentationResult& rep);

} // namespace dks
