#include "dks/represent.hpp"

#include <algorithm>

#include "dks/errors.hpp"

namespace dks {

namespace {

void require_axioms(const NmRelation& nm, bool cumulative)
{
    const auto verdict = check_axioms(nm);
    for (std::size_t i = 0; i < 6; ++i) {
        const auto& a = verdict.axioms[i];
        if (!a.passed) {
            throw ModelError("relation fails axiom " + a.name + ": witness " + a.witness->tuple() + ": " +
                             a.witness->explanation);
        }
    }
    if (cumulative && !verdict.cautious_monotony().passed) {
        const auto& w = *verdict.cautious_monotony().witness;
        throw ModelError("relation is not cumulative: cautious monotony witness " + w.tuple() + ": " + w.explanation);
    }
}

// Agreement between the compiled forbidden sets and the direct definition.
// For small B every subset is compared; otherwise the consistent sets and
// their one-token extensions, which pins down a downward-closed family.
void self_test(const NmRelation& nm, const RepresentationResult& rep)
{
    const auto& con = rep.structure().con();
    const auto& u = rep.structure().universe();
    auto mismatch = [&](TokenSet w) {
        throw InvariantBreach("compiled label consistency disagrees with its definition on " + u.format(w));
    };
    if (u.size() <= 16) {
        const std::uint64_t count = std::uint64_t{1} << u.size();
        for (std::uint64_t bits = 0; bits < count; ++bits) {
            const TokenSet w(bits);
            if (con.contains(w) != label_consistency_direct(nm, rep, w)) mismatch(w);
        }
        return;
    }
    for (TokenSet w : con.enumerate()) {
        if (!label_consistency_direct(nm, rep, w)) mismatch(w);
        for (Token t : u.all() - w) {
            const TokenSet grown = w.with(t);
            if (!con.contains(grown) && label_consistency_direct(nm, rep, grown)) mismatch(grown);
        }
    }
}

RepresentationResult build(const NmRelation& nm, RepresentationMode mode)
{
    require_axioms(nm, mode == RepresentationMode::cumulative);
    const auto& a = nm.universe();
    const auto& premises = nm.premises();

    std::vector<std::string> names = a.names();
    for (TokenSet x : premises) names.push_back(label_name(a, x));
    if (names.size() > TokenSet::capacity) {
        throw ModelError("representation needs " + std::to_string(names.size()) + " tokens; at most " +
                         std::to_string(TokenSet::capacity) + " are supported");
    }
    UniversePtr b;
    try {
        b = make_universe(names);
    } catch (const ModelError&) {
        throw ModelError("a source token name collides with a label token name");
    }

    std::vector<Token> embedding;
    for (const auto& n : a.names()) embedding.push_back(b->index(n));
    auto lift = [&](TokenSet x) {
        TokenSet out;
        for (Token t : x) out.insert(embedding[t]);
        return out;
    };

    std::vector<LabelToken> labels;
    for (TokenSet x : premises) {
        const std::string n = label_name(a, x);
        labels.push_back({b->index(n), x, n});
    }

    std::vector<TokenSet> forbidden;
    for (TokenSet f : nm.con().forbidden()) forbidden.push_back(lift(f));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const TokenSet tx = nm.consequences(labels[i].source);
        for (Token t : a.all() - tx) forbidden.push_back(TokenSet{}.insert(labels[i].token).insert(embedding[t]));
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            const bool clash =
                mode == RepresentationMode::plain || tx != nm.consequences(labels[j].source);
            if (clash) forbidden.push_back(TokenSet{}.insert(labels[i].token).insert(labels[j].token));
        }
    }

    std::vector<DefaultRule> rules;
    for (const auto& l : labels) {
        rules.push_back({lift(l.source), l.token});
        for (Token t : nm.consequences(l.source) - l.source) {
            rules.push_back({TokenSet::single(l.token), embedding[t]});
        }
    }

    InformationSystem sys{ConsistencyPredicate{b, std::move(forbidden)}};
    const auto validation = validate_system(sys);
    if (!validation.ok()) {
        throw InvariantBreach("constructed consistency predicate is unlawful: " +
                              validation.violations.front().witness.explanation);
    }
    RepresentationResult rep{DefaultStructure{std::move(sys), std::move(rules)}, mode, nm.con().universe_ptr(),
                             std::move(embedding), std::move(labels)};
    self_test(nm, rep);

    std::size_t max_depth = 0;
    for (TokenSet p : premises) {
        for (const auto& e : enumerate_extensions(rep.structure(), rep.lift(p)).extensions) {
            max_depth = std::max(max_depth, e.depth);
        }
    }
    rep.set_max_depth(max_depth);
    return rep;
}

std::string format_mixed(const RepresentationResult& rep, TokenSet w)
{
    return rep.structure().universe().format(w);
}

} // namespace

const char* to_string(RepresentationMode m)
{
    return m == RepresentationMode::plain ? "plain" : "cumulative";
}

std::string label_name(const TokenUniverse& source, TokenSet x)
{
    return "[" + source.format(x) + "]";
}

RepresentationResult::RepresentationResult(DefaultStructure structure, RepresentationMode mode, UniversePtr source,
                                           std::vector<Token> embedding, std::vector<LabelToken> labels)
    : structure_{std::move(structure)},
      mode_{mode},
      source_{std::move(source)},
      embedding_{std::move(embedding)},
      labels_{std::move(labels)}
{
    for (const auto& l : labels_) label_mask_.insert(l.token);
    stats_.tokens = structure_.universe().size();
    stats_.rules = structure_.rules().size();
}

TokenSet RepresentationResult::lift(TokenSet x) const
{
    TokenSet out;
    for (Token t : x) out.insert(embedding_.at(t));
    return out;
}

TokenSet RepresentationResult::restrict(TokenSet w) const
{
    TokenSet out;
    for (Token t = 0; t < embedding_.size(); ++t) {
        if (w.contains(embedding_[t])) out.insert(t);
    }
    return out;
}

Token RepresentationResult::label_of(TokenSet x) const
{
    auto it = std::find_if(labels_.begin(), labels_.end(), [x](const LabelToken& l) { return l.source == x; });
    if (it == labels_.end()) throw ModelError("no label token for " + source_->format(x));
    return it->token;
}

std::optional<TokenSet> RepresentationResult::source_of(Token t) const
{
    auto it = std::find_if(labels_.begin(), labels_.end(), [t](const LabelToken& l) { return l.token == t; });
    if (it == labels_.end()) return std::nullopt;
    return it->source;
}

RepresentationResult build_plain(const NmRelation& nm)
{
    return build(nm, RepresentationMode::plain);
}

RepresentationResult build_cumulative(const NmRelation& nm)
{
    return build(nm, RepresentationMode::cumulative);
}

bool label_consistency_direct(const NmRelation& nm, const RepresentationResult& rep, TokenSet w)
{
    if (!nm.con().contains(rep.restrict(w))) return false;
    const TokenSet present = w & rep.label_tokens();
    if (rep.mode() == RepresentationMode::plain) {
        if (present.size() > 1) return false;
        for (Token l : present) {
            const TokenSet rest = w.without(l);
            if (rest.intersects(rep.label_tokens())) return false;
            if (!nm.entails(*rep.source_of(l), rep.restrict(rest))) return false;
        }
        return true;
    }
    std::optional<TokenSet> shared;
    for (Token l : present) {
        const TokenSet x = *rep.source_of(l);
        const TokenSet tx = nm.consequences(x);
        if (shared && *shared != tx) return false;
        shared = tx;
        if (!nm.entails(x, rep.restrict(w))) return false;
    }
    return true;
}

CheckReport verify_conservativity(const NmRelation& nm, const RepresentationResult& rep)
{
    const auto& a = nm.universe();
    CheckReport r{"conservativity", true, 0, std::nullopt};
    const std::uint64_t count = std::uint64_t{1} << a.size();
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        ++r.cases;
        const TokenSet w(bits);
        const bool source = nm.con().contains(w);
        if (source != rep.structure().con().contains(rep.lift(w))) {
            r.fail({{a.format(w)}, a.format(w) + (source ? " is consistent in the source but not in the construction"
                                                         : " is inconsistent in the source but not in the construction")});
            return r;
        }
    }
    for (TokenSet x : nm.premises()) {
        ++r.cases;
        const TokenSet source = nm.consequences(x);
        const TokenSet built = rep.restrict(skeptical_consequences(rep.structure(), rep.lift(x)));
        if (source != built) {
            r.fail({{a.format(x), a.format(source), a.format(built)},
                    "consequences of " + a.format(x) + ": source " + a.format(source) + ", construction " +
                        a.format(built)});
            return r;
        }
    }
    return r;
}

CheckReport verify_extension_shape(const NmRelation& nm, const RepresentationResult& rep)
{
    if (rep.mode() != RepresentationMode::plain) throw ModelError("extension shape check needs a plain representation");
    const auto& a = nm.universe();
    CheckReport r{"extension shape", true, 0, std::nullopt};
    for (TokenSet p : nm.premises()) {
        ++r.cases;
        std::vector<TokenSet> expected;
        for_each_subset(p, [&](TokenSet q) {
            const TokenSet tq = nm.consequences(q);
            if (p.subset_of(tq)) expected.push_back(rep.lift(tq).with(rep.label_of(q)));
        });
        std::sort(expected.begin(), expected.end(), ShortlexLess{});
        const auto report = enumerate_extensions(rep.structure(), rep.lift(p));
        const auto actual = report.sets();
        if (actual != expected) {
            const auto& b = rep.structure().universe();
            r.fail({{a.format(p), format_family(b, actual), format_family(b, expected)},
                    "extensions of " + a.format(p) + " are " + format_family(b, actual) + ", expected " +
                        format_family(b, expected)});
            continue;
        }
        for (const auto& e : report.extensions) {
            if (e.depth > 2) {
                r.fail({{a.format(p), format_mixed(rep, e.set), std::to_string(e.depth)},
                        "extension " + format_mixed(rep, e.set) + " of " + a.format(p) + " needs depth " +
                            std::to_string(e.depth)});
            }
        }
    }
    return r;
}

CheckReport verify_unique_extension(const NmRelation& nm, const RepresentationResult& rep)
{
    if (rep.mode() != RepresentationMode::cumulative) {
        throw ModelError("unique extension check needs a cumulative representation");
    }
    const auto& a = nm.universe();
    const auto& ds = rep.structure();
    const auto& b = ds.universe();
    CheckReport r{"unique extension", true, 0, std::nullopt};
    for (TokenSet p : nm.premises()) {
        ++r.cases;
        const TokenSet tp = nm.consequences(p);
        TokenSet expected = rep.lift(tp);
        for (TokenSet q : nm.premises()) {
            if (q.subset_of(tp) && nm.consequences(q) == tp) expected.insert(rep.label_of(q));
        }
        const auto report = enumerate_extensions(ds, rep.lift(p));
        if (report.sets() != std::vector<TokenSet>{expected}) {
            r.fail({{a.format(p), format_family(b, report.sets()), b.format(expected)},
                    "extensions of " + a.format(p) + " are " + format_family(b, report.sets()) + ", expected only " +
                        b.format(expected)});
            continue;
        }
        if (report.extensions.front().depth > 3) {
            r.fail({{a.format(p), b.format(expected), std::to_string(report.extensions.front().depth)},
                    "extension of " + a.format(p) + " needs depth " + std::to_string(report.extensions.front().depth)});
        }
    }
    if (!r.passed) return r;

    for (TokenSet x : enumerate_states(ds.system())) {
        ++r.cases;
        const auto exts = guided_extensions(ds, x);
        if (exts.size() != 1) {
            r.fail({{b.format(x), format_family(b, exts)},
                    "state " + b.format(x) + " of the construction has extensions " + format_family(b, exts)});
            return r;
        }
    }

    const auto verdict = check_axioms(derive_nm(ds));
    if (!verdict.cumulative()) {
        for (const auto& ax : verdict.axioms) {
            if (!ax.passed) {
                r.fail({ax.witness->parts, "derived relation of the construction fails " + ax.name + ": " +
                                               ax.witness->explanation});
                return r;
            }
        }
    }

    const auto conservative = verify_conservativity(nm, rep);
    r.cases += conservative.cases;
    if (!conservative.passed) r.fail(*conservative.witness);
    return r;
}

} // namespace dks
