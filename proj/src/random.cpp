#include "dks/random.hpp"

#include "dks/errors.hpp"

namespace dks {

TokenSet Rng::subset_of(TokenSet s, unsigned percent)
{
    TokenSet out;
    for (Token t : s) {
        if (chance(percent)) out.insert(t);
    }
    return out;
}

UniversePtr letter_universe(std::size_t n)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "t" + std::to_string(i));
    }
    return make_universe(std::move(names));
}

ConsistencyPredicate random_consistency(Rng& rng, const UniversePtr& u, std::size_t max_conflicts)
{
    std::vector<TokenSet> forbidden;
    if (u->size() >= 2) {
        const std::size_t count = rng.between(0, max_conflicts);
        for (std::size_t i = 0; i < count; ++i) {
            TokenSet f;
            const std::size_t want = rng.between(2, std::min<std::size_t>(3, u->size()));
            while (f.size() < want) f.insert(static_cast<Token>(rng.below(u->size())));
            forbidden.push_back(f);
        }
    }
    return ConsistencyPredicate{u, std::move(forbidden)};
}

namespace {

TokenSet random_consistent_subset(Rng& rng, const ConsistencyPredicate& con, std::size_t max_size)
{
    TokenSet s;
    const std::size_t want = rng.between(0, max_size);
    for (std::size_t i = 0; i < want; ++i) {
        const auto t = static_cast<Token>(rng.below(con.universe().size()));
        if (con.contains(s.with(t))) s.insert(t);
    }
    return s;
}

} // namespace

DefaultStructure random_default_structure(Rng& rng, const StructureShape& shape)
{
    const auto u = letter_universe(rng.between(shape.min_tokens, shape.max_tokens));
    auto con = random_consistency(rng, u, shape.max_conflicts);

    EntailmentRelation entail;
    if (shape.entailment_percent && rng.chance(shape.entailment_percent)) {
        std::vector<Sequent> seqs;
        const std::size_t count = rng.between(1, 2);
        for (std::size_t i = 0; i < count; ++i) {
            seqs.push_back({random_consistent_subset(rng, con, 2), static_cast<Token>(rng.below(u->size()))});
        }
        EntailmentRelation candidate{seqs};
        if (validate_system(InformationSystem{con, candidate}).ok()) entail = std::move(candidate);
    }

    std::vector<DefaultRule> rules;
    const std::size_t count = rng.between(0, shape.max_rules);
    for (std::size_t i = 0; i < count; ++i) {
        const TokenSet pre = shape.precondition_free ? TokenSet{} : random_consistent_subset(rng, con, 2);
        rules.push_back({pre, static_cast<Token>(rng.below(u->size()))});
    }
    return DefaultStructure{InformationSystem{std::move(con), std::move(entail)}, std::move(rules)};
}

NmRelation random_abstract_system(Rng& rng, const SystemShape& shape)
{
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const auto u = letter_universe(rng.between(shape.min_tokens, shape.max_tokens));
        auto con = random_consistency(rng, u, shape.max_conflicts);
        std::vector<Instance> base;
        const std::size_t count = rng.between(0, shape.max_base);
        for (std::size_t i = 0; i < count; ++i) {
            base.push_back({random_consistent_subset(rng, con, u->size()), static_cast<Token>(rng.below(u->size()))});
        }
        try {
            return generate_closure(con, base);
        } catch (const ModelError&) {
            // Base forced an inconsistent conclusion; draw again.
        }
    }
    throw InvariantBreach("could not sample a lawful abstract system");
}

NmRelation random_cumulative_system(Rng& rng, const SystemShape& shape)
{
    if (rng.chance(50)) {
        for (int attempt = 0; attempt < 200; ++attempt) {
            auto nm = random_abstract_system(rng, shape);
            if (check_axioms(nm).cumulative()) return nm;
        }
    }
    StructureShape s;
    s.min_tokens = shape.min_tokens;
    s.max_tokens = shape.max_tokens;
    s.max_conflicts = shape.max_conflicts;
    s.max_rules = shape.max_tokens + 2;
    s.precondition_free = true;
    return derive_nm(random_default_structure(rng, s));
}

} // namespace dks
