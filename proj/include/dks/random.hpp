#pragma once

#include <cstdint>
#include <random>

#include "dks/defaults.hpp"
#include "dks/nonmono.hpp"

namespace dks {

/// Seeded generator with a portable bounded draw (std distributions are
/// implementation-defined, which would make seeds non-reproducible).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_{seed} {}

    /// Uniform in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }
    /// Uniform in [lo, hi].
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(below(hi - lo + 1)); }
    bool chance(unsigned percent) { return below(100) < percent; }
    TokenSet subset_of(TokenSet s, unsigned percent);

private:
    std::mt19937_64 engine_;
};

struct StructureShape {
    std::size_t min_tokens = 1;
    std::size_t max_tokens = 6;
    std::size_t max_rules = 8;
    std::size_t max_conflicts = 3;
    /// Chance of adding entailment sequents (kept only if lawful).
    unsigned entailment_percent = 0;
    bool precondition_free = false;
};

/// Token names a, b, c, ... in order.
UniversePtr letter_universe(std::size_t n);

ConsistencyPredicate random_consistency(Rng& rng, const UniversePtr& u, std::size_t max_conflicts);

DefaultStructure random_default_structure(Rng& rng, const StructureShape& shape);

struct SystemShape {
    std::size_t min_tokens = 1;
    std::size_t max_tokens = 3;
    std::size_t max_conflicts = 2;
    std::size_t max_base = 5;
};

/// Closure of random base instances over a random consistency predicate;
/// resamples until the closure respects consistency.
NmRelation random_abstract_system(Rng& rng, const SystemShape& shape);

/// A cumulative relation: either a random abstract system that happens to
/// satisfy cautious monotony, or the skeptical relation of a random
/// precondition-free default structure.
NmRelation random_cumulative_system(Rng& rng, const SystemShape& shape);

} // namespace dks
