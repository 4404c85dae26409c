#include "dks/core.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "dks/errors.hpp"

namespace dks {

std::string Witness::tuple() const
{
    std::string out = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ", ";
        out += parts[i];
    }
    return out + ")";
}

bool is_valid_token_name(std::string_view name)
{
    if (name.empty()) return false;
    int depth = 0;
    for (char c : name) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '#') return false;
        if (c == '[') {
            ++depth;
        } else if (c == ']') {
            if (--depth < 0) return false;
        } else if (depth == 0 && (c == '{' || c == '}' || c == ',' || c == ':' || c == '|')) {
            return false;
        }
    }
    return depth == 0;
}

TokenUniverse::TokenUniverse(std::vector<std::string> names) : names_{std::move(names)}
{
    if (names_.size() > TokenSet::capacity) {
        throw ModelError("token universe exceeds " + std::to_string(TokenSet::capacity) + " tokens");
    }
    for (const auto& n : names_) {
        if (!is_valid_token_name(n)) throw ModelError("invalid token name '" + n + "'");
    }
    std::sort(names_.begin(), names_.end());
    auto dup = std::adjacent_find(names_.begin(), names_.end());
    if (dup != names_.end()) throw ModelError("duplicate token '" + *dup + "'");
}

std::optional<Token> TokenUniverse::find(std::string_view name) const
{
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) return std::nullopt;
    return static_cast<Token>(it - names_.begin());
}

Token TokenUniverse::index(std::string_view name) const
{
    if (auto t = find(name)) return *t;
    throw ModelError("unknown token '" + std::string{name} + "'");
}

TokenSet TokenUniverse::set_of(const std::vector<std::string>& names) const
{
    TokenSet s;
    for (const auto& n : names) s.insert(index(n));
    return s;
}

std::string TokenUniverse::format(TokenSet s) const
{
    std::string out = "{";
    bool first = true;
    for (Token t : s) {
        if (!first) out += ',';
        out += name(t);
        first = false;
    }
    return out + "}";
}

std::string format_family(const TokenUniverse& u, const std::vector<TokenSet>& sets)
{
    std::string out = "[";
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (i) out += ", ";
        out += u.format(sets[i]);
    }
    return out + "]";
}

UniversePtr make_universe(std::vector<std::string> names)
{
    return std::make_shared<const TokenUniverse>(std::move(names));
}

ConsistencyPredicate::ConsistencyPredicate(UniversePtr universe, std::vector<TokenSet> forbidden)
    : universe_{std::move(universe)}
{
    if (!universe_) throw ModelError("consistency predicate needs a universe");
    const TokenSet all = universe_->all();
    for (TokenSet f : forbidden) {
        if (!f.subset_of(all)) throw ModelError("forbidden set mentions a token outside the universe");
        if (f.size() < 2) throw ModelError("singleton conflicts forbidden");
    }
    std::sort(forbidden.begin(), forbidden.end(), ShortlexLess{});
    forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
    // Shortlex order puts every subset before its supersets.
    for (TokenSet f : forbidden) {
        bool redundant = std::any_of(forbidden_.begin(), forbidden_.end(),
                                     [f](TokenSet g) { return g.subset_of(f); });
        if (!redundant) forbidden_.push_back(f);
    }
}

ConsistencyPredicate ConsistencyPredicate::unconstrained(UniversePtr universe)
{
    return ConsistencyPredicate{std::move(universe), {}};
}

bool ConsistencyPredicate::contains(TokenSet x) const
{
    return std::none_of(forbidden_.begin(), forbidden_.end(), [x](TokenSet f) { return f.subset_of(x); });
}

TokenSet ConsistencyPredicate::compatible_with(TokenSet s) const
{
    TokenSet result = universe_->all();
    for (TokenSet f : forbidden_) {
        TokenSet missing = f - s;
        if (missing.empty()) return TokenSet{};
        if (missing.size() == 1) result -= missing;
    }
    return result;
}

std::vector<TokenSet> ConsistencyPredicate::enumerate() const
{
    std::vector<TokenSet> out;
    const auto n = static_cast<Token>(universe_->size());
    // Depth-first growth in increasing token order visits each set once.
    std::vector<std::pair<TokenSet, Token>> stack{{TokenSet{}, 0}};
    while (!stack.empty()) {
        auto [set, next] = stack.back();
        stack.pop_back();
        out.push_back(set);
        for (Token t = next; t < n; ++t) {
            TokenSet grown = set.with(t);
            if (contains(grown)) stack.emplace_back(grown, t + 1);
        }
    }
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
}

EntailmentRelation::EntailmentRelation(std::vector<Sequent> base) : base_{std::move(base)}
{
    std::sort(base_.begin(), base_.end(), [](const Sequent& a, const Sequent& b) {
        if (a.premise != b.premise) return shortlex_less(a.premise, b.premise);
        return a.conclusion < b.conclusion;
    });
    base_.erase(std::unique(base_.begin(), base_.end()), base_.end());
    for (const auto& s : base_) {
        if (!s.premise.contains(s.conclusion)) chaining_.push_back(s);
    }
}

TokenSet EntailmentRelation::saturate(TokenSet x) const
{
    bool changed = !chaining_.empty();
    while (changed) {
        changed = false;
        for (const auto& s : chaining_) {
            if (!x.contains(s.conclusion) && s.premise.subset_of(x)) {
                x.insert(s.conclusion);
                changed = true;
            }
        }
    }
    return x;
}

InformationSystem::InformationSystem(ConsistencyPredicate con, EntailmentRelation entail)
    : con_{std::move(con)}, entail_{std::move(entail)}
{
    const TokenSet all = con_.universe().all();
    for (const auto& s : entail_.base()) {
        if (!s.premise.subset_of(all) || s.conclusion >= con_.universe().size()) {
            throw ModelError("sequent mentions a token outside the universe");
        }
        if (!con_.contains(s.premise)) {
            throw ModelError("sequent premise " + con_.universe().format(s.premise) + " is inconsistent");
        }
    }
}

ValidationReport validate_system(const InformationSystem& sys)
{
    const auto& con = sys.con();
    const auto& u = sys.universe();
    ValidationReport report;
    std::vector<bool> seen(6, false);
    auto violate = [&](int property, Witness w) {
        if (seen[property]) return;
        seen[property] = true;
        report.violations.push_back({property, std::move(w)});
    };

    for (Token a = 0; a < u.size(); ++a) {
        if (!con.contains(TokenSet::single(a))) {
            violate(2, {{u.name(a)}, "singleton {" + u.name(a) + "} is inconsistent"});
        }
    }

    const auto sets = con.enumerate();
    report.sets_checked = sets.size();
    for (TokenSet y : sets) {
        for (Token t : y) {
            if (!con.contains(y.without(t))) {
                violate(1, {{u.format(y.without(t)), u.format(y)},
                            u.format(y.without(t)) + " is a subset of consistent " + u.format(y) +
                                " but is inconsistent"});
            }
        }
    }

    const auto& entail = sys.entail();
    for (TokenSet x : sets) {
        const TokenSet fx = entail.saturate(x);
        if (!x.subset_of(fx)) {
            Token a = (x - fx).front();
            violate(4, {{u.format(x), u.name(a)}, u.format(x) + " does not entail its member " + u.name(a)});
        }
        for (Token a : fx - x) {
            if (!con.contains(x.with(a))) {
                violate(3, {{u.format(x), u.name(a)},
                            u.format(x) + " entails " + u.name(a) + " but " + u.format(x.with(a)) +
                                " is inconsistent"});
                break;
            }
        }
        // Transitivity: every consistent Y with X ⊢ Y has its consequences
        // entailed by X.
        std::vector<TokenSet> bad;
        for_each_subset(fx, [&](TokenSet y) {
            if (!con.contains(y)) return;
            TokenSet beyond = entail.saturate(y) - fx;
            if (!beyond.empty()) bad.push_back(y);
        });
        if (!bad.empty()) {
            TokenSet y = *std::min_element(bad.begin(), bad.end(), ShortlexLess{});
            Token c = (entail.saturate(y) - fx).front();
            violate(5, {{u.format(x), u.format(y), u.name(c)},
                        u.format(x) + " entails every member of " + u.format(y) + ", which entails " + u.name(c) +
                            ", but " + u.format(x) + " does not"});
        }
    }

    std::sort(report.violations.begin(), report.violations.end(),
              [](const AxiomViolation& a, const AxiomViolation& b) { return a.property < b.property; });
    return report;
}

InformationSystem load_system(ConsistencyPredicate con, EntailmentRelation entail)
{
    InformationSystem sys{std::move(con), std::move(entail)};
    auto report = validate_system(sys);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw LoadError("information system violates property " + std::to_string(v.property) + ": " +
                        v.witness.explanation);
    }
    return sys;
}

TokenSet closure(const InformationSystem& sys, TokenSet x)
{
    if (!x.subset_of(sys.universe().all())) throw ModelError("premise mentions a token outside the universe");
    if (!sys.con().contains(x)) throw ModelError("inconsistent premise set");
    TokenSet fx = sys.entail().saturate(x);
    if (!sys.con().contains(fx)) {
        throw InvariantBreach("closure of " + sys.universe().format(x) +
                              " is inconsistent; the system violates consistency compatibility");
    }
    return fx;
}

bool is_state(const InformationSystem& sys, TokenSet x)
{
    return x.subset_of(sys.universe().all()) && sys.con().contains(x) && sys.entail().saturate(x) == x;
}

std::vector<TokenSet> enumerate_states(const InformationSystem& sys)
{
    std::unordered_set<TokenSet> seen;
    std::vector<TokenSet> out;
    for (TokenSet x : sys.con().enumerate()) {
        TokenSet fx = closure(sys, x);
        if (seen.insert(fx).second) out.push_back(fx);
    }
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
}

} // namespace dks
