#include "dks/structure_file.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace dks {

ParseError::ParseError(SourcePos pos, const std::string& message)
    : Error("line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) + ": " + message),
      pos_{pos},
      message_{message}
{
}

namespace {

struct Item {
    enum Kind { word, set, entails_op, nm_op, colon } kind;
    std::string text;
    std::vector<std::pair<std::string, std::size_t>> members;  // for sets: name, column
    std::size_t column = 0;
};

bool is_space(char c)
{
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

class LineLexer {
public:
    LineLexer(std::string_view line, std::size_t line_no, std::size_t offset)
        : line_{line}, line_no_{line_no}, offset_{offset}
    {
    }

    std::vector<Item> run()
    {
        std::vector<Item> items;
        while (true) {
            skip_space();
            if (pos_ >= line_.size()) break;
            const char c = line_[pos_];
            const std::size_t col = column();
            if (c == '{') {
                items.push_back(read_set());
            } else if (c == '|' && pos_ + 1 < line_.size() && (line_[pos_ + 1] == '-' || line_[pos_ + 1] == '~')) {
                items.push_back({line_[pos_ + 1] == '-' ? Item::entails_op : Item::nm_op,
                                 std::string{line_.substr(pos_, 2)}, {}, col});
                pos_ += 2;
            } else if (c == ':') {
                items.push_back({Item::colon, ":", {}, col});
                ++pos_;
            } else if (c == '}' || c == ',' || c == '|') {
                fail(col, std::string{"unexpected '"} + c + "'");
            } else {
                items.push_back({Item::word, read_name(), {}, col});
            }
        }
        return items;
    }

private:
    [[noreturn]] void fail(std::size_t col, const std::string& msg) const { throw ParseError({line_no_, col}, msg); }

    std::size_t column() const { return offset_ + pos_ + 1; }

    void skip_space()
    {
        while (pos_ < line_.size() && is_space(line_[pos_])) ++pos_;
    }

    // A name runs to whitespace or, outside square brackets, to one of the
    // structural characters.
    std::string read_name()
    {
        const std::size_t start = pos_;
        const std::size_t col = column();
        int depth = 0;
        while (pos_ < line_.size()) {
            const char c = line_[pos_];
            if (is_space(c)) break;
            if (c == '[') {
                ++depth;
            } else if (c == ']') {
                if (--depth < 0) fail(col, "unbalanced ']' in token name");
            } else if (depth == 0 && (c == '{' || c == '}' || c == ',' || c == ':' || c == '|')) {
                break;
            }
            ++pos_;
        }
        if (depth != 0) fail(col, "unbalanced '[' in token name");
        return std::string{line_.substr(start, pos_ - start)};
    }

    Item read_set()
    {
        Item item{Item::set, "", {}, column()};
        ++pos_;
        while (true) {
            skip_space();
            if (pos_ >= line_.size()) fail(item.column, "unterminated set, expected '}'");
            const char c = line_[pos_];
            if (c == '}') {
                ++pos_;
                return item;
            }
            if (c == ',') {
                ++pos_;
                continue;
            }
            const std::size_t col = column();
            std::string name = read_name();
            if (name.empty()) fail(col, std::string{"unexpected '"} + c + "' in set");
            item.members.emplace_back(std::move(name), col);
        }
    }

    std::string_view line_;
    std::size_t line_no_;
    std::size_t offset_;
    std::size_t pos_ = 0;
};

struct Reference {
    std::string name;
    SourcePos pos;
};

std::vector<std::string> member_names(const Item& set)
{
    std::vector<std::string> out;
    for (const auto& m : set.members) out.push_back(m.first);
    return out;
}

} // namespace

StructureFile parse_structure(std::string_view text)
{
    StructureFile file;
    std::vector<Reference> references;
    std::set<std::string> declared;
    std::optional<SourcePos> first_default;
    std::optional<SourcePos> first_assume;

    auto note_refs = [&](const Item& set, std::size_t line) {
        for (const auto& [name, col] : set.members) references.push_back({name, {line, col}});
    };

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        const std::size_t line_start = start;
        start = end + 1;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::size_t first = 0;
        while (first < line.size() && is_space(line[first])) ++first;
        if (first == line.size()) {
            if (end == text.size()) break;
            continue;
        }
        const std::size_t colon = line.find(':', first);
        const SourcePos key_pos{line_no, first + 1};
        if (colon == std::string_view::npos) throw ParseError(key_pos, "malformed line: expected 'keyword:'");
        std::string keyword{line.substr(first, colon - first)};
        while (!keyword.empty() && is_space(keyword.back())) keyword.pop_back();
        const auto items = LineLexer(line.substr(colon + 1), line_no, colon + 1).run();
        const std::size_t rest_col = colon + 2;
        (void)line_start;

        auto expect = [&](bool ok, std::size_t idx, const std::string& what) {
            if (ok) return;
            const std::size_t col = idx < items.size() ? items[idx].column : line.size() + 1;
            throw ParseError({line_no, col}, "malformed " + keyword + " declaration: expected " + what);
        };

        if (keyword == "tokens") {
            for (const auto& it : items) {
                expect(it.kind == Item::word, &it - items.data(), "token names");
                if (!is_valid_token_name(it.text)) {
                    throw ParseError({line_no, it.column}, "invalid token name '" + it.text + "'");
                }
                if (!declared.insert(it.text).second) {
                    file.warnings.push_back("line " + std::to_string(line_no) + ": duplicate token '" + it.text +
                                            "' merged");
                } else {
                    file.tokens.push_back(it.text);
                }
            }
        } else if (keyword == "conflict") {
            expect(items.size() == 1 && items[0].kind == Item::set, 0, "a single set {...}");
            auto members = member_names(items[0]);
            std::sort(members.begin(), members.end());
            members.erase(std::unique(members.begin(), members.end()), members.end());
            if (members.size() < 2) {
                throw ParseError({line_no, items[0].column},
                                 members.empty() ? "empty conflicts forbidden" : "singleton conflicts forbidden");
            }
            note_refs(items[0], line_no);
            file.conflicts.push_back({std::move(members), {line_no, items[0].column}});
        } else if (keyword == "entail" || keyword == "default" || keyword == "assume") {
            const Item::Kind op = keyword == "entail" ? Item::entails_op
                                  : keyword == "default" ? Item::colon
                                                         : Item::nm_op;
            const std::string op_text = keyword == "entail" ? "'|-'" : keyword == "default" ? "':'" : "'|~'";
            expect(!items.empty() && items[0].kind == Item::set, 0, "a premise set {...}");
            expect(items.size() > 1 && items[1].kind == op, 1, op_text);
            expect(items.size() == 3, items.size() > 3 ? 3 : 2, "a single conclusion");
            const Item& concl = items[2];
            const bool set_ok = keyword == "assume" && concl.kind == Item::set;
            expect(concl.kind == Item::word || set_ok, 2, keyword == "assume" ? "a token or a set" : "a token");
            note_refs(items[0], line_no);
            std::vector<std::pair<std::string, std::size_t>> conclusions;
            if (concl.kind == Item::word) {
                conclusions.emplace_back(concl.text, concl.column);
            } else {
                conclusions = concl.members;
            }
            auto premise = member_names(items[0]);
            std::sort(premise.begin(), premise.end());
            premise.erase(std::unique(premise.begin(), premise.end()), premise.end());
            const SourcePos pos{line_no, items[0].column};
            for (const auto& [name, col] : conclusions) {
                references.push_back({name, {line_no, col}});
                StructureFile::Rule rule{premise, name, pos};
                if (keyword == "entail") {
                    file.entails.push_back(std::move(rule));
                } else if (keyword == "default") {
                    file.defaults.push_back(std::move(rule));
                    if (!first_default) first_default = pos;
                } else {
                    file.assumes.push_back(std::move(rule));
                    if (!first_assume) first_assume = pos;
                }
            }
        } else {
            throw ParseError(key_pos, "unknown declaration '" + keyword + "'");
        }
        (void)rest_col;
        if (end == text.size()) break;
    }

    for (const auto& ref : references) {
        if (!declared.count(ref.name)) throw ParseError(ref.pos, "unknown token '" + ref.name + "'");
    }
    if (first_default && first_assume) {
        const SourcePos later = (first_default->line > first_assume->line) ? *first_default : *first_assume;
        throw ParseError(later, "mixed file kind: default rules and assumptions cannot share a file");
    }
    if (first_assume && !file.entails.empty()) {
        throw ParseError(file.entails.front().pos, "mixed file kind: abstract-system files take no entailment");
    }

    auto dedupe_rules = [&](std::vector<StructureFile::Rule>& rules, const char* what) {
        std::set<std::pair<std::vector<std::string>, std::string>> seen;
        std::vector<StructureFile::Rule> kept;
        for (auto& r : rules) {
            if (seen.insert({r.premise, r.conclusion}).second) {
                kept.push_back(std::move(r));
            } else {
                file.warnings.push_back("line " + std::to_string(r.pos.line) + ": duplicate " + what + " merged");
            }
        }
        rules = std::move(kept);
    };
    dedupe_rules(file.entails, "sequent");
    dedupe_rules(file.defaults, "default");
    dedupe_rules(file.assumes, "assumption");
    {
        std::set<std::vector<std::string>> seen;
        std::vector<StructureFile::Conflict> kept;
        for (auto& c : file.conflicts) {
            if (seen.insert(c.members).second) {
                kept.push_back(std::move(c));
            } else {
                file.warnings.push_back("line " + std::to_string(c.pos.line) + ": duplicate conflict merged");
            }
        }
        file.conflicts = std::move(kept);
    }
    return file;
}

namespace {

std::string set_text(const TokenUniverse& u, TokenSet s)
{
    std::string out = "{";
    bool first = true;
    for (Token t : s) {
        if (!first) out += ' ';
        out += u.name(t);
        first = false;
    }
    return out + "}";
}

struct ResolvedRule {
    TokenSet premise;
    Token conclusion;
};

std::vector<ResolvedRule> resolve(const TokenUniverse& u, const std::vector<StructureFile::Rule>& rules)
{
    std::vector<ResolvedRule> out;
    for (const auto& r : rules) {
        try {
            out.push_back({u.set_of(r.premise), u.index(r.conclusion)});
        } catch (const ModelError& e) {
            throw ParseError(r.pos, e.what());
        }
    }
    std::sort(out.begin(), out.end(), [](const ResolvedRule& a, const ResolvedRule& b) {
        if (a.premise != b.premise) return shortlex_less(a.premise, b.premise);
        return a.conclusion < b.conclusion;
    });
    return out;
}

} // namespace

UniversePtr file_universe(const StructureFile& file)
{
    return make_universe(file.tokens);
}

ConsistencyPredicate file_consistency(const StructureFile& file, const UniversePtr& u)
{
    std::vector<TokenSet> forbidden;
    for (const auto& c : file.conflicts) {
        try {
            forbidden.push_back(u->set_of(c.members));
        } catch (const ModelError& e) {
            throw ParseError(c.pos, e.what());
        }
    }
    return ConsistencyPredicate{u, std::move(forbidden)};
}

InformationSystem file_system(const StructureFile& file)
{
    const auto u = file_universe(file);
    auto con = file_consistency(file, u);
    std::vector<Sequent> seqs;
    for (const auto& r : resolve(*u, file.entails)) seqs.push_back({r.premise, r.conclusion});
    for (const auto& r : file.entails) {
        if (!con.contains(u->set_of(r.premise))) throw ParseError(r.pos, "sequent premise is inconsistent");
    }
    return InformationSystem{std::move(con), EntailmentRelation{std::move(seqs)}};
}

DefaultStructure file_default_structure(const StructureFile& file)
{
    if (file.kind() != FileKind::default_structure) throw ModelError("expected a default-structure file");
    InformationSystem sys = file_system(file);
    const auto report = validate_system(sys);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw LoadError("information system violates property " + std::to_string(v.property) + ": " +
                        v.witness.explanation);
    }
    std::vector<DefaultRule> rules;
    for (const auto& r : file.defaults) {
        const TokenSet pre = sys.universe().set_of(r.premise);
        if (!sys.con().contains(pre)) throw ParseError(r.pos, "default precondition is inconsistent");
        rules.push_back({pre, sys.universe().index(r.conclusion)});
    }
    return DefaultStructure{std::move(sys), std::move(rules)};
}

NmRelation file_abstract_system(const StructureFile& file)
{
    const auto u = file_universe(file);
    auto con = file_consistency(file, u);
    std::vector<Instance> base;
    for (const auto& r : file.assumes) {
        const TokenSet pre = u->set_of(r.premise);
        if (!con.contains(pre)) throw ParseError(r.pos, "assumption premise is inconsistent");
        base.push_back({pre, u->index(r.conclusion)});
    }
    return generate_closure(con, base);
}

std::string serialize(const StructureFile& file)
{
    std::string out;
    for (const auto& c : file.comments) out += "# " + c + "\n";
    const auto u = file_universe(file);
    out += "tokens:";
    for (const auto& n : u->names()) out += " " + n;
    out += "\n";

    std::vector<TokenSet> conflicts;
    for (const auto& c : file.conflicts) conflicts.push_back(u->set_of(c.members));
    std::sort(conflicts.begin(), conflicts.end(), ShortlexLess{});
    conflicts.erase(std::unique(conflicts.begin(), conflicts.end()), conflicts.end());
    for (TokenSet c : conflicts) out += "conflict: " + set_text(*u, c) + "\n";

    auto emit = [&](const std::vector<StructureFile::Rule>& rules, const char* keyword, const char* op) {
        auto resolved = resolve(*u, rules);
        resolved.erase(std::unique(resolved.begin(), resolved.end(),
                                   [](const ResolvedRule& a, const ResolvedRule& b) {
                                       return a.premise == b.premise && a.conclusion == b.conclusion;
                                   }),
                       resolved.end());
        for (const auto& r : resolved) {
            out += std::string{keyword} + ": " + set_text(*u, r.premise) + " " + op + " " + u->name(r.conclusion) + "\n";
        }
    };
    emit(file.entails, "entail", "|-");
    emit(file.defaults, "default", ":");
    emit(file.assumes, "assume", "|~");
    return out;
}

namespace {

std::vector<std::string> names_of(const TokenUniverse& u, TokenSet s)
{
    std::vector<std::string> out;
    for (Token t : s) out.push_back(u.name(t));
    return out;
}

StructureFile file_skeleton(const ConsistencyPredicate& con)
{
    StructureFile file;
    const auto& u = con.universe();
    file.tokens = u.names();
    for (TokenSet f : con.forbidden()) file.conflicts.push_back({names_of(u, f), {}});
    return file;
}

} // namespace

StructureFile to_file(const DefaultStructure& ds)
{
    StructureFile file = file_skeleton(ds.con());
    const auto& u = ds.universe();
    for (const auto& s : ds.system().entail().base()) file.entails.push_back({names_of(u, s.premise), u.name(s.conclusion), {}});
    for (const auto& r : ds.rules()) file.defaults.push_back({names_of(u, r.precondition), u.name(r.consequent), {}});
    return file;
}

StructureFile to_file(const NmRelation& nm)
{
    StructureFile file = file_skeleton(nm.con());
    const auto& u = nm.universe();
    for (const auto& inst : nm.instances()) {
        if (!inst.premise.contains(inst.conclusion)) {
            file.assumes.push_back({names_of(u, inst.premise), u.name(inst.conclusion), {}});
        }
    }
    return file;
}

} // namespace dks
