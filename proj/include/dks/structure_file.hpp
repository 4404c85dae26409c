#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dks/defaults.hpp"
#include "dks/errors.hpp"
#include "dks/nonmono.hpp"

namespace dks {

struct SourcePos {
    std::size_t line = 0;
    std::size_t column = 0;
};

class ParseError : public Error {
public:
    ParseError(SourcePos pos, const std::string& message);

    [[nodiscard]] SourcePos pos() const { return pos_; }
    [[nodiscard]] const std::string& message() const { return message_; }

private:
    SourcePos pos_;
    std::string message_;
};

enum class FileKind { default_structure, abstract_system };

/// Parsed declarations of a structure file. Line-oriented grammar, `#`
/// starts a comment, declarations may appear in any order:
///
///     tokens: a b c
///     conflict: {a b c}
///     entail: {a b} |- c
///     default: {a} : b
///     assume: {} |~ a        (or a set: {} |~ {a b})
///
/// Files with `default:` lines describe default structures, files with
/// `assume:` lines abstract nonmonotonic systems; the two never mix.
struct StructureFile {
    struct Conflict {
        std::vector<std::string> members;
        SourcePos pos;
    };
    struct Rule {
        std::vector<std::string> premise;
        std::string conclusion;
        SourcePos pos;
    };

    std::vector<std::string> tokens;
    std::vector<Conflict> conflicts;
    std::vector<Rule> entails;
    std::vector<Rule> defaults;
    std::vector<Rule> assumes;
    /// Written as leading `#` lines by serialize; never filled by parsing.
    std::vector<std::string> comments;
    /// Merged duplicates and similar non-fatal findings, with positions.
    std::vector<std::string> warnings;

    [[nodiscard]] FileKind kind() const { return assumes.empty() ? FileKind::default_structure : FileKind::abstract_system; }
};

/// Throws ParseError with line and column for unknown tokens, malformed
/// lines, singleton conflicts and mixed file kinds.
StructureFile parse_structure(std::string_view text);

/// Canonical text: tokens, conflicts, sequents, defaults and assumptions in
/// sorted order, one declaration per line.
std::string serialize(const StructureFile& file);

UniversePtr file_universe(const StructureFile& file);
ConsistencyPredicate file_consistency(const StructureFile& file, const UniversePtr& u);

/// Information system as written, without checking its laws.
InformationSystem file_system(const StructureFile& file);

/// Default structure; the information system must be lawful (LoadError).
DefaultStructure file_default_structure(const StructureFile& file);

/// Closure of the file's assumptions (ModelError if it breaks consistency).
NmRelation file_abstract_system(const StructureFile& file);

StructureFile to_file(const DefaultStructure& ds);

/// Abstract-system file listing every non-reflexive instance of nm.
StructureFile to_file(const NmRelation& nm);

} // namespace dks
