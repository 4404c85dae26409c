#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dks/core.hpp"

namespace dks::cli {

inline constexpr std::size_t default_max_tokens = 12;
inline constexpr std::uint64_t default_seed = 20240601;
inline constexpr std::size_t default_samples = 20;

enum ExitCode : int { ok = 0, usage_error = 1, verification_failed = 2, invariant_breach = 3 };

/// Token names separated by commas (outside square brackets), optionally
/// wrapped in braces: "a,b", "{a, b}", "" for the empty set. Throws
/// ModelError on unknown names.
TokenSet parse_token_list(const TokenUniverse& u, std::string_view text);

/// Runs one subcommand. `args` excludes the program name. Data goes to
/// `out`, diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dks::cli
