#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dks {

/// A concrete counterexample. `parts` holds the rendered components in the
/// order the check documents (sets as "{a,b}", tokens by name).
struct Witness {
    std::vector<std::string> parts;
    std::string explanation;

    [[nodiscard]] std::string tuple() const;
};

/// Outcome of one exhaustive check.
struct CheckReport {
    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    std::optional<Witness> witness;

    void fail(Witness w)
    {
        if (passed) {
            passed = false;
            witness = std::move(w);
        }
    }
};

} // namespace dks
