#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>

namespace dks {

/// Index of a token inside its TokenUniverse. Indices follow the
/// lexicographic order of token names.
using Token = std::uint32_t;

/// A finite set of tokens over a universe of at most 64 tokens, stored as a
/// bit mask. Value type; all operations are O(1) or O(popcount).
class TokenSet {
public:
    static constexpr std::size_t capacity = 64;

    constexpr TokenSet() = default;
    constexpr explicit TokenSet(std::uint64_t bits) : bits_{bits} {}

    static constexpr TokenSet of(std::initializer_list<Token> tokens)
    {
        TokenSet s;
        for (Token t : tokens) s.insert(t);
        return s;
    }

    /// The set {0, ..., n-1}.
    static constexpr TokenSet first(std::size_t n)
    {
        return TokenSet(n >= capacity ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
    }

    static constexpr TokenSet single(Token t) { return TokenSet(std::uint64_t{1} << t); }

    [[nodiscard]] constexpr std::uint64_t bits() const { return bits_; }
    [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
    [[nodiscard]] constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

    [[nodiscard]] constexpr bool contains(Token t) const { return (bits_ >> t) & 1U; }
    [[nodiscard]] constexpr bool subset_of(TokenSet other) const { return (bits_ & ~other.bits_) == 0; }
    [[nodiscard]] constexpr bool intersects(TokenSet other) const { return (bits_ & other.bits_) != 0; }

    /// Smallest member; undefined on the empty set.
    [[nodiscard]] constexpr Token front() const { return static_cast<Token>(std::countr_zero(bits_)); }

    constexpr TokenSet& insert(Token t)
    {
        bits_ |= std::uint64_t{1} << t;
        return *this;
    }
    constexpr TokenSet& erase(Token t)
    {
        bits_ &= ~(std::uint64_t{1} << t);
        return *this;
    }
    [[nodiscard]] constexpr TokenSet with(Token t) const { return TokenSet{*this}.insert(t); }
    [[nodiscard]] constexpr TokenSet without(Token t) const { return TokenSet{*this}.erase(t); }

    constexpr TokenSet& operator|=(TokenSet o)
    {
        bits_ |= o.bits_;
        return *this;
    }
    constexpr TokenSet& operator&=(TokenSet o)
    {
        bits_ &= o.bits_;
        return *this;
    }
    constexpr TokenSet& operator-=(TokenSet o)
    {
        bits_ &= ~o.bits_;
        return *this;
    }
    friend constexpr TokenSet operator|(TokenSet a, TokenSet b) { return a |= b; }
    friend constexpr TokenSet operator&(TokenSet a, TokenSet b) { return a &= b; }
    friend constexpr TokenSet operator-(TokenSet a, TokenSet b) { return a -= b; }
    friend constexpr bool operator==(TokenSet, TokenSet) = default;

    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = Token;
        using difference_type = std::ptrdiff_t;
        using pointer = const Token*;
        using reference = Token;

        constexpr iterator() = default;
        constexpr explicit iterator(std::uint64_t rest) : rest_{rest} {}
        constexpr Token operator*() const { return static_cast<Token>(std::countr_zero(rest_)); }
        constexpr iterator& operator++()
        {
            rest_ &= rest_ - 1;
            return *this;
        }
        constexpr iterator operator++(int)
        {
            iterator old = *this;
            ++*this;
            return old;
        }
        friend constexpr bool operator==(iterator, iterator) = default;

    private:
        std::uint64_t rest_ = 0;
    };

    [[nodiscard]] constexpr iterator begin() const { return iterator{bits_}; }
    [[nodiscard]] constexpr iterator end() const { return iterator{}; }

private:
    std::uint64_t bits_ = 0;
};

/// Shortlex order: smaller sets first, equal sizes compared lexicographically
/// on their ascending member lists. This is the observable order of every
/// list of sets the library returns.
[[nodiscard]] constexpr bool shortlex_less(TokenSet a, TokenSet b)
{
    if (a.size() != b.size()) return a.size() < b.size();
    const std::uint64_t diff = a.bits() ^ b.bits();
    if (diff == 0) return false;
    return a.contains(static_cast<Token>(std::countr_zero(diff)));
}

struct ShortlexLess {
    constexpr bool operator()(TokenSet a, TokenSet b) const { return shortlex_less(a, b); }
};

/// Calls fn(sub) for every subset of `set`, including the empty set and
/// `set` itself. Order is unspecified.
template <typename Fn>
constexpr void for_each_subset(TokenSet set, Fn&& fn)
{
    const std::uint64_t full = set.bits();
    std::uint64_t sub = full;
    while (true) {
        fn(TokenSet(sub));
        if (sub == 0) break;
        sub = (sub - 1) & full;
    }
}

} // namespace dks

template <>
struct std::hash<dks::TokenSet> {
    std::size_t operator()(dks::TokenSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
