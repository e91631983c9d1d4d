#pragma once

// Height of a primitive constant-length substitution and its pure base, the
// induced substitution on h-blocks read at positions divisible by h.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "subac/core.hpp"
#include "subac/errors.hpp"

namespace subac {

namespace detail {

// gcd of the positive positions m with x_m == x_0.
inline std::size_t return_gcd(const Word& prefix) {
    std::size_t g = 0;
    for (std::size_t m = 1; m < prefix.size(); ++m)
        if (prefix[m] == prefix[0]) g = std::gcd(g, m);
    return g;
}

// Largest divisor of g coprime to k.
inline std::size_t coprime_part(std::size_t g, std::size_t k) {
    for (std::size_t d = std::gcd(g, k); d > 1; d = std::gcd(g, k)) g /= d;
    return g;
}

} // namespace detail

inline std::size_t height(const Substitution& subst, const Limits& limits = {}) {
    if (!is_primitive(subst)) throw PreconditionError("height: substitution is not primitive");
    const std::size_t k = subst.length();
    if (k < 2) throw PreconditionError("height: length must be at least 2");

    // Short prefixes can agree on a gcd that later shrinks, so stability only
    // counts once the prefix holds at least 2^16 symbols (or r reaches 8).
    constexpr std::size_t min_settled_length = std::size_t{1} << 16;
    std::size_t previous = 0, g = 0;
    int levels = 0;
    std::size_t length = k;
    for (int r = 2; r <= 8; ++r) {
        if (length > limits.max_word_length / k) break;
        length *= k;
        previous = g;
        g = detail::return_gcd(fixed_point_prefix(subst, length, limits));
        ++levels;
        if (levels >= 2 && g != 0 && g == previous && length >= min_settled_length) break;
    }
    if (levels < 2 || g == 0 || g != previous) throw InternalError("height: return-time gcd did not stabilize");
    const std::size_t h = detail::coprime_part(g, k);
    // each letter occurs in a single residue class mod h
    detail::ensure(h <= subst.size(), "height: result exceeds |A|");
    return h;
}

struct PureBaseResult {
    std::size_t height = 1;
    Substitution pure_base;
    std::vector<Word> decoding; // block letter -> its h letters in the original alphabet
};

inline PureBaseResult pure_base(const Substitution& subst, const Limits& limits = {}) {
    const std::size_t h = height(subst, limits);
    PureBaseResult result;
    result.height = h;
    if (h == 1) {
        result.pure_base = subst;
        for (Letter a = 0; a < subst.size(); ++a) result.decoding.push_back(Word{a});
        return result;
    }

    const std::size_t k = subst.length();
    const std::size_t blocks_in_prefix = std::min<std::size_t>(4096, limits.max_word_length / h);
    const Word prefix = fixed_point_prefix(subst, blocks_in_prefix * h, limits);

    std::map<Word, Letter> index;
    std::vector<Word> blocks;
    auto intern = [&](Word block) {
        auto [it, inserted] = index.emplace(block, static_cast<Letter>(blocks.size()));
        if (inserted) blocks.push_back(std::move(block));
        return it->second;
    };
    for (std::size_t pos = 0; pos + h <= prefix.size(); pos += h)
        intern(Word(prefix.begin() + static_cast<std::ptrdiff_t>(pos),
                    prefix.begin() + static_cast<std::ptrdiff_t>(pos + h)));

    double cap = 1.0;
    for (std::size_t i = 0; i < h; ++i) cap *= static_cast<double>(subst.size());

    std::vector<Word> rules;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const Word image = apply(subst, blocks[b], limits);
        Word rule;
        for (std::size_t j = 0; j < k; ++j)
            rule.push_back(intern(Word(image.begin() + static_cast<std::ptrdiff_t>(j * h),
                                       image.begin() + static_cast<std::ptrdiff_t>((j + 1) * h))));
        rules.push_back(std::move(rule));
        if (static_cast<double>(blocks.size()) > cap)
            throw InternalError("pure_base: block closure exceeds |A|^h candidates");
    }

    std::vector<std::string> tokens;
    const bool tight = subst.alphabet().compact();
    for (const auto& block : blocks) {
        std::string token;
        for (std::size_t i = 0; i < block.size(); ++i) {
            if (!tight && i > 0) token += '.';
            token += subst.alphabet().token(block[i]);
        }
        tokens.push_back(std::move(token));
    }
    result.pure_base = Substitution(Alphabet(std::move(tokens)), std::move(rules));
    result.decoding = std::move(blocks);
    return result;
}

} // namespace subac
