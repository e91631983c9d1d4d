#pragma once

// Words over a finite alphabet and substitutions of constant length.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subac/errors.hpp"
#include "subac/matrices.hpp"

namespace subac {

using Letter = std::uint32_t;
using Word = std::vector<Letter>;
using LetterSet = std::vector<Letter>; // sorted, no duplicates

struct Limits {
    // Longest word any operation may materialize.
    std::size_t max_word_length = std::size_t{1} << 26;
};

class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
        if (tokens_.empty()) throw PreconditionError("alphabet must not be empty");
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            if (tokens_[i].empty()) throw PreconditionError("alphabet tokens must be non-empty");
            if (!index_.emplace(tokens_[i], static_cast<Letter>(i)).second)
                throw PreconditionError("duplicate alphabet token '" + tokens_[i] + "'");
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return tokens_.size(); }
    [[nodiscard]] const std::string& token(Letter a) const { return tokens_.at(a); }
    [[nodiscard]] const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    [[nodiscard]] std::optional<Letter> find(const std::string& token) const {
        auto it = index_.find(token);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    // True when every token is one character, so words can be written unspaced.
    [[nodiscard]] bool compact() const {
        return std::all_of(tokens_.begin(), tokens_.end(), [](const std::string& t) { return t.size() == 1; });
    }

    [[nodiscard]] std::string render(std::span<const Letter> word) const {
        std::string out;
        const bool tight = compact();
        for (std::size_t i = 0; i < word.size(); ++i) {
            if (!tight && i > 0) out += ' ';
            out += token(word[i]);
        }
        return out;
    }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.tokens_ == b.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, Letter> index_;
};

class Substitution {
public:
    Substitution() = default;

    Substitution(Alphabet alphabet, std::vector<Word> rules)
        : alphabet_(std::move(alphabet)), rules_(std::move(rules)) {
        if (rules_.size() != alphabet_.size())
            throw PreconditionError("substitution needs exactly one rule per letter");
        length_ = rules_.front().size();
        if (length_ == 0) throw PreconditionError("substitution images must be non-empty");
        for (const auto& rule : rules_) {
            if (rule.size() != length_) throw PreconditionError("non-constant length");
            for (Letter a : rule)
                if (a >= alphabet_.size()) throw PreconditionError("rule uses a letter outside the alphabet");
        }
    }

    // Builds a substitution from single-character letters, e.g.
    // from_compact({{"a", "ab"}, {"b", "ba"}}).
    static Substitution from_compact(const std::vector<std::pair<std::string, std::string>>& rules) {
        std::vector<std::string> tokens;
        for (const auto& [letter, image] : rules) tokens.push_back(letter);
        Alphabet alphabet(tokens);
        std::vector<Word> words;
        for (const auto& [letter, image] : rules) {
            Word w;
            for (char ch : image) {
                auto a = alphabet.find(std::string(1, ch));
                if (!a) throw PreconditionError(std::string("undeclared letter '") + ch + "'");
                w.push_back(*a);
            }
            words.push_back(std::move(w));
        }
        return Substitution(std::move(alphabet), std::move(words));
    }

    [[nodiscard]] const Alphabet& alphabet() const noexcept { return alphabet_; }
    [[nodiscard]] std::size_t size() const noexcept { return alphabet_.size(); }
    [[nodiscard]] std::size_t length() const noexcept { return length_; }
    [[nodiscard]] const std::vector<Word>& rules() const noexcept { return rules_; }
    [[nodiscard]] const Word& rule(Letter a) const { return rules_.at(a); }

    friend bool operator==(const Substitution& a, const Substitution& b) {
        return a.alphabet_ == b.alphabet_ && a.rules_ == b.rules_;
    }

private:
    Alphabet alphabet_;
    std::vector<Word> rules_;
    std::size_t length_ = 0;
};

inline Word apply(const Substitution& subst, std::span<const Letter> word, const Limits& limits = {}) {
    if (word.size() > limits.max_word_length / subst.length())
        throw ResourceError("apply: image exceeds the word-length budget");
    Word out;
    out.reserve(word.size() * subst.length());
    for (Letter a : word) {
        if (a >= subst.size()) throw PreconditionError("apply: letter outside the alphabet");
        const Word& image = subst.rule(a);
        out.insert(out.end(), image.begin(), image.end());
    }
    return out;
}

inline Substitution power(const Substitution& subst, std::size_t n, const Limits& limits = {}) {
    if (n == 0) throw PreconditionError("power: exponent must be positive");
    std::size_t length = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (length > limits.max_word_length / subst.length())
            throw ResourceError("power: image length exceeds the word-length budget");
        length *= subst.length();
    }
    std::vector<Word> rules;
    rules.reserve(subst.size());
    for (Letter a = 0; a < subst.size(); ++a) {
        Word w{a};
        for (std::size_t i = 0; i < n; ++i) w = apply(subst, w, limits);
        rules.push_back(std::move(w));
    }
    return Substitution(subst.alphabet(), std::move(rules));
}

inline CountMatrix incidence_matrix(const Substitution& subst) {
    CountMatrix m(subst.size());
    for (Letter b = 0; b < subst.size(); ++b)
        for (Letter a : subst.rule(b)) m(a, b) += 1;
    return m;
}

// Some power of the letter digraph is complete. Boolean squaring until the
// exponent passes the Wielandt bound (n-1)^2 + 1.
inline bool is_primitive(const Substitution& subst) {
    const std::size_t n = subst.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (Letter a = 0; a < n; ++a)
        for (Letter b : subst.rule(a)) reach[a][b] = true;
    const std::size_t wielandt = (n - 1) * (n - 1) + 1;
    std::size_t exponent = 1;
    while (exponent < wielandt) {
        std::vector<std::vector<bool>> squared(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (!reach[i][l]) continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[l][j]) squared[i][j] = true;
            }
        reach = std::move(squared);
        exponent *= 2;
    }
    for (const auto& row : reach)
        for (bool entry : row)
            if (!entry) return false;
    return true;
}

// A total letter -> letter map; the column maps of a constant-length
// substitution and their compositions.
struct ColumnMap {
    std::vector<Letter> image;

    static ColumnMap identity(std::size_t n) {
        ColumnMap m;
        m.image.resize(n);
        for (std::size_t i = 0; i < n; ++i) m.image[i] = static_cast<Letter>(i);
        return m;
    }

    Letter operator()(Letter a) const { return image[a]; }

    [[nodiscard]] LetterSet apply(const LetterSet& set) const {
        LetterSet out;
        out.reserve(set.size());
        for (Letter a : set) out.push_back(image[a]);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    [[nodiscard]] std::size_t image_size() const {
        LetterSet all(image);
        std::sort(all.begin(), all.end());
        return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
    }

    [[nodiscard]] bool is_constant() const { return image_size() <= 1; }

    friend auto operator<=>(const ColumnMap&, const ColumnMap&) = default;
};

// outer o inner
inline ColumnMap compose(const ColumnMap& outer, const ColumnMap& inner) {
    ColumnMap out;
    out.image.reserve(inner.image.size());
    for (Letter a : inner.image) out.image.push_back(outer(a));
    return out;
}

inline ColumnMap column_map(const Substitution& subst, std::size_t column) {
    if (column >= subst.length()) throw PreconditionError("column_map: column out of range");
    ColumnMap m;
    m.image.reserve(subst.size());
    for (Letter a = 0; a < subst.size(); ++a) m.image.push_back(subst.rule(a)[column]);
    return m;
}

inline std::vector<ColumnMap> column_maps(const Substitution& subst) {
    std::vector<ColumnMap> maps;
    for (std::size_t i = 0; i < subst.length(); ++i) maps.push_back(column_map(subst, i));
    return maps;
}

inline LetterSet full_set(std::size_t n) {
    LetterSet all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Letter>(i);
    return all;
}

// All column sets: the closure of the full alphabet under the column maps,
// in breadth-first discovery order.
struct ColumnFamily {
    std::vector<LetterSet> sets;

    [[nodiscard]] bool contains(const LetterSet& s) const {
        return std::find(sets.begin(), sets.end(), s) != sets.end();
    }
    [[nodiscard]] std::optional<std::size_t> find(const LetterSet& s) const {
        auto it = std::find(sets.begin(), sets.end(), s);
        if (it == sets.end()) return std::nullopt;
        return static_cast<std::size_t>(it - sets.begin());
    }
};

inline ColumnFamily column_sets(const Substitution& subst) {
    const auto maps = column_maps(subst);
    ColumnFamily family;
    std::set<LetterSet> seen;
    std::deque<LetterSet> queue;
    LetterSet all = full_set(subst.size());
    seen.insert(all);
    queue.push_back(all);
    while (!queue.empty()) {
        LetterSet current = std::move(queue.front());
        queue.pop_front();
        for (const auto& m : maps) {
            LetterSet next = m.apply(current);
            if (seen.insert(next).second) queue.push_back(next);
        }
        family.sets.push_back(std::move(current));
    }
    return family;
}

inline bool has_coincidence(const Substitution& subst) {
    const auto family = column_sets(subst);
    return std::any_of(family.sets.begin(), family.sets.end(), [](const LetterSet& s) { return s.size() == 1; });
}

struct FixedPointSeed {
    Letter seed = 0;
    std::size_t period = 1;
};

// Least letter lying on a cycle of a -> first letter of phi(a), and the
// length of that cycle.
inline FixedPointSeed fixed_point_seed(const Substitution& subst) {
    const std::size_t n = subst.size();
    for (Letter a = 0; a < n; ++a) {
        Letter b = a;
        for (std::size_t step = 1; step <= n; ++step) {
            b = subst.rule(b).front();
            if (b == a) return {a, step};
        }
    }
    throw InternalError("fixed_point_seed: first-letter map has no cycle");
}

// First n letters of the one-sided fixed point of phi^p that starts with the
// seed letter (see fixed_point_seed).
inline Word fixed_point_prefix(const Substitution& subst, std::size_t n_symbols, const Limits& limits = {}) {
    if (!is_primitive(subst)) throw PreconditionError("fixed_point_prefix: substitution is not primitive");
    if (subst.length() < 2) throw PreconditionError("fixed_point_prefix: length must be at least 2");
    if (n_symbols == 0) throw PreconditionError("fixed_point_prefix: need at least one symbol");
    if (n_symbols > limits.max_word_length) throw ResourceError("fixed_point_prefix: prefix exceeds budget");
    const auto [seed, period] = fixed_point_seed(subst);
    Word w{seed};
    while (w.size() < n_symbols) {
        for (std::size_t i = 0; i < period; ++i) {
            const std::size_t needed = (n_symbols + subst.length() - 1) / subst.length();
            if (w.size() > needed) w.resize(needed);
            w = apply(subst, w, limits);
        }
    }
    w.resize(n_symbols);
    return w;
}

} // namespace subac
