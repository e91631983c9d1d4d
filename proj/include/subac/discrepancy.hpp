#pragma once

// The discrepancy substitution on unordered pairs of distinct letters: the
// image of {a, b} lists, in position order, the pairs {phi(a)_i, phi(b)_i}
// at the positions i where phi(a) and phi(b) differ.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "subac/core.hpp"
#include "subac/errors.hpp"
#include "subac/matrices.hpp"
#include "subac/structure.hpp"

namespace subac {

struct LetterPair {
    Letter lo = 0;
    Letter hi = 0;

    static LetterPair of(Letter a, Letter b) {
        if (a == b) throw PreconditionError("LetterPair: letters must be distinct");
        return a < b ? LetterPair{a, b} : LetterPair{b, a};
    }

    friend auto operator<=>(const LetterPair&, const LetterPair&) = default;
};

using PairWord = std::vector<std::size_t>; // indices into a pair alphabet

// A possibly erasing, variable-length substitution over letter pairs.
class GeneralSubstitution {
public:
    GeneralSubstitution() = default;

    GeneralSubstitution(std::size_t letters, std::vector<PairWord> rules)
        : letters_(letters), rules_(std::move(rules)) {
        for (Letter a = 0; a < letters_; ++a)
            for (Letter b = a + 1; b < letters_; ++b) pairs_.push_back({a, b});
        if (rules_.size() != pairs_.size()) throw PreconditionError("GeneralSubstitution: one rule per pair");
        for (const auto& rule : rules_)
            for (std::size_t p : rule)
                if (p >= pairs_.size()) throw PreconditionError("GeneralSubstitution: pair index out of range");
        compute_erasing();
    }

    [[nodiscard]] std::size_t letter_count() const noexcept { return letters_; }
    [[nodiscard]] const std::vector<LetterPair>& pairs() const noexcept { return pairs_; }
    [[nodiscard]] const std::vector<PairWord>& rules() const noexcept { return rules_; }
    [[nodiscard]] const PairWord& rule(std::size_t p) const { return rules_.at(p); }
    [[nodiscard]] const std::vector<bool>& erasing() const noexcept { return erasing_; }
    [[nodiscard]] std::size_t size() const noexcept { return pairs_.size(); }

    // Position of {lo, hi} in the lexicographic pair order.
    [[nodiscard]] std::size_t index_of(LetterPair p) const {
        const std::size_t n = letters_;
        const std::size_t lo = p.lo, hi = p.hi;
        return lo * n - lo * (lo + 1) / 2 + (hi - lo - 1);
    }

    [[nodiscard]] PairWord apply(const PairWord& word) const {
        PairWord out;
        for (std::size_t p : word) out.insert(out.end(), rules_[p].begin(), rules_[p].end());
        return out;
    }

    [[nodiscard]] CountMatrix incidence_matrix() const {
        CountMatrix m(pairs_.size());
        for (std::size_t c = 0; c < rules_.size(); ++c)
            for (std::size_t r : rules_[c]) m(r, c) += 1;
        return m;
    }

    friend bool operator==(const GeneralSubstitution& a, const GeneralSubstitution& b) {
        return a.letters_ == b.letters_ && a.rules_ == b.rules_;
    }

private:
    // Least fixed point of "every pair in the image is erasing".
    void compute_erasing() {
        erasing_.assign(pairs_.size(), false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t p = 0; p < rules_.size(); ++p) {
                if (erasing_[p]) continue;
                if (std::all_of(rules_[p].begin(), rules_[p].end(), [&](std::size_t q) { return erasing_[q]; })) {
                    erasing_[p] = true;
                    changed = true;
                }
            }
        }
    }

    std::size_t letters_ = 0;
    std::vector<LetterPair> pairs_;
    std::vector<PairWord> rules_;
    std::vector<bool> erasing_;
};

inline std::string render_pair(const Alphabet& alphabet, LetterPair p) {
    const std::string sep = alphabet.compact() ? "" : ",";
    return "(" + alphabet.token(p.lo) + sep + alphabet.token(p.hi) + ")";
}

inline std::string render_pair_word(const Alphabet& alphabet, const GeneralSubstitution& g, const PairWord& w) {
    if (w.empty()) return "ε";
    std::string out;
    for (std::size_t p : w) out += render_pair(alphabet, g.pairs()[p]);
    return out;
}

// The pair substitution read directly off phi, without purification.
inline GeneralSubstitution pair_substitution(const Substitution& subst) {
    const std::size_t n = subst.size();
    GeneralSubstitution shape(n, std::vector<PairWord>(n * (n - 1) / 2));
    std::vector<PairWord> rules;
    for (const auto& pair : shape.pairs()) {
        const Word& left = subst.rule(pair.lo);
        const Word& right = subst.rule(pair.hi);
        PairWord image;
        for (std::size_t i = 0; i < subst.length(); ++i)
            if (left[i] != right[i]) image.push_back(shape.index_of(LetterPair::of(left[i], right[i])));
        rules.push_back(std::move(image));
    }
    return GeneralSubstitution(n, std::move(rules));
}

struct DiscrepancyType {
    double rate = 0.0;
    std::size_t degree = 0;
};

struct MaximalPairSet {
    std::vector<LetterPair> pairs;

    [[nodiscard]] bool contains(LetterPair p) const {
        return std::find(pairs.begin(), pairs.end(), p) != pairs.end();
    }
};

// Everything derived from the discrepancy substitution of the pure base.
struct DiscrepancyAnalysis {
    PureBaseResult base;
    GeneralSubstitution substitution;
    CountMatrix matrix;
    ComponentDecomposition decomposition;
    std::vector<GrowthType> pair_growth;
    DiscrepancyType type;
    std::vector<BigInt> critical_polynomial; // char. polynomial of a component attaining the rate
    MaximalPairSet maximal_pairs;
};

namespace detail {

// Complement of the maximal pairs must be an equivalence on letters: for
// {a,b} in S and any c, {a,c} or {b,c} is in S.
inline bool is_transitive(const MaximalPairSet& s, std::size_t letters) {
    for (const auto& p : s.pairs)
        for (Letter c = 0; c < letters; ++c) {
            if (c == p.lo || c == p.hi) continue;
            if (!s.contains(LetterPair::of(p.lo, c)) && !s.contains(LetterPair::of(p.hi, c))) return false;
        }
    return true;
}

} // namespace detail

inline DiscrepancyAnalysis analyze_discrepancy(const Substitution& subst, const Limits& limits = {}) {
    DiscrepancyAnalysis out;
    out.base = pure_base(subst, limits);
    out.substitution = pair_substitution(out.base.pure_base);
    out.matrix = out.substitution.incidence_matrix();
    out.decomposition = decompose(out.matrix);
    out.pair_growth = growth_types(out.matrix, out.substitution.erasing(), out.decomposition);

    GrowthType best{0.0, 1};
    for (const auto& g : out.pair_growth)
        if (compare(g, best) > 0) best = g;
    if (best.rate == 0.0) best.degree = out.pair_growth.empty() ? 0 : 1;
    out.type = DiscrepancyType{best.rate, best.degree};

    const double k = static_cast<double>(subst.length());
    detail::ensure(out.type.rate == 0.0 || (out.type.rate >= 1.0 - rate_tolerance && out.type.rate <= k + rate_tolerance),
                   "discrepancy rate outside {0} u [1, k]");

    out.critical_polynomial = {BigInt(1), BigInt(0)}; // t, for an all-erasing substitution
    for (const auto& comp : out.decomposition.components)
        if (comp.has_edge && same_rate(comp.radius, out.type.rate)) {
            out.critical_polynomial = characteristic_polynomial(out.matrix.restricted(comp.indices));
            break;
        }

    if (out.type.rate > 0.0) {
        for (std::size_t p = 0; p < out.substitution.size(); ++p)
            if (same_rate(out.pair_growth[p].rate, out.type.rate)) out.maximal_pairs.pairs.push_back(out.substitution.pairs()[p]);
        detail::ensure(detail::is_transitive(out.maximal_pairs, out.substitution.letter_count()),
                       "maximal growth pairs are not transitive");
    }
    return out;
}

inline GeneralSubstitution discrepancy_substitution(const Substitution& subst, const Limits& limits = {}) {
    if (!is_primitive(subst)) throw PreconditionError("discrepancy_substitution: substitution is not primitive");
    return pair_substitution(pure_base(subst, limits).pure_base);
}

inline DiscrepancyType discrepancy_rate_type(const Substitution& subst, const Limits& limits = {}) {
    return analyze_discrepancy(subst, limits).type;
}

inline MaximalPairSet maximal_growth_pairs(const Substitution& subst, const Limits& limits = {}) {
    return analyze_discrepancy(subst, limits).maximal_pairs;
}

// Dominant eigenvalue of the pair substitution of phi itself. Differs from the
// discrepancy rate when the height exceeds one.
inline double unpurified_rate(const Substitution& subst) {
    const auto g = pair_substitution(subst);
    const auto m = g.incidence_matrix();
    const auto dec = decompose(m);
    double best = 0.0;
    for (const auto& comp : dec.components) best = std::max(best, comp.radius);
    return best;
}

} // namespace subac
