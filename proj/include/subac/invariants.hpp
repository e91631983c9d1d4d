#pragma once

// Headline invariants of a primitive constant-length substitution system:
// amorphic complexity from the discrepancy rate, finiteness and spectrum
// classification, the null/tame verdict, the kernel monoid of column maps and
// the nonconstant arithmetic-progression counts, the column-set graph
// condition, a generator realizing prescribed complexities, and a brute-force
// nullness witness search over finite prefixes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "subac/core.hpp"
#include "subac/discrepancy.hpp"
#include "subac/errors.hpp"
#include "subac/matrices.hpp"
#include "subac/structure.hpp"

namespace subac {

inline double ac_from_rate(double rate, std::size_t k) {
    const double kk = static_cast<double>(k);
    if (rate == 0.0) return 0.0;
    if (same_rate(rate, kk)) return std::numeric_limits<double>::infinity();
    return std::log(kk) / (std::log(kk) - std::log(rate));
}

inline void require_analyzable(const Substitution& subst) {
    if (subst.length() < 2) throw PreconditionError("substitution length must be at least 2");
    if (!is_primitive(subst)) throw PreconditionError("substitution is not primitive");
}

inline double amorphic_complexity(const Substitution& subst, const Limits& limits = {}) {
    require_analyzable(subst);
    return ac_from_rate(discrepancy_rate_type(subst, limits).rate, subst.length());
}

// Finiteness without the spectral route: iterate the levels
// C_{m+1} = { phi_i(B) : B in C_m, 0 <= i < k } starting from {A}; all
// images phi^m(a) agree exactly when some level consists of singletons.
inline bool images_eventually_equal(const Substitution& subst) {
    const auto maps = column_maps(subst);
    std::set<LetterSet> level{full_set(subst.size())};
    std::set<std::set<LetterSet>> seen;
    while (seen.insert(level).second) {
        if (std::all_of(level.begin(), level.end(), [](const LetterSet& s) { return s.size() == 1; })) return true;
        std::set<LetterSet> next;
        for (const auto& set : level)
            for (const auto& m : maps) next.insert(m.apply(set));
        level = std::move(next);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Kernel monoid

struct KernelDescriptor {
    std::vector<ColumnMap> monoid;                  // element 0 is the identity
    std::vector<std::vector<std::size_t>> words;    // shortest column-digit word, most significant first
    std::vector<bool> constant;
    std::vector<std::vector<std::size_t>> successor; // successor[e][r] = index of phi_r o monoid[e]

    [[nodiscard]] std::size_t size() const noexcept { return monoid.size(); }
    [[nodiscard]] std::optional<std::size_t> find(const ColumnMap& m) const {
        auto it = std::find(monoid.begin(), monoid.end(), m);
        if (it == monoid.end()) return std::nullopt;
        return static_cast<std::size_t>(it - monoid.begin());
    }
};

// Column maps of all powers: phi^{m+1}_{j k + r} = phi_r o phi^m_j. The
// kernel of the fixed point x is { tau(x) : tau in the monoid }.
inline KernelDescriptor kernel_monoid(const Substitution& subst) {
    const auto generators = column_maps(subst);
    KernelDescriptor out;
    std::map<ColumnMap, std::size_t> index;
    auto add = [&](ColumnMap m, std::vector<std::size_t> word) {
        auto [it, inserted] = index.emplace(m, out.monoid.size());
        if (inserted) {
            out.constant.push_back(m.is_constant());
            out.monoid.push_back(std::move(m));
            out.words.push_back(std::move(word));
            out.successor.emplace_back();
        }
        return it->second;
    };
    add(ColumnMap::identity(subst.size()), {});
    for (std::size_t e = 0; e < out.monoid.size(); ++e) {
        std::vector<std::size_t> next(generators.size());
        for (std::size_t r = 0; r < generators.size(); ++r) {
            auto word = out.words[e];
            word.push_back(r);
            next[r] = add(compose(generators[r], out.monoid[e]), std::move(word));
        }
        out.successor[e] = std::move(next);
    }
    return out;
}

// d_m for m = 0..m_max: the number of columns j < k^m of phi^m whose column
// map is nonconstant, pushed through the monoid without materializing columns.
inline std::vector<BigInt> nonconstant_ap_counts(const Substitution& subst, std::size_t m_max) {
    if (m_max > 64) throw ResourceError("nonconstant_ap_counts: m_max above 64");
    const auto kernel = kernel_monoid(subst);
    std::vector<BigInt> counts(kernel.size(), 0);
    counts[0] = 1;
    std::vector<BigInt> out;
    for (std::size_t m = 0;; ++m) {
        BigInt d = 0;
        for (std::size_t e = 0; e < kernel.size(); ++e)
            if (!kernel.constant[e]) d += counts[e];
        out.push_back(d);
        if (m == m_max) break;
        std::vector<BigInt> next(kernel.size(), 0);
        for (std::size_t e = 0; e < kernel.size(); ++e) {
            if (counts[e] == 0) continue;
            for (std::size_t s : kernel.successor[e]) next[s] += counts[e];
        }
        counts = std::move(next);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Column-set graph

struct ColumnSetEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    std::size_t label = 0;
};

struct ColumnSetGraph {
    ColumnFamily vertices;
    std::vector<ColumnSetEdge> edges; // k edges per vertex, one per column label
};

inline ColumnSetGraph column_set_graph(const Substitution& subst) {
    ColumnSetGraph g;
    g.vertices = column_sets(subst);
    const auto maps = column_maps(subst);
    for (std::size_t v = 0; v < g.vertices.sets.size(); ++v)
        for (std::size_t j = 0; j < maps.size(); ++j) {
            const auto target = g.vertices.find(maps[j].apply(g.vertices.sets[v]));
            detail::ensure(target.has_value(), "column_set_graph: family not closed");
            g.edges.push_back({v, *target, j});
        }
    return g;
}

// No two distinct cycles through a common vertex among column sets of size
// at least two: every strongly connected part that carries an edge is a
// single simple cycle, parallel edges with different labels counted apart.
inline bool graph_condition(const ColumnSetGraph& g) {
    std::vector<std::size_t> keep; // vertices with |B| >= 2
    std::vector<std::size_t> local(g.vertices.sets.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t v = 0; v < g.vertices.sets.size(); ++v)
        if (g.vertices.sets[v].size() >= 2) {
            local[v] = keep.size();
            keep.push_back(v);
        }
    // multiplicity matrix in growth orientation: edge u -> w adds to entry (w, u)
    CountMatrix m(keep.size());
    for (const auto& e : g.edges) {
        const std::size_t u = local[e.from], w = local[e.to];
        if (u == std::numeric_limits<std::size_t>::max() || w == std::numeric_limits<std::size_t>::max()) continue;
        m(w, u) += 1;
    }
    // Only the SCC structure is needed here; radii come along for free.
    const auto dec = decompose(m);
    for (const auto& comp : dec.components) {
        if (!comp.has_edge) continue;
        BigInt internal_edges = 0;
        for (std::size_t u : comp.indices) {
            BigInt out_degree = 0;
            for (std::size_t w : comp.indices) out_degree += m(w, u);
            if (out_degree != 1) return false;
            internal_edges += out_degree;
        }
        if (internal_edges != comp.indices.size()) return false;
    }
    return true;
}

inline bool graph_condition(const Substitution& subst, const Limits& limits = {}) {
    require_analyzable(subst);
    return graph_condition(column_set_graph(pure_base(subst, limits).pure_base));
}

// ---------------------------------------------------------------------------
// Classification

struct AnalysisReport {
    Alphabet alphabet;
    std::size_t length_k = 0;
    bool primitive = false;
    std::size_t height = 1;
    Substitution pure_base;
    GeneralSubstitution discrepancy;
    double lambda_s = 0.0;
    std::vector<BigInt> lambda_polynomial;
    std::optional<long> lambda_integer;
    std::size_t d_s = 0;
    double ac = 0.0;
    bool finite_system = false;
    bool discrete_spectrum = false;
    bool null_and_tame = false;
    bool graph_condition = false;
    std::string mef;
    MaximalPairSet maximal_pairs;
    std::vector<GrowthType> pair_growth;
    std::optional<double> unpurified_rate; // only reported when height > 1
};

inline AnalysisReport classify(const Substitution& subst, const Limits& limits = {}) {
    require_analyzable(subst);
    const auto analysis = analyze_discrepancy(subst, limits);
    const auto& base = analysis.base.pure_base;
    const std::size_t k = subst.length();

    AnalysisReport r;
    r.alphabet = subst.alphabet();
    r.length_k = k;
    r.primitive = true;
    r.height = analysis.base.height;
    r.pure_base = base;
    r.discrepancy = analysis.substitution;
    r.lambda_s = analysis.type.rate;
    r.d_s = analysis.type.degree;
    r.lambda_polynomial = analysis.critical_polynomial;
    r.lambda_integer = integer_root_near(r.lambda_s, r.lambda_polynomial);
    r.ac = ac_from_rate(r.lambda_s, k);
    r.maximal_pairs = analysis.maximal_pairs;
    r.pair_growth = analysis.pair_growth;
    r.discrete_spectrum = has_coincidence(base);
    r.finite_system = r.lambda_s == 0.0;
    r.graph_condition = graph_condition(column_set_graph(base));
    r.null_and_tame = r.ac == 0.0 || std::abs(r.ac - 1.0) <= rate_tolerance;
    if (r.height > 1) r.unpurified_rate = unpurified_rate(subst);
    r.mef = r.finite_system ? "finite" : "Z_" + std::to_string(k) + " × Z/" + std::to_string(r.height) + "Z";

    // Cross-checks between independent routes.
    detail::ensure(r.finite_system == images_eventually_equal(base),
                   "classify: spectral and combinatorial finiteness disagree");
    detail::ensure((r.ac == 0.0) == r.finite_system, "classify: ac = 0 must match finiteness");
    const bool rate_is_k = same_rate(r.lambda_s, static_cast<double>(k));
    if (rate_is_k)
        detail::ensure(evaluate_polynomial(r.lambda_polynomial, BigInt(k)) == 0,
                       "classify: rate k not confirmed by the characteristic polynomial");
    detail::ensure(rate_is_k == !r.discrete_spectrum, "classify: rate k must match absence of coincidence");
    detail::ensure(std::isinf(r.ac) == rate_is_k, "classify: infinite ac must match rate k");
    detail::ensure(r.graph_condition == (r.lambda_s <= 1.0 + rate_tolerance),
                   "classify: graph condition disagrees with rate <= 1");
    return r;
}

// ---------------------------------------------------------------------------
// Complexity synthesizer

// Binary substitution of length K = k^n with l swap columns followed by
// constant columns (one constant-0 and one constant-1 column when at least
// two remain); its discrepancy rate is l.
inline Substitution synthesize_target_ac(std::size_t k, std::size_t n, std::size_t l, const Limits& limits = {}) {
    if (k < 2 || n < 1) throw PreconditionError("synthesize: need k >= 2 and n >= 1");
    std::size_t K = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (K > limits.max_word_length / k) throw ResourceError("synthesize: k^n exceeds the word-length budget");
        K *= k;
    }
    if (l < 1 || l >= K) throw PreconditionError("synthesize: need 1 <= l < k^n");

    Word zero(K), one(K);
    for (std::size_t c = 0; c < K; ++c) {
        if (c < l) {
            zero[c] = 1;
            one[c] = 0;
        } else {
            const Letter value = (K - l >= 2 && c == l + 1) ? 1 : 0;
            zero[c] = one[c] = value;
        }
    }
    Substitution out(Alphabet({"0", "1"}), {zero, one});

    const auto report = classify(out, limits);
    detail::ensure(report.height == 1, "synthesize: result does not have height 1");
    detail::ensure(same_rate(report.lambda_s, static_cast<double>(l)), "synthesize: discrepancy rate differs from l");
    const double expected = std::log(static_cast<double>(K)) /
                            (std::log(static_cast<double>(K)) - std::log(static_cast<double>(l)));
    detail::ensure(std::abs(report.ac - expected) <= 1e-9 * std::max(1.0, expected),
                   "synthesize: amorphic complexity differs from the target");
    return out;
}

// ---------------------------------------------------------------------------
// Nullness witness oracle

struct NullWitness {
    std::vector<std::size_t> positions; // G, ascending, within [0, window)
    Letter a = 0;
    Letter b = 0;
};

// Searches for G with |G| = t inside [0, window) and letters a != b such that
// every word in {a,b}^t is read along G at some shift of the prefix. A hit
// proves the prefix is not t-null; no hit is only evidence.
inline std::optional<NullWitness> null_witness_search(std::span<const Letter> prefix, std::size_t t,
                                                      std::size_t window) {
    if (t > 3 || window > 32) throw ResourceError("null_witness_search: budget is t <= 3 and window <= 32");
    if (t < 1 || window < t) throw PreconditionError("null_witness_search: need 1 <= t <= window");
    if (prefix.size() < 4 * window) throw PreconditionError("null_witness_search: prefix shorter than 4 * window");

    std::size_t letters = 0;
    for (Letter a : prefix) letters = std::max<std::size_t>(letters, a + 1);
    if (letters < 2) return std::nullopt;

    std::vector<std::size_t> g(t);
    for (std::size_t i = 0; i < t; ++i) g[i] = i;
    std::size_t patterns = 1;
    for (std::size_t i = 0; i < t; ++i) patterns *= letters;

    while (true) {
        std::vector<bool> seen(patterns, false);
        const std::size_t span_end = g.back();
        for (std::size_t s = 0; s + span_end < prefix.size(); ++s) {
            std::size_t code = 0;
            for (std::size_t p : g) code = code * letters + prefix[s + p];
            seen[code] = true;
        }
        for (Letter a = 0; a < letters; ++a)
            for (Letter b = a + 1; b < letters; ++b) {
                bool all = true;
                for (std::size_t mask = 0; mask < (std::size_t{1} << t) && all; ++mask) {
                    std::size_t code = 0;
                    for (std::size_t i = 0; i < t; ++i) code = code * letters + (((mask >> (t - 1 - i)) & 1U) ? b : a);
                    all = seen[code];
                }
                if (all) return NullWitness{g, a, b};
            }
        // next t-subset of [0, window) in lexicographic order
        std::size_t i = t;
        while (i > 0 && g[i - 1] == window - t + (i - 1)) --i;
        if (i == 0) return std::nullopt;
        ++g[i - 1];
        for (std::size_t j = i; j < t; ++j) g[j] = g[j - 1] + 1;
    }
}

// ---------------------------------------------------------------------------
// Seeded random primitive substitutions for cross-validation

inline constexpr std::uint64_t default_seed = 0x5eed5eed2024ULL;

inline Substitution random_primitive_substitution(std::mt19937_64& rng, std::size_t max_letters = 4,
                                                  std::size_t max_length = 4) {
    std::uniform_int_distribution<std::size_t> letters_dist(2, max_letters);
    std::uniform_int_distribution<std::size_t> length_dist(2, max_length);
    const std::size_t n = letters_dist(rng);
    const std::size_t k = length_dist(rng);
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < n; ++i) tokens.push_back(std::string(1, static_cast<char>('a' + i)));
    Alphabet alphabet(tokens);
    std::uniform_int_distribution<Letter> letter_dist(0, static_cast<Letter>(n - 1));
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<Word> rules(n, Word(k));
        for (auto& rule : rules)
            for (auto& a : rule) a = letter_dist(rng);
        Substitution candidate(alphabet, std::move(rules));
        if (is_primitive(candidate)) return candidate;
    }
    throw InternalError("random_primitive_substitution: rejection sampling did not terminate");
}

} // namespace subac
