#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "subac/discrepancy.hpp"
#include "subac/invariants.hpp"

using namespace subac;
namespace fx = subac::fixtures;

namespace {

const double golden = (1.0 + std::sqrt(5.0)) / 2.0;

std::string rules_text(const Substitution& s, const GeneralSubstitution& g) {
    std::string out;
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (p > 0) out += "; ";
        out += render_pair(s.alphabet(), g.pairs()[p]) + "->" + render_pair_word(s.alphabet(), g, g.rule(p));
    }
    return out;
}

} // namespace

TEST(LetterPair, NormalizesOrder) {
    EXPECT_EQ(LetterPair::of(2, 0), (LetterPair{0, 2}));
    EXPECT_THROW(LetterPair::of(1, 1), PreconditionError);
}

TEST(GeneralSubstitution, LexicographicIndex) {
    const GeneralSubstitution g(4, std::vector<PairWord>(6));
    for (std::size_t p = 0; p < g.size(); ++p) EXPECT_EQ(g.index_of(g.pairs()[p]), p);
    EXPECT_EQ(g.pairs()[3], (LetterPair{1, 2}));
}

TEST(GeneralSubstitution, ErasingIsPropagationFixedPoint) {
    // 0 -> eps, 1 -> 0 0, 2 -> 1 2 : erasing {0, 1}
    const GeneralSubstitution g(3, {{}, {0, 0}, {1, 2}});
    EXPECT_EQ(g.erasing(), (std::vector<bool>{true, true, false}));
}

TEST(DiscrepancySubstitution, Examples) {
    const auto e1 = fx::make(fx::e1);
    EXPECT_EQ(rules_text(e1, discrepancy_substitution(e1)), "(ab)->(ac); (ac)->(bc); (bc)->(ac)(bc)");
    const auto e6 = fx::make(fx::e6);
    EXPECT_EQ(rules_text(e6, discrepancy_substitution(e6)), "(01)->(01)(02); (02)->(02); (12)->(12)(02)");
    const auto eq = fx::make(fx::equal_images);
    const auto g = discrepancy_substitution(eq);
    EXPECT_EQ(rules_text(eq, g), "(ab)->ε");
    EXPECT_EQ(g.erasing(), std::vector<bool>{true});
}

TEST(DiscrepancySubstitution, PureBaseOfHeightTwo) {
    const auto e4 = fx::make(fx::e4);
    const auto g = discrepancy_substitution(e4);
    const auto base = pure_base(e4).pure_base;
    EXPECT_EQ(rules_text(base, g), "(01,02)->(01,02)(01,02)");
}

TEST(DiscrepancyRate, Examples) {
    const auto t1 = discrepancy_rate_type(fx::make(fx::e1));
    EXPECT_NEAR(t1.rate, golden, 1e-9);
    EXPECT_EQ(t1.degree, 0u);
    const auto t2 = discrepancy_rate_type(fx::make(fx::e2));
    EXPECT_NEAR(t2.rate, 3.0, 1e-9);
    EXPECT_EQ(t2.degree, 0u);
    const auto t3 = discrepancy_rate_type(fx::make(fx::e3));
    EXPECT_NEAR(t3.rate, 2.0, 1e-9);
    EXPECT_EQ(t3.degree, 1u);
    const auto t4 = discrepancy_rate_type(fx::make(fx::e4));
    EXPECT_NEAR(t4.rate, 2.0, 1e-9);
    EXPECT_NEAR(unpurified_rate(fx::make(fx::e4)), 3.0, 1e-9);
}

TEST(DiscrepancyRate, CriticalPolynomial) {
    EXPECT_EQ(polynomial_text(analyze_discrepancy(fx::make(fx::e1)).critical_polynomial), "t^2 - t - 1");
    EXPECT_EQ(polynomial_text(analyze_discrepancy(fx::make(fx::equal_images)).critical_polynomial), "t");
}

TEST(MaximalPairs, Examples) {
    const auto s2 = maximal_growth_pairs(fx::make(fx::e2));
    EXPECT_EQ(s2.pairs, (std::vector<LetterPair>{{0, 1}, {0, 2}}));
    EXPECT_EQ(maximal_growth_pairs(fx::make(fx::e3)).pairs.size(), 3u);
    EXPECT_EQ(maximal_growth_pairs(fx::make(fx::e5)).pairs.size(), 3u);
    EXPECT_TRUE(maximal_growth_pairs(fx::make(fx::equal_images)).pairs.empty());
}

// Per-pair growth of E3 against closed forms of its pair recurrences:
// u_{n+1} = 2 u_n + 2^n, u_0 = 1 for (ab) and (ac); v_n = 2^n for (bc).
TEST(PairGrowth, ThreeLetterDegreeOneExample) {
    const auto e3 = fx::make(fx::e3);
    const auto a = analyze_discrepancy(e3);
    const auto rules = oracle::spell(a.base.pure_base);
    const std::vector<std::pair<char, char>> pairs{{'A', 'B'}, {'A', 'C'}, {'B', 'C'}};
    for (std::size_t n = 0; n <= 5; ++n) {
        const std::size_t p2 = std::size_t{1} << n;
        const std::size_t u = p2 + n * p2 / 2;
        const std::size_t counts[3] = {u, u, p2};
        for (std::size_t p = 0; p < 3; ++p) {
            const auto x = oracle::iterate(rules, std::string(1, pairs[p].first), n);
            const auto y = oracle::iterate(rules, std::string(1, pairs[p].second), n);
            EXPECT_EQ(oracle::differences(x, y), counts[p]) << "pair " << p << " n=" << n;
        }
    }
    EXPECT_EQ(a.pair_growth[0].degree, 1u);
    EXPECT_EQ(a.pair_growth[1].degree, 1u);
    EXPECT_EQ(a.pair_growth[2].degree, 0u);
    for (const auto& g : a.pair_growth) EXPECT_NEAR(g.rate, 2.0, 1e-9);
}

// |phi_s^n(pair)| counts the differing positions of phi'^n on that pair.
TEST(PairGrowth, LengthsCountDifferences) {
    std::vector<Substitution> inputs;
    for (const auto& ex : fx::all_examples()) inputs.push_back(fx::make(ex.rules));
    std::mt19937_64 rng(default_seed + 1);
    for (int i = 0; i < 30; ++i) inputs.push_back(random_primitive_substitution(rng, 4, 3));
    for (const auto& s : inputs) {
        const auto base = pure_base(s).pure_base;
        const auto g = pair_substitution(base);
        const auto rules = oracle::spell(base);
        for (std::size_t p = 0; p < g.size(); ++p) {
            PairWord w{p};
            for (std::size_t n = 1; n <= 5; ++n) {
                w = g.apply(w);
                const auto x = oracle::iterate(rules, std::string(1, static_cast<char>('A' + g.pairs()[p].lo)), n);
                const auto y = oracle::iterate(rules, std::string(1, static_cast<char>('A' + g.pairs()[p].hi)), n);
                EXPECT_EQ(w.size(), oracle::differences(x, y));
            }
        }
    }
}

TEST(DiscrepancyRate, ExtremesAndTransitivityOnRandomInputs) {
    std::mt19937_64 rng(default_seed + 2);
    for (int i = 0; i < 100; ++i) {
        const auto s = random_primitive_substitution(rng, 4, 4);
        const auto a = analyze_discrepancy(s);
        const double r = a.type.rate;
        EXPECT_TRUE(r == 0.0 || (r >= 1.0 - 1e-9 && r <= static_cast<double>(s.length()) + 1e-9));
        for (const auto& p : a.maximal_pairs.pairs)
            for (Letter c = 0; c < s.size(); ++c) {
                if (c == p.lo || c == p.hi) continue;
                EXPECT_TRUE(a.maximal_pairs.contains(LetterPair::of(p.lo, c)) ||
                            a.maximal_pairs.contains(LetterPair::of(p.hi, c)));
            }
    }
}
