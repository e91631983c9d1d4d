#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "subac/invariants.hpp"
#include "subac/structure.hpp"

using namespace subac;
namespace fx = subac::fixtures;

TEST(Height, Examples) {
    EXPECT_EQ(height(fx::make(fx::e4)), 2u);
    EXPECT_EQ(height(fx::make(fx::e1)), 1u);
    EXPECT_EQ(height(fx::make(fx::period_doubling)), 1u);
    EXPECT_EQ(height(fx::make(fx::thue_morse)), 1u);
}

TEST(Height, MatchesPrefixOracle) {
    for (const auto& ex : fx::all_examples()) {
        const auto s = fx::make(ex.rules);
        const auto rules = oracle::to_map(ex.rules);
        const std::string x = s.alphabet().render(fixed_point_prefix(s, 1 << 14));
        EXPECT_EQ(height(s), oracle::height_from_prefix(x, s.length())) << ex.name;
    }
}

TEST(Height, InvariantUnderPowers) {
    for (const auto& ex : fx::all_examples()) {
        const auto s = fx::make(ex.rules);
        for (std::size_t n = 2; n <= 3; ++n) EXPECT_EQ(height(power(s, n)), height(s)) << ex.name << " n=" << n;
    }
}

TEST(Height, RequiresPrimitive) {
    EXPECT_THROW(height(fx::make({{"a", "aa"}, {"b", "bb"}})), PreconditionError);
}

TEST(PureBase, HeightTwoExample) {
    const auto r = pure_base(fx::make(fx::e4));
    EXPECT_EQ(r.height, 2u);
    const auto& b = r.pure_base;
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b.alphabet().tokens(), (std::vector<std::string>{"01", "02"}));
    EXPECT_EQ(b.length(), 3u);
    EXPECT_EQ(b.alphabet().render(b.rule(0)), "01 01 02");
    EXPECT_EQ(b.alphabet().render(b.rule(1)), "01 02 01");
    EXPECT_EQ(height(b), 1u);
}

TEST(PureBase, HeightOneIsIdentity) {
    for (const auto& ex : fx::all_examples()) {
        const auto s = fx::make(ex.rules);
        if (height(s) != 1) continue;
        const auto r = pure_base(s);
        EXPECT_EQ(r.pure_base.rules(), s.rules()) << ex.name;
        EXPECT_EQ(r.pure_base.alphabet().tokens(), s.alphabet().tokens()) << ex.name;
    }
}

TEST(PureBase, DecodedFixedPointReproducesOriginal) {
    std::vector<Substitution> inputs;
    for (const auto& ex : fx::all_examples()) inputs.push_back(fx::make(ex.rules));
    inputs.push_back(fx::make({{"0", "01020"}, {"1", "12010"}, {"2", "20102"}}));
    std::mt19937_64 rng(default_seed);
    for (int i = 0; i < 40; ++i) inputs.push_back(random_primitive_substitution(rng, 4, 4));

    for (const auto& s : inputs) {
        const auto r = pure_base(s);
        EXPECT_EQ(r.pure_base.length(), s.length());
        EXPECT_EQ(height(r.pure_base), 1u);
        const std::size_t blocks = 10000 / r.height + 1;
        const Word y = fixed_point_prefix(r.pure_base, blocks);
        Word flat;
        for (Letter b : y) flat.insert(flat.end(), r.decoding[b].begin(), r.decoding[b].end());
        const Word x = fixed_point_prefix(s, flat.size());
        EXPECT_EQ(flat, x);
    }
}

TEST(Height, PeriodicSystemMayExceedLength) {
    // fixed point (acb)^omega
    const auto s = fx::make({{"a", "ac"}, {"b", "cb"}, {"c", "ba"}});
    EXPECT_EQ(height(s), 3u);
    const auto r = classify(s);
    EXPECT_TRUE(r.finite_system);
    EXPECT_EQ(r.ac, 0.0);
    EXPECT_EQ(r.pure_base.size(), 1u);
}

TEST(Height, MatchesLongPrefixOracleOnRandomInputs) {
    std::mt19937_64 rng(default_seed + 4);
    for (int i = 0; i < 300; ++i) {
        const auto s = random_primitive_substitution(rng, 4, 4);
        const std::string x = s.alphabet().render(fixed_point_prefix(s, 1 << 18));
        EXPECT_EQ(height(s), oracle::height_from_prefix(x, s.length())) << i;
    }
}
