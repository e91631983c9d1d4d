#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "subac/empirical.hpp"

using namespace subac;
namespace fx = subac::fixtures;

namespace {

SeparationProfile synthetic(std::vector<double> nu, std::vector<std::size_t> counts) {
    SeparationProfile p;
    p.nu_grid = std::move(nu);
    p.counts = std::move(counts);
    return p;
}

} // namespace

TEST(MismatchDensity, BasicCases) {
    const auto e5 = fx::make(fx::e5);
    const auto sample = orbit_sample(e5, 64, 2048);
    EXPECT_EQ(mismatch_density(sample, 7, 7), 0.0);
    EXPECT_THROW(mismatch_density(sample, 0, 65), PreconditionError);

    OrbitSample alternating;
    alternating.window = 100;
    for (std::size_t i = 0; i < 101; ++i) alternating.prefix.push_back(static_cast<Letter>(i % 2));
    EXPECT_EQ(mismatch_density(alternating, 0, 1), 1.0);
}

TEST(MismatchDensity, KernelSequenceAgainstConstant) {
    // y = g(x) with g: 0->0, 1->2, 2->0 differs from 0^omega exactly where x
    // has the letter 1, whose frequency is 1/4.
    const auto e6 = fx::make(fx::e6);
    const std::size_t n = 78125; // 5^7
    const Word x = fixed_point_prefix(e6, n);
    OrbitSample s;
    s.window = n;
    for (Letter a : x) s.prefix.push_back(a == 1 ? 2 : 0);
    s.prefix.resize(2 * n, 0);
    const std::size_t zero_offset = n; // a window of 0^omega
    std::fill(s.prefix.begin() + static_cast<std::ptrdiff_t>(n), s.prefix.end(), 0);
    EXPECT_NEAR(mismatch_density(s, 0, zero_offset), 0.25, 0.02);
}

TEST(MismatchDensity, SymmetricAndNearlyTriangular) {
    const auto e1 = fx::make(fx::e1);
    const auto sample = orbit_sample(e1, 40, 4096);
    const auto pairs = maximal_growth_pairs(e1);
    const double slack = 2.0 / 4096.0;
    for (std::size_t i = 0; i < 40; i += 3)
        for (std::size_t j = 0; j < 40; j += 5) {
            EXPECT_EQ(mismatch_density(sample, i, j), mismatch_density(sample, j, i));
            EXPECT_LE(mismatch_density(sample, i, j, &pairs), mismatch_density(sample, i, j));
            for (std::size_t k = 0; k < 40; k += 7)
                EXPECT_LE(mismatch_density(sample, i, k),
                          mismatch_density(sample, i, j) + mismatch_density(sample, j, k) + slack);
        }
}

TEST(NuGrid, DefaultShape) {
    const auto g = nu_grid();
    ASSERT_EQ(g.size(), 12u);
    EXPECT_DOUBLE_EQ(g.front(), 0.25);
    EXPECT_NEAR(g[1], 0.1767767, 1e-6);
    EXPECT_GE(g.back(), 0.004);
    EXPECT_THROW(nu_grid(0.1, 0.2), PreconditionError);
}

TEST(FitSlope, ExactLines) {
    auto one = synthetic({0.5, 0.25, 0.125, 0.0625}, {4, 8, 16, 32});
    EXPECT_NEAR(fit_slope(one), 1.0, 1e-12);
    auto two = synthetic({0.5, 0.25, 0.125, 0.0625}, {4, 16, 64, 256});
    EXPECT_NEAR(fit_slope(two), 2.0, 1e-12);
    auto flat = synthetic({0.5, 0.25, 0.125, 0.0625}, {5, 5, 5, 5});
    EXPECT_NEAR(fit_slope(flat), 0.0, 1e-12);
}

TEST(FitSlope, TooFewPoints) {
    auto p = synthetic({0.5, 0.25, 0.125, 0.0625}, {1, 1, 2, 4});
    EXPECT_THROW(fit_slope(p), EstimationError);
}

TEST(SeparationProfile, CountsMonotoneAndBounded) {
    const auto e1 = fx::make(fx::e1);
    const auto p = separation_profile(e1, 64, 2048, nu_grid());
    for (std::size_t i = 0; i + 1 < p.counts.size(); ++i) EXPECT_LE(p.counts[i], p.counts[i + 1]);
    for (std::size_t c : p.counts) EXPECT_LE(c, 64u);
}

TEST(SeparationProfile, GreedySetsAreMaximal) {
    // Re-run the packing by hand at one scale and check every rejected point
    // lies within nu of a kept one.
    const auto e2 = fx::make(fx::e2);
    const auto sample = orbit_sample(e2, 48, 2048);
    const double nu = 0.1;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < 48; ++i) {
        bool far = true;
        for (std::size_t j : kept) far = far && mismatch_density(sample, i, j) >= nu;
        if (far) kept.push_back(i);
    }
    for (std::size_t i = 0; i < 48; ++i) {
        if (std::find(kept.begin(), kept.end(), i) != kept.end()) continue;
        bool near = false;
        for (std::size_t j : kept) near = near || mismatch_density(sample, i, j) < nu;
        EXPECT_TRUE(near) << i;
    }
    const auto p = separation_profile(e2, 48, 2048, {nu});
    EXPECT_EQ(p.counts.front(), kept.size());
}

TEST(SeparationProfile, FiniteSystemStaysBounded) {
    const auto eq = fx::make(fx::equal_images);
    const auto p = separation_profile(eq, 64, 2048, nu_grid());
    for (std::size_t c : p.counts) EXPECT_LE(c, 2u);
}

TEST(SeparationProfile, Preconditions) {
    const auto e1 = fx::make(fx::e1);
    EXPECT_THROW(separation_profile(e1, 16, 2048, nu_grid()), PreconditionError);
    EXPECT_THROW(separation_profile(e1, 64, 512, nu_grid()), PreconditionError);
    EXPECT_THROW(separation_profile(e1, 1024, 8192, nu_grid(), 1u << 20), ResourceError);
    EXPECT_THROW(separation_profile(e1, 64, 2048, {0.01, 0.1}), PreconditionError);
}

TEST(SeparationProfile, NullExampleSlopeNearOne) {
    auto p = separation_profile(fx::make(fx::e5), 256, 8192, nu_grid());
    EXPECT_NEAR(fit_slope(p), 1.0, 0.25);
}

TEST(SeparationProfile, SlopeStableUnderDoubling) {
    auto base = separation_profile(fx::make(fx::e5), 256, 8192, nu_grid());
    auto doubled = separation_profile(fx::make(fx::e5), 512, 16384, nu_grid());
    EXPECT_LT(std::abs(fit_slope(base) - fit_slope(doubled)), 0.15);
}

TEST(LipschitzProbe, RatiosBoundedAndPositive) {
    const auto probe = lipschitz_ratio_probe(fx::make(fx::e2), 64);
    EXPECT_EQ(probe.pairs_used, 64u);
    EXPECT_LE(probe.max_ratio, 1.0 + 1e-12);
    EXPECT_GE(probe.min_ratio, 0.05);
    for (const auto& r : probe.rows) EXPECT_LE(r.ds, r.d1);
}

TEST(LipschitzProbe, AllPairsMaximalGivesRatioOne) {
    const auto probe = lipschitz_ratio_probe(fx::make(fx::e5), 16);
    EXPECT_DOUBLE_EQ(probe.min_ratio, 1.0);
    EXPECT_DOUBLE_EQ(probe.max_ratio, 1.0);
}

TEST(LipschitzProbe, RejectsInfiniteComplexity) {
    EXPECT_THROW(lipschitz_ratio_probe(fx::make(fx::thue_morse), 8), PreconditionError);
}

TEST(Csv, Headers) {
    std::ostringstream a, b;
    write_profile_csv(a, synthetic({0.5}, {3}));
    EXPECT_EQ(a.str(), "nu,count\n0.5,3\n");
    write_density_csv(b, {{1, 2, 0.5, 0.25}});
    EXPECT_EQ(b.str(), "i,j,d1,ds\n1,2,0.5,0.25\n");
}
