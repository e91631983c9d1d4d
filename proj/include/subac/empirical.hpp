#pragma once

// Finite-window estimates on orbits of a fixed point: mismatch densities
// (one-sided averages standing in for the Besicovitch pseudometric and its
// pair-filtered variant), greedy separated sets over a grid of scales, and the
// log-log slope that approximates amorphic complexity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <vector>

#include "subac/core.hpp"
#include "subac/discrepancy.hpp"
#include "subac/errors.hpp"
#include "subac/invariants.hpp"

namespace subac {

// Orbit points T^i x are the windows prefix[i .. i + window).
struct OrbitSample {
    Word prefix;
    std::vector<std::size_t> offsets;
    std::size_t window = 0;
};

inline OrbitSample orbit_sample(const Substitution& subst, std::size_t m_points, std::size_t window_n,
                                const Limits& limits = {}) {
    OrbitSample s;
    s.window = window_n;
    s.prefix = fixed_point_prefix(subst, window_n + m_points, limits);
    s.offsets.resize(m_points);
    for (std::size_t i = 0; i < m_points; ++i) s.offsets[i] = i;
    return s;
}

namespace detail {

inline double density(std::span<const Letter> x, std::span<const Letter> y, const MaximalPairSet* filter) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n == 0) return 0.0;
    std::size_t count = 0;
    if (filter == nullptr) {
        for (std::size_t p = 0; p < n; ++p) count += x[p] != y[p] ? 1 : 0;
    } else {
        for (std::size_t p = 0; p < n; ++p)
            if (x[p] != y[p] && filter->contains(LetterPair::of(x[p], y[p]))) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(n);
}

} // namespace detail

// Fraction of the window where the orbit points at offsets i and j differ;
// with a filter, only differences forming a pair of the filter count.
inline double mismatch_density(const OrbitSample& sample, std::size_t i, std::size_t j,
                               const MaximalPairSet* pair_filter = nullptr) {
    if (i + sample.window > sample.prefix.size() || j + sample.window > sample.prefix.size())
        throw PreconditionError("mismatch_density: offset outside the sample");
    const std::span<const Letter> all(sample.prefix);
    return detail::density(all.subspan(i, sample.window), all.subspan(j, sample.window), pair_filter);
}

struct SeparationProfile {
    std::vector<double> nu_grid;      // decreasing
    std::vector<std::size_t> counts;  // separated-set size per grid value
    double slope = std::numeric_limits<double>::quiet_NaN();
    double fit_nu_high = 0.0;         // fitted sub-range of the grid, inclusive
    double fit_nu_low = 0.0;
};

// Geometric grid with ratio 1/sqrt(2) from nu_max down to nu_min.
inline std::vector<double> nu_grid(double nu_max = 0.25, double nu_min = 0.004) {
    if (!(nu_max > 0.0 && nu_max <= 1.0 && nu_min > 0.0 && nu_min <= nu_max))
        throw PreconditionError("nu grid: need 0 < nu_min <= nu_max <= 1");
    std::vector<double> grid;
    const double ratio = 1.0 / std::sqrt(2.0);
    for (double nu = nu_max; nu >= nu_min * (1.0 - 1e-12); nu *= ratio) grid.push_back(nu);
    return grid;
}

inline constexpr std::uint64_t default_comparison_cap = std::uint64_t{1} << 38;

// Greedy separated sets on the orbit points: a point is kept when its
// mismatch density to every point kept so far is at least nu.
inline SeparationProfile separation_profile(const Substitution& subst, std::size_t m_points, std::size_t window_n,
                                            std::vector<double> grid,
                                            std::uint64_t comparison_cap = default_comparison_cap,
                                            const Limits& limits = {}) {
    if (!is_primitive(subst)) throw PreconditionError("separation_profile: substitution is not primitive");
    if (m_points < 32) throw PreconditionError("separation_profile: need at least 32 points");
    if (window_n < 1024) throw PreconditionError("separation_profile: window must be at least 1024");
    const double comparisons = static_cast<double>(m_points) * static_cast<double>(m_points) * static_cast<double>(window_n);
    if (comparisons > static_cast<double>(comparison_cap))
        throw ResourceError("separation_profile: M^2 * N exceeds the comparison cap");
    if (!std::is_sorted(grid.begin(), grid.end(), std::greater<>()))
        throw PreconditionError("separation_profile: nu grid must be decreasing");

    const OrbitSample sample = orbit_sample(subst, m_points, window_n, limits);
    const std::size_t m = m_points;
    std::vector<double> dist(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            dist[i * m + j] = dist[j * m + i] = mismatch_density(sample, sample.offsets[i], sample.offsets[j]);

    SeparationProfile profile;
    profile.nu_grid = std::move(grid);
    std::vector<std::size_t> kept;
    for (double nu : profile.nu_grid) {
        kept.clear();
        for (std::size_t i = 0; i < m; ++i) {
            const bool separated =
                std::all_of(kept.begin(), kept.end(), [&](std::size_t j) { return dist[i * m + j] >= nu; });
            if (separated) kept.push_back(i);
        }
        profile.counts.push_back(kept.size());
    }
    return profile;
}

// Least-squares slope of log(count) against -log(nu) over the middle 60% of
// the grid points with count >= 2.
inline double fit_slope(SeparationProfile& profile) {
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < profile.counts.size(); ++i)
        if (profile.counts[i] >= 2) usable.push_back(i);
    if (usable.size() < 4) throw EstimationError("fit_slope: fewer than 4 usable grid points");
    const std::size_t trim = usable.size() / 5;
    const std::vector<std::size_t> used(usable.begin() + static_cast<std::ptrdiff_t>(trim),
                                        usable.end() - static_cast<std::ptrdiff_t>(trim));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i : used) {
        const double x = -std::log(profile.nu_grid[i]);
        const double y = std::log(static_cast<double>(profile.counts[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(used.size());
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) throw EstimationError("fit_slope: degenerate grid");
    profile.slope = (n * sxy - sx * sy) / denom;
    profile.fit_nu_high = profile.nu_grid[used.front()];
    profile.fit_nu_low = profile.nu_grid[used.back()];
    return profile.slope;
}

struct DensityRow {
    std::size_t i = 0;
    std::size_t j = 0;
    double d1 = 0.0;
    double ds = 0.0;
};

struct LipschitzProbe {
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    std::size_t pairs_used = 0;
    std::size_t monotonicity_violations = 0; // ratio dropped by more than 0.05 after one application of phi
    std::vector<DensityRow> rows;
};

// Ratio of the maximal-pair density to the plain mismatch density over
// random pairs of orbit points of the pure base.
inline LipschitzProbe lipschitz_ratio_probe(const Substitution& subst, std::size_t samples,
                                            std::size_t window_n = std::size_t{1} << 14,
                                            std::uint64_t seed = default_seed, const Limits& limits = {}) {
    const auto report = classify(subst, limits);
    if (report.finite_system || !report.discrete_spectrum)
        throw PreconditionError("lipschitz_ratio_probe: needs an infinite system with discrete spectrum");
    const Substitution& base = report.pure_base;
    const MaximalPairSet& s = report.maximal_pairs;
    const std::size_t k = base.length();
    const std::size_t short_window = std::max<std::size_t>(1, window_n / k);

    const Word prefix = fixed_point_prefix(base, 4 * window_n, limits);
    const std::span<const Letter> all(prefix);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> offset(0, prefix.size() - window_n);

    LipschitzProbe probe;
    for (std::size_t attempt = 0; probe.pairs_used < samples && attempt < 100 * samples; ++attempt) {
        const std::size_t i = offset(rng), j = offset(rng);
        const double d1 = detail::density(all.subspan(i, window_n), all.subspan(j, window_n), nullptr);
        if (d1 < 0.01) continue;
        const double ds = detail::density(all.subspan(i, window_n), all.subspan(j, window_n), &s);
        const double ratio = ds / d1;
        probe.min_ratio = std::min(probe.min_ratio, ratio);
        probe.max_ratio = std::max(probe.max_ratio, ratio);
        probe.rows.push_back({i, j, d1, ds});
        ++probe.pairs_used;

        // one application of phi to the shorter windows at the same offsets
        const auto xs = all.subspan(i, short_window);
        const auto ys = all.subspan(j, short_window);
        const double d1_short = detail::density(xs, ys, nullptr);
        if (d1_short > 0.0) {
            const double before = detail::density(xs, ys, &s) / d1_short;
            const Word fx = apply(base, xs, limits), fy = apply(base, ys, limits);
            const double d1_after = detail::density(fx, fy, nullptr);
            const double after = d1_after > 0.0 ? detail::density(fx, fy, &s) / d1_after : before;
            if (after < before - 0.05) ++probe.monotonicity_violations;
        }
    }
    return probe;
}

inline void write_profile_csv(std::ostream& out, const SeparationProfile& profile) {
    const auto precision = out.precision(12);
    out << "nu,count\n";
    for (std::size_t i = 0; i < profile.nu_grid.size(); ++i) out << profile.nu_grid[i] << ',' << profile.counts[i] << '\n';
    out.precision(precision);
}

inline void write_density_csv(std::ostream& out, const std::vector<DensityRow>& rows) {
    const auto precision = out.precision(12);
    out << "i,j,d1,ds\n";
    for (const auto& r : rows) out << r.i << ',' << r.j << ',' << r.d1 << ',' << r.ds << '\n';
    out.precision(precision);
}

} // namespace subac
