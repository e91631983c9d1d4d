#pragma once

// Nonnegative integer matrices: strongly connected components of the growth
// digraph, Perron roots of the components and per-index growth types.
//
// Convention: entry (r, c) counts occurrences of letter r in the image of
// letter c, so column sums are image lengths. The growth digraph has an edge
// c -> r whenever entry (r, c) is positive ("r occurs in the image of c").

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "subac/errors.hpp"

namespace subac {

using BigInt = boost::multiprecision::cpp_int;

// Absolute tolerance for comparing growth rates.
inline constexpr double rate_tolerance = 1e-9;

class CountMatrix {
public:
    CountMatrix() = default;
    explicit CountMatrix(std::size_t order) : order_(order), entries_(order * order) {}

    CountMatrix(std::initializer_list<std::initializer_list<long>> rows) : CountMatrix(rows.size()) {
        std::size_t r = 0;
        for (const auto& row : rows) {
            if (row.size() != order_) throw PreconditionError("CountMatrix: rows must form a square array");
            std::size_t c = 0;
            for (long value : row) {
                if (value < 0) throw PreconditionError("CountMatrix: entries must be nonnegative");
                (*this)(r, c++) = value;
            }
            ++r;
        }
    }

    static CountMatrix identity(std::size_t order) {
        CountMatrix m(order);
        for (std::size_t i = 0; i < order; ++i) m(i, i) = 1;
        return m;
    }

    [[nodiscard]] std::size_t order() const noexcept { return order_; }

    BigInt& operator()(std::size_t r, std::size_t c) { return entries_[r * order_ + c]; }
    const BigInt& operator()(std::size_t r, std::size_t c) const { return entries_[r * order_ + c]; }

    [[nodiscard]] BigInt column_sum(std::size_t c) const {
        BigInt sum = 0;
        for (std::size_t r = 0; r < order_; ++r) sum += (*this)(r, c);
        return sum;
    }

    // Maximum absolute column sum.
    [[nodiscard]] BigInt norm1() const {
        BigInt best = 0;
        for (std::size_t c = 0; c < order_; ++c) best = std::max(best, column_sum(c));
        return best;
    }

    // Principal submatrix on the given indices, in the given order.
    [[nodiscard]] CountMatrix restricted(std::span<const std::size_t> indices) const {
        CountMatrix sub(indices.size());
        for (std::size_t r = 0; r < indices.size(); ++r)
            for (std::size_t c = 0; c < indices.size(); ++c) sub(r, c) = (*this)(indices[r], indices[c]);
        return sub;
    }

    friend CountMatrix operator*(const CountMatrix& a, const CountMatrix& b) {
        if (a.order_ != b.order_) throw PreconditionError("CountMatrix: order mismatch in product");
        CountMatrix out(a.order_);
        for (std::size_t i = 0; i < a.order_; ++i)
            for (std::size_t l = 0; l < a.order_; ++l) {
                const BigInt& ail = a(i, l);
                if (ail == 0) continue;
                for (std::size_t j = 0; j < a.order_; ++j) out(i, j) += ail * b(l, j);
            }
        return out;
    }

    friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

private:
    std::size_t order_ = 0;
    std::vector<BigInt> entries_;
};

inline CountMatrix matrix_power(const CountMatrix& m, std::size_t n) {
    CountMatrix result = CountMatrix::identity(m.order());
    CountMatrix base = m;
    while (n > 0) {
        if (n & 1U) result = result * base;
        n >>= 1U;
        if (n > 0) base = base * base;
    }
    return result;
}

struct Component {
    std::vector<std::size_t> indices; // ascending
    double radius = 0.0;
    bool has_edge = false;            // some edge inside the component (incl. a self-loop)
};

// SCCs of the growth digraph, listed in a topological order of the
// condensation: every condensation edge goes from a lower to a higher
// component number.
struct ComponentDecomposition {
    std::vector<Component> components;
    std::vector<std::size_t> component_of;
    std::vector<std::vector<std::size_t>> successors; // condensation edges, deduplicated, ascending
};

// Perron root of the principal submatrix on a strongly connected index set.
//
// Power iteration runs on (B + I), which is primitive for irreducible B, and
// stops once the Collatz-Wielandt bounds min_i (Bv)_i/v_i <= rho <= max_i
// (Bv)_i/v_i are closer than 1e-11 (relative to rho when rho > 1).
inline double spectral_radius(const CountMatrix& m, std::span<const std::size_t> indices) {
    const std::size_t n = indices.size();
    if (n == 0) return 0.0;
    if (n == 1) return m(indices[0], indices[0]).convert_to<double>();

    std::vector<double> shifted(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            shifted[r * n + c] = m(indices[r], indices[c]).convert_to<double>() + (r == c ? 1.0 : 0.0);

    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    std::vector<double> w(n);
    constexpr int max_iterations = 100000;
    for (int iter = 0; iter < max_iterations; ++iter) {
        for (std::size_t r = 0; r < n; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < n; ++c) acc += shifted[r * n + c] * v[c];
            w[r] = acc;
        }
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ratio = w[i] / v[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            total += w[i];
        }
        if (hi - lo <= 1e-11 * std::max(1.0, hi - 1.0)) return 0.5 * (lo + hi) - 1.0;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / total;
    }
    throw InternalError("spectral_radius: power iteration did not converge");
}

inline ComponentDecomposition decompose(const CountMatrix& m) {
    const std::size_t n = m.order();
    // adjacency of the growth digraph: c -> r iff m(r, c) > 0
    std::vector<std::vector<std::size_t>> adjacent(n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r)
            if (m(r, c) > 0) adjacent[c].push_back(r);

    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> found; // reverse topological order
    std::size_t counter = 0;

    std::function<void(std::size_t)> strong_connect = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w : adjacent[v]) {
            if (index[w] == unvisited) {
                strong_connect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::size_t> members;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                members.push_back(w);
            } while (w != v);
            std::sort(members.begin(), members.end());
            found.push_back(std::move(members));
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] == unvisited) strong_connect(v);

    ComponentDecomposition out;
    out.component_of.assign(n, 0);
    out.components.reserve(found.size());
    for (auto it = found.rbegin(); it != found.rend(); ++it) {
        Component comp;
        comp.indices = std::move(*it);
        for (std::size_t v : comp.indices) out.component_of[v] = out.components.size();
        out.components.push_back(std::move(comp));
    }
    out.successors.assign(out.components.size(), {});
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t from = out.component_of[v];
        for (std::size_t w : adjacent[v]) {
            const std::size_t to = out.component_of[w];
            if (to == from) {
                out.components[from].has_edge = true;
            } else {
                detail::ensure(to > from, "decompose: condensation order is not topological");
                out.successors[from].push_back(to);
            }
        }
    }
    for (auto& succ : out.successors) {
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    for (auto& comp : out.components)
        comp.radius = comp.has_edge ? spectral_radius(m, comp.indices) : 0.0;
    return out;
}

struct GrowthType {
    double rate = 0.0;
    std::size_t degree = 0;
};

inline bool same_rate(double a, double b) { return std::abs(a - b) <= rate_tolerance; }

// Three-way comparison on (rate, degree), rates compared with rate_tolerance.
inline int compare(const GrowthType& a, const GrowthType& b) {
    if (!same_rate(a.rate, b.rate)) return a.rate < b.rate ? -1 : 1;
    if (a.degree != b.degree) return a.degree < b.degree ? -1 : 1;
    return 0;
}

inline std::vector<GrowthType> growth_types(const CountMatrix& m, const std::vector<bool>& erasing,
                                            const ComponentDecomposition& dec) {
    const std::size_t comps = dec.components.size();
    // reach_rate[c]: largest radius among components reachable from c
    std::vector<double> reach_rate(comps, 0.0);
    for (std::size_t c = comps; c-- > 0;) {
        double best = dec.components[c].radius;
        for (std::size_t s : dec.successors[c]) best = std::max(best, reach_rate[s]);
        reach_rate[c] = best;
    }
    // For a target rate, the largest number of components of that radius on
    // one condensation path, computed backwards over the topological order.
    auto chain_length = [&](std::size_t start, double target) {
        std::vector<std::size_t> best(comps, 0);
        for (std::size_t c = comps; c-- > start;) {
            std::size_t tail = 0;
            for (std::size_t s : dec.successors[c]) tail = std::max(tail, best[s]);
            best[c] = tail + (same_rate(dec.components[c].radius, target) ? 1 : 0);
        }
        return best[start];
    };

    std::vector<GrowthType> out(m.order());
    std::vector<std::optional<GrowthType>> per_component(comps);
    for (std::size_t v = 0; v < m.order(); ++v) {
        if (v < erasing.size() && erasing[v]) {
            out[v] = GrowthType{0.0, 1};
            continue;
        }
        const std::size_t c = dec.component_of[v];
        if (!per_component[c]) {
            const double rate = reach_rate[c];
            if (rate == 0.0) {
                per_component[c] = GrowthType{0.0, 1};
            } else {
                per_component[c] = GrowthType{rate, chain_length(c, rate) - 1};
            }
        }
        out[v] = *per_component[c];
    }
    return out;
}

inline std::vector<GrowthType> growth_types(const CountMatrix& m, const std::vector<bool>& erasing) {
    return growth_types(m, erasing, decompose(m));
}

// Coefficients of det(tI - A), leading coefficient first, by the
// Faddeev-LeVerrier recursion (all divisions are exact over the integers).
inline std::vector<BigInt> characteristic_polynomial(const CountMatrix& a) {
    const std::size_t n = a.order();
    std::vector<BigInt> coeffs(n + 1);
    coeffs[0] = 1;
    std::vector<BigInt> mk(n * n, 0), amk(n * n, 0);
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A * M_{k-1} + c_{k-1} I   (M_0 = 0)
        std::vector<BigInt> next(n * n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                BigInt acc = amk[i * n + j];
                if (i == j) acc += coeffs[k - 1];
                next[i * n + j] = acc;
            }
        mk = std::move(next);
        BigInt trace = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                BigInt acc = 0;
                for (std::size_t l = 0; l < n; ++l) acc += a(i, l) * mk[l * n + j];
                amk[i * n + j] = acc;
                if (i == j) trace += acc;
            }
        detail::ensure(trace % static_cast<long>(k) == 0, "characteristic_polynomial: inexact division");
        coeffs[k] = -trace / static_cast<long>(k);
    }
    return coeffs;
}

inline BigInt evaluate_polynomial(const std::vector<BigInt>& coeffs, const BigInt& t) {
    BigInt acc = 0;
    for (const auto& c : coeffs) acc = acc * t + c;
    return acc;
}

// "t^2 - t - 1" style rendering, leading coefficient first.
inline std::string polynomial_text(const std::vector<BigInt>& coeffs, const std::string& var = "t") {
    std::ostringstream out;
    const std::size_t degree = coeffs.empty() ? 0 : coeffs.size() - 1;
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const BigInt& c = coeffs[i];
        if (c == 0) continue;
        const std::size_t power = degree - i;
        const BigInt magnitude = c < 0 ? BigInt(-c) : c;
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (magnitude != 1 || power == 0) out << magnitude;
        if (power >= 1) out << var;
        if (power >= 2) out << "^" << power;
    }
    if (first) out << "0";
    return out.str();
}

// If value is within 1e-6 of an integer that is an exact root of the
// polynomial, returns that integer.
inline std::optional<long> integer_root_near(double value, const std::vector<BigInt>& coeffs) {
    const double nearest = std::round(value);
    if (std::abs(nearest - value) > 1e-6) return std::nullopt;
    const long candidate = static_cast<long>(nearest);
    if (evaluate_polynomial(coeffs, BigInt(candidate)) != 0) return std::nullopt;
    return candidate;
}

} // namespace subac
