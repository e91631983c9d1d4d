#pragma once

#include <string>
#include <utility>
#include <vector>

#include "subac/core.hpp"

namespace subac::fixtures {

using Rules = std::vector<std::pair<std::string, std::string>>;

inline const Rules e1{{"a", "aac"}, {"b", "acc"}, {"c", "aab"}};
inline const Rules e2{{"a", "baac"}, {"b", "bbca"}, {"c", "bcba"}};
inline const Rules e3{{"a", "aaac"}, {"b", "abbb"}, {"c", "accb"}};
inline const Rules e4{{"0", "010"}, {"1", "102"}, {"2", "201"}};
inline const Rules e5{{"0", "0012"}, {"1", "1012"}, {"2", "2012"}};
inline const Rules e6{{"0", "00012"}, {"1", "12012"}, {"2", "20012"}};
inline const Rules thue_morse{{"a", "ab"}, {"b", "ba"}};
inline const Rules period_doubling{{"a", "ab"}, {"b", "aa"}};
inline const Rules equal_images{{"a", "ab"}, {"b", "ab"}};

inline Substitution make(const Rules& rules) { return Substitution::from_compact(rules); }

struct Named {
    std::string name;
    Rules rules;
};

inline std::vector<Named> all_examples() {
    return {{"E1", e1}, {"E2", e2}, {"E3", e3}, {"E4", e4}, {"E5", e5},
            {"E6", e6}, {"TM", thue_morse}, {"PD", period_doubling}};
}

} // namespace subac::fixtures
