#pragma once

#include <vector>

#include "ifstype/ifs.hpp"

namespace ifstype::testing {

inline Rat rq(const char* s) { return rat_parse(s); }

// Eleven maps with ratio 1/4 and digits d/16, d in {0..4, 6, 8..12}.
// Small enough to check by hand, rich enough to have a nontrivial
// characteristic closure (12 vectors).  Used as the main fixture.
inline WeightedIFS eleven_map_system() {
    WeightedIFS f;
    f.ratio = rq("1/4");
    const int digits[] = {0, 1, 2, 3, 4, 6, 8, 9, 10, 11, 12};
    const int weights[] = {1, 20, 20, 20, 20, 2, 20, 20, 20, 20, 1};
    for (int d : digits) f.digits.push_back(Rat(d) / 16);
    for (int w : weights) f.probs.push_back(Rat(w) / 164);
    return f;
}

// Ratio 1/2 with digits {0, 1/2}: exact binary subdivision, closure of size 1.
inline WeightedIFS binary_system() {
    WeightedIFS f;
    f.ratio = rq("1/2");
    f.digits = {Rat(0), rq("1/2")};
    f.probs = {rq("1/2"), rq("1/2")};
    return f;
}

// Ratio 1/2 with digits {0, 1/4, 1/2}: genuinely overlapping images,
// closure of size 4.
inline WeightedIFS overlap_system() {
    WeightedIFS f;
    f.ratio = rq("1/2");
    f.digits = {Rat(0), rq("1/4"), rq("1/2")};
    f.probs = {rq("1/3"), rq("1/3"), rq("1/3")};
    return f;
}

} // namespace ifstype::testing
