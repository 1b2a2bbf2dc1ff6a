#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ifstype/rational.hpp"

namespace ifstype {

// Equicontractive iterated function system on [0,1] with probability weights:
// maps S_j(x) = ratio*x + digits[j], all sharing one contraction ratio.
//
// The analysis modules additionally assume the validated form: maps send
// [0,1] into itself, the union of images is all of [0,1] (digits start at 0,
// end at 1-ratio, consecutive gaps at most ratio), weights are positive and
// sum to 1, and the two end maps carry the minimal weight.
struct WeightedIFS {
    Rat ratio;
    std::vector<Rat> digits;
    std::vector<Rat> probs;

    std::size_t size() const { return digits.size(); }

    Rat apply(std::size_t j, const Rat& x) const { return ratio * x + digits[j]; }
};

struct Violation {
    std::string code;   // HullViolation | SupportGap | ProbabilitySum | StandardAssumptionViolation
    std::size_t index;  // offending map index (0 when global)
    std::string detail;
};

// Collects every violated invariant; empty means valid.
std::vector<Violation> check(const WeightedIFS& ifs);

// Throws Error with the first violation's code, message listing all of them.
void validate(const WeightedIFS& ifs);

// A word is a sequence of map indices, applied leftmost-outermost:
// S_w = S_{w[0]} o S_{w[1]} o ... o S_{w[n-1]}.
using Word = std::vector<std::uint32_t>;

struct WordGeometry {
    Rat offset; // S_w(0)
    Rat scale;  // ratio^n
    Rat weight; // product of the probabilities along the word
};

WordGeometry compose(const WeightedIFS& ifs, const Word& w);

} // namespace ifstype
