#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace ifstype {

// Exact arithmetic backbone.  Every geometric quantity in the library
// (digits, endpoints, matrix entries, measures of intervals) is an mpq_class
// rational; floating point appears only in logarithms, spectral radii and
// spectrum sampling.
using Rat = mpq_class;
using Int = mpz_class;

// Parses "a/b" or "a" with optional sign.  Denominator must be positive and
// nonzero.  Throws Error("BadRational") on malformed input.
Rat rat_parse(const std::string& text);

// Serializes canonically as "a/b", or "a" when the denominator is 1.
std::string rat_str(const Rat& q);

inline double rat_double(const Rat& q) { return q.get_d(); }

// Deterministic hash usable for unordered containers keyed by rationals.
std::size_t rat_hash(const Rat& q);

inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
    // boost::hash_combine mixing constant
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t rat_vec_hash(const std::vector<Rat>& v);

} // namespace ifstype
