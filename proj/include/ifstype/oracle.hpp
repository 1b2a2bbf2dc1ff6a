#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ifstype/ifs.hpp"
#include "ifstype/rational.hpp"

namespace ifstype {

// Brute-force refinements of the self-similar measure, independent of the
// transition-matrix machinery, for cross-checking dimensions and spectra.
//
// The measure satisfies mu = sum_j p_j mu o S_j^{-1}.  Iterating n times
// from a unit mass at 0 leaves an atom of weight p_sigma at S_sigma(0) for
// every length-n word sigma.  A level-n atom stands in for mass spread over
// an interval of length ratio^n to its right, so queries widen their windows
// by one atom diameter.
struct DiscreteMeasure {
    std::uint32_t level = 0;
    std::vector<std::pair<Rat, Rat>> atoms; // (position, weight), sorted, positions distinct

    Rat total() const;
};

// Exact level-n refinement.  budget caps the raw atom count fed into any
// one merge (atoms times maps); exceeding it raises Budget.
DiscreteMeasure refine(const WeightedIFS& f, std::uint32_t n, std::size_t budget = 50000000);

// Exact mass the level-n refinement gives the closed interval [lo, hi].
// Runs the measure recursion backwards on the window instead of enumerating
// atoms, so deep levels stay cheap: the subproblems at each level are the
// few pulled-back windows that still cut [0,1] partially.  budget caps the
// count of distinct subproblems.
Rat window_mass(const WeightedIFS& f, std::uint32_t n, const Rat& lo, const Rat& hi,
                std::size_t budget = 10000000);

struct DepthRange {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;

    bool unset() const { return lo == 0 && hi == 0; }
};

// {6, 12} for subdivision up to 6, {4, 7} beyond: finer subdivision
// multiplies the per-level work, so dense systems stop earlier.
DepthRange default_depths(const WeightedIFS& f);

// Least-squares slope over the depth range, with the sampled points kept
// for reporting.  spread is the largest deviation of a single-step slope
// from the fitted one, a crude error bar on the extrapolation.
struct SlopeEstimate {
    double value = 0;
    double spread = 0;
    std::vector<std::pair<double, double>> points; // (log scale, log measured value)
};

// Local dimension estimate at x: slope of log mu_n([x - w, x + w]) against
// log w for w = 2 ratio^n (query radius ratio^n widened by one atom
// diameter), n over the depth range.  Raises InsufficientMass when some
// window carries no mass, which under the validated assumptions means x
// lies outside [0, 1].
SlopeEstimate empirical_local_dim(const WeightedIFS& f, const Rat& x, DepthRange depths = {},
                                  std::size_t budget = 10000000);

// L^q estimate: slope of log sum_Delta mu_n(Delta)^q against log ratio^n,
// where Delta runs over the level-n net intervals carrying positive level-n
// mass (negative q would otherwise hit empty cells whose true mass the
// level-n atoms have not reached yet).  Materializes the level-n atoms on
// their common denominator grid; budget caps the grid cell count.  A
// defaulted depth range drops levels whose grid exceeds the budget; an
// explicit range is taken literally and may raise Budget.
std::vector<SlopeEstimate> empirical_lq(const WeightedIFS& f, const std::vector<double>& qs,
                                        DepthRange depths = {}, std::size_t budget = 200000000);
SlopeEstimate empirical_lq(const WeightedIFS& f, double q, DepthRange depths = {},
                           std::size_t budget = 200000000);

} // namespace ifstype
