#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ifstype/classes.hpp"

namespace ifstype {

struct Interval {
    double lo = 0;
    double hi = 0;

    bool contains(const Interval& o, double slack = 0) const {
        return lo - slack <= o.lo && o.hi <= hi + slack;
    }
};

// Local dimension of a point whose address was walked to a repeating state:
// log of the spectral radius of the cycle product over period * log(ratio).
// Throws Error("NotPeriodic") if the path carries no cycle.
double periodic_dim(const Omega& om, const SymbolicPath& path);

struct PointDim {
    double dim;
    PointClass cls;
};

// Per-address local dimensions at a rational point.  Addresses of rationals
// always reach a repeating state, so each dimension is a genuine limit.
std::vector<PointDim> local_dims_at(const Omega& om, const ClassGraph& cg, const Rat& x,
                                    std::uint32_t depth_cap = 10000);

struct CycleDim {
    std::uint32_t start;               // anchor vertex
    std::vector<std::uint32_t> edges;  // child slots along the closed walk
    double dim;
};

// Dimensions of the periodic points given by closed walks of length at most
// max_len inside one loop class.  Walks are anchored at their smallest
// vertex; rotations through that vertex may still repeat, which only
// duplicates values.  Throws Error("CapExceeded") past `budget` extensions.
std::vector<CycleDim> cycle_dims(const Omega& om, const ClassGraph& cg, std::uint32_t comp,
                                 std::uint32_t max_len, std::size_t budget = 2000000);

// Hull of the cycle dimensions: a certified subset of the attainable set of
// the loop class.  Throws Error("NoCycles") on an empty list.
Interval inner_bracket(const std::vector<CycleDim>& cycles);

// Certified superset of the attainable set of the loop class.  The lower
// end comes from the largest entry-sum and weighted operator norms over all
// length-L walks, the upper end from the smallest row and column sums; all
// four are one-sided bounds on every longer product, so doubling L never
// widens the bracket.
Interval outer_bracket(const Omega& om, const ClassGraph& cg, std::uint32_t comp, std::uint32_t L,
                       std::size_t budget = 50000000);

// The set of local dimensions attained by points whose address tail stays in
// one loop class.
//
//  Point:     a single vertex with a single self-edge: every tail dimension
//             equals log sp(T) / log r.  Exact closed form when sp(T) is
//             rational (1x1 or triangular T).
//  Interval:  every matrix in the class is 1x1, so walk dimensions are
//             running means of digit weights; the set is exactly the closed
//             interval between the extreme simple-cycle means, endpoints
//             compared in exact arithmetic.
//  Bracketed: anything else; `inner` and `outer` sandwich the set and lo/hi
//             report the conservative outer hull.
struct AttainableSet {
    enum class Kind { Point, Interval, Bracketed };
    Kind kind = Kind::Bracketed;
    double lo = 0;
    double hi = 0;
    std::string lo_expr; // exact closed form, empty when unavailable
    std::string hi_expr;
    Interval inner;
    Interval outer;
};

AttainableSet attainable_set(const Omega& om, const ClassGraph& cg, std::uint32_t comp,
                             std::uint32_t max_cycle_len = 6, std::uint32_t outer_len = 4,
                             std::size_t budget = 2000000);

// Hausdorff dimension of the attractor of a sub-list of maps, valid when
// their open images are pairwise disjoint: log(count)/log(1/ratio).
// Throws Error("OverlapError") otherwise.
double loop_attractor_dim(const WeightedIFS& ifs, const std::vector<std::uint32_t>& block);

} // namespace ifstype
