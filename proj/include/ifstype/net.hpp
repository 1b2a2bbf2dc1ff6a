#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ifstype/ifs.hpp"
#include "ifstype/matrix.hpp"

namespace ifstype {

// Characteristic data of a net interval [a,b] of generation n: the
// normalized length ell = (b-a)/r^n together with the normalized offsets
// (a - S_w(0))/r^n over the generation-n words w whose image contains [a,b],
// as distinct values in increasing order.  Every offset lies in [0, 1-ell].
struct CharVec {
    Rat ell;
    std::vector<Rat> nbrs;

    bool operator==(const CharVec& o) const { return ell == o.ell && nbrs == o.nbrs; }
};

struct CharVecHash {
    std::size_t operator()(const CharVec& v) const;
};

// Display form "(1/4, (0, 1/4, 1/2))".
std::string cv_str(const CharVec& v);

struct RawChild {
    CharVec cv;
    Rat h;       // left endpoint inside the parent frame, parent-generation units
    RatMatrix T; // parent offsets (rows) x child offsets (cols)
};

// Children of a net interval in left-to-right order together with the
// primitive transition matrices.  Depends only on the characteristic data,
// not on which interval realizes it.  Throws Error("TilingFailure") if the
// generation maps fail to cover some child, which cannot happen for a
// validated system.
std::vector<RawChild> derive_children(const WeightedIFS& ifs, const CharVec& parent);

struct ChildEdge {
    std::uint32_t child;   // index into Omega::vecs
    std::uint32_t sibling; // 1-based among same-data children of this parent, left to right
    Rat h;
    RatMatrix T;
};

// Closure of the characteristic data under taking children, discovered
// breadth-first from the generation-0 interval [0,1].  vecs[0] is always
// (1,(0)).  Printed identifiers elsewhere are these indices plus one.
struct Omega {
    WeightedIFS ifs;
    std::vector<CharVec> vecs;
    std::vector<std::vector<ChildEdge>> children;
    std::unordered_map<CharVec, std::uint32_t, CharVecHash> index;

    std::uint32_t index_of(const CharVec& v) const; // Error("UnknownVector") if absent
};

// Throws Error("CapExceeded") if the closure would exceed `cap` vectors,
// which signals a system outside the finite-type regime this code handles.
Omega build_omega(const WeightedIFS& ifs, std::size_t cap = 4096);

struct NetInterval {
    Rat a;
    Rat b;
    std::uint32_t cv;
};

// Streams the generation-n net intervals left to right.  Throws
// Error("CapExceeded") beyond `budget` intervals.
void walk_net_intervals(const Omega& om, std::uint32_t level,
                        const std::function<void(const NetInterval&)>& fn,
                        std::size_t budget = 50000000);

std::vector<NetInterval> net_intervals(const Omega& om, std::uint32_t level,
                                       std::size_t budget = 2000000);

// Address of a point: the chain of child slots leading to the net intervals
// containing it.  cvs[k] is the vector after k steps (cvs[0] = 0, the root),
// edges[k] the slot taken into cvs[k+1].  If the walk state (vector,
// relative position) repeats, `periodic` is set and edges[preperiod ..
// preperiod+period) is the repeating block; edges then stops there even if
// `depth` is larger.
struct SymbolicPath {
    std::vector<std::uint32_t> cvs;
    std::vector<std::uint32_t> edges;
    bool periodic = false;
    std::size_t preperiod = 0;
    std::size_t period = 0;
};

// The one or two addresses of x in [0,1].  Two paths appear exactly when x
// is an interior net-interval endpoint at some generation; the path through
// the left interval comes first.
std::vector<SymbolicPath> symbolic(const Omega& om, const Rat& x, std::uint32_t depth);

} // namespace ifstype
