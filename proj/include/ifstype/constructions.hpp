#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifstype/classes.hpp"
#include "ifstype/dimensions.hpp"
#include "ifstype/ifs.hpp"
#include "ifstype/net.hpp"

namespace ifstype {

// One part of the map partition.  The listed maps (indices into ifs.digits)
// generate their own attractor: a single fixed point for one map, a Cantor
// set for two.  [lo, hi] is its convex hull.
struct Block {
    std::vector<std::size_t> maps;
    Rat lo;
    Rat hi;

    bool singleton() const { return maps.size() == 1; }
};

// A system assembled on the grid S_j(x) = x/R + j/R^2 from a family of
// blocks plus the remaining maps, which all carry one shared weight and
// whose open images avoid every block attractor.
struct Construction {
    std::string kind; // "multipoint" | "multiinterval"
    std::uint32_t grid = 0;
    WeightedIFS ifs;
    std::vector<Block> blocks;
    std::vector<std::size_t> shared; // maps with the shared weight, ascending
};

// Grid systems whose non-essential points are isolated fixed points
// (one per block, at 0, 2/R, ..., 1).  R even, at least 4, else
// Error("ParityError").  block_probs lists one weight per block, ends equal
// and minimal; the shared weight is solved from the total when omitted.
// Weight inconsistencies throw Error("ProbabilityError").
Construction multipoint(std::uint32_t R, const std::vector<Rat>& block_probs,
                        std::optional<Rat> shared_prob = std::nullopt);

// Grid systems whose non-essential points are 0, 1 and a row of Cantor sets
// with hulls [(6i-4)/R, 6i/R].  Requires R = 2 mod 6 and R >= 14, else
// Error("CongruenceError").  block_probs runs left to right: the weight of
// the map at 0, then both weights of each two-map block, then the weight of
// the map at 1-1/R.
Construction multiinterval(std::uint32_t R, const std::vector<Rat>& block_probs,
                           std::optional<Rat> shared_prob = std::nullopt);

// Exact test for the defining property of the shared maps: does the open
// interval (lo, hi) meet the attractor of blocks[b]?
bool tail_meets_interval(const Construction& con, std::size_t b, const Rat& lo, const Rat& hi);

struct RequirementCheck {
    int id = 0; // 1, 2, 4 or 5; the source numbering skips 3
    bool passed = false;
    std::string witness; // failure detail, empty when passed
};

struct RequirementReport {
    std::vector<RequirementCheck> checks;

    bool ok() const;
    const RequirementCheck& check(int id) const; // Error("DomainError") on bad id
};

// The four structural requirements behind the constructions:
//   1. the maps' images cover [0,1];
//   2. every block has one or two maps;
//   4. every map's open image avoids every other block's attractor;
//   5. every non-essential maximal loop class consists of points of some
//      block attractor.
// Check 5 is certified by walking all net intervals whose vector can still
// reach the class and insisting that in-class frames always touch the
// attractor's level cover two generations behind; conjugate frame states
// are merged, so the walk terminates.  `om` must be the closure of con.ifs.
RequirementReport verify_requirements(const Omega& om, const ClassGraph& cg,
                                      const Construction& con, std::size_t budget = 200000);

// Throws Error("RequirementViolation") naming the first failed check.
void require_requirements(const Omega& om, const ClassGraph& cg, const Construction& con,
                          std::size_t budget = 200000);

struct Selection {
    Construction con;
    bool disjoint = false;             // attainable components pairwise separated
    std::vector<std::string> summary;  // one line per component, ascending
};

// Picks block weights for a construction skeleton so that every block's
// dimension set sits strictly above the essential bracket and the sets are
// pairwise disjoint: a geometric schedule (repeated halving below the
// equidistribution weight) with equal ends.  Explicit `targets` override the
// schedule, in which case overlapping components are only flagged, not
// rejected; with the schedule a failed certification throws
// Error("Infeasible").  Certification compares conservative outer brackets
// computed at walk length outer_len.
Selection select_probabilities(const std::string& kind, std::uint32_t R,
                               const std::vector<Rat>& targets = {},
                               std::uint32_t outer_len = 3, std::size_t cap = 4096);

} // namespace ifstype
