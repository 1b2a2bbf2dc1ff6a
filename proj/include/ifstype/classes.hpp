#pragma once

#include <cstdint>
#include <vector>

#include "ifstype/net.hpp"

namespace ifstype {

// Strongly connected structure of the child graph on characteristic vectors.
// A component is a loop class when it carries a cycle (equivalently: more
// than one vertex, or a vertex with a self-edge).  The essential class is
// the unique loop class that is closed under taking children; every address
// eventually stays inside a single loop class, and all but countably many
// points land in the essential one.
struct ClassGraph {
    std::vector<std::uint32_t> comp_of;
    std::vector<std::vector<std::uint32_t>> members;       // component -> sorted vertices
    std::vector<bool> is_loop;
    std::vector<std::vector<std::uint32_t>> comp_children; // condensation edges, deduped, no self
    std::uint32_t essential = 0;

    bool in_essential(std::uint32_t v) const { return comp_of[v] == essential; }
};

// Throws Error("NoEssentialClass") / Error("MultipleEssentialClasses") when
// the condensation has no unique absorbing component.
ClassGraph analyze_classes(const Omega& om);

struct PointClass {
    std::uint32_t comp;  // the loop class the address eventually stays in
    bool essential;
    SymbolicPath path;
};

// One entry per address of x (two at interior net endpoints).  Walks until
// the address provably stays in one loop class: either it touches the
// essential class, or its state cycles inside another one.  Throws
// Error("DepthExceeded") if neither happens within depth_cap steps.
std::vector<PointClass> classify(const Omega& om, const ClassGraph& cg, const Rat& x,
                                 std::uint32_t depth_cap = 10000);

} // namespace ifstype
