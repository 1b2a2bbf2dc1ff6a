#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "ifstype/classes.hpp"
#include "ifstype/errors.hpp"

using namespace ifstype;
using namespace ifstype::testing;

namespace {

// Hand-built graph for exercising the absorbing-class checks without
// needing a real system behind it.
Omega forged(std::vector<std::vector<std::uint32_t>> children) {
    Omega om;
    for (std::size_t v = 0; v < children.size(); ++v) {
        CharVec c;
        c.ell = Rat(1) / Rat(long(v) + 1);
        c.nbrs = {Rat(0)};
        om.vecs.push_back(c);
        std::vector<ChildEdge> edges;
        for (std::uint32_t ch : children[v]) {
            RatMatrix t(1, 1);
            t.at(0, 0) = 1;
            edges.push_back(ChildEdge{ch, 1, Rat(0), t});
        }
        om.children.push_back(std::move(edges));
    }
    return om;
}

} // namespace

TEST_CASE("eleven-map class structure") {
    Omega om = build_omega(eleven_map_system());
    ClassGraph cg = analyze_classes(om);

    // every component is a single vector here
    REQUIRE(cg.members.size() == 12);
    for (const auto& mem : cg.members) CHECK(mem.size() == 1);

    std::set<std::uint32_t> loops;
    for (std::uint32_t v = 0; v < 12; ++v)
        if (cg.is_loop[cg.comp_of[v]]) loops.insert(v);
    CHECK(loops == std::set<std::uint32_t>{1, 4, 7, 8, 11});

    CHECK(cg.in_essential(4));
    for (std::uint32_t v : {0u, 1u, 7u, 8u, 11u}) CHECK(!cg.in_essential(v));

    // the essential class is a condensation sink
    CHECK(cg.comp_children[cg.essential].empty());
    // the root reaches everything, so its component has children
    CHECK(!cg.comp_children[cg.comp_of[0]].empty());
}

TEST_CASE("degenerate condensations are rejected") {
    // two absorbing self-loops
    CHECK_THROWS_WITH_AS(analyze_classes(forged({{1, 2}, {1}, {2}})), doctest::Contains("2 absorbing"),
                         Error);
    // a sink with no cycle (impossible for real systems, still diagnosed)
    CHECK_THROWS_AS(analyze_classes(forged({{1}, {}})), Error);
}

TEST_CASE("points settle into loop classes") {
    Omega om = build_omega(eleven_map_system());
    ClassGraph cg = analyze_classes(om);

    auto at0 = classify(om, cg, Rat(0));
    REQUIRE(at0.size() == 1);
    CHECK(at0[0].comp == cg.comp_of[1]);
    CHECK(!at0[0].essential);

    auto at1 = classify(om, cg, Rat(1));
    REQUIRE(at1.size() == 1);
    CHECK(at1[0].comp == cg.comp_of[11]);

    auto half = classify(om, cg, rq("1/2"));
    REQUIRE(half.size() == 2);
    CHECK(half[0].comp == cg.comp_of[7]);
    CHECK(half[1].comp == cg.comp_of[8]);
    CHECK(!half[0].essential);

    auto fifth = classify(om, cg, rq("1/5"));
    REQUIRE(fifth.size() == 1);
    CHECK(fifth[0].essential);
    CHECK(fifth[0].comp == cg.essential);
}

TEST_CASE("classification depth cap") {
    Omega om = build_omega(eleven_map_system());
    ClassGraph cg = analyze_classes(om);
    // 1/(5*4^6) rides the leftmost vector for six steps before settling
    Rat x = Rat(1) / (5 * 4096);
    CHECK_THROWS_AS(classify(om, cg, x, 3), Error);
    auto full = classify(om, cg, x, 100);
    REQUIRE(full.size() == 1);
    CHECK(full[0].essential);
}
