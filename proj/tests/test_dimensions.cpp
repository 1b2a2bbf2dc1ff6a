#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "ifstype/dimensions.hpp"
#include "ifstype/errors.hpp"

using namespace ifstype;
using namespace ifstype::testing;

TEST_CASE("periodic point dimensions at the fixed endpoints") {
    Omega om = build_omega(eleven_map_system());
    ClassGraph cg = analyze_classes(om);

    auto at0 = local_dims_at(om, cg, Rat(0));
    REQUIRE(at0.size() == 1);
    CHECK(at0[0].dim == doctest::Approx(std::log(164.0) / std::log(4.0)).epsilon(1e-12));

    auto at1 = local_dims_at(om, cg, Rat(1));
    REQUIRE(at1.size() == 1);
    CHECK(at1[0].dim == doctest::Approx(std::log(164.0) / std::log(4.0)).epsilon(1e-12));

    auto half = local_dims_at(om, cg, rq("1/2"));
    REQUIRE(half.size() == 2);
    CHECK(half[0].dim == doctest::Approx(std::log(82.0) / std::log(4.0)).epsilon(1e-12));
    CHECK(std::abs(half[0].dim - half[1].dim) < 1e-12);
}

TEST_CASE("non-periodic prefixes are rejected") {
    Omega om = build_omega(eleven_map_system());
    auto paths = symbolic(om, rq("1/5"), 1);
    REQUIRE(!paths[0].periodic);
    CHECK_THROWS_AS(periodic_dim(om, paths[0]), Error);
}

TEST_CASE("closed-walk dimensions and nested brackets") {
    Omega om = build_omega(eleven_map_system());
    ClassGraph cg = analyze_classes(om);
    std::uint32_t ess = cg.essential;

    auto len1 = cycle_dims(om, cg, ess, 1);
    REQUIRE(len1.size() == 4); // four self-edges on the full vector
    bool has_extreme = false;
    for (const auto& c : len1)
        if (c.dim == doctest::Approx(std::log(164.0 / 40.0) / std::log(4.0)).epsilon(1e-11))
            has_extreme = true;
    CHECK(has_extreme);

    Interval i1 = inner_bracket(len1);
    Interval i3 = inner_bracket(cycle_dims(om, cg, ess, 3));
    Interval i5 = inner_bracket(cycle_dims(om, cg, ess, 5));
    CHECK(i3.contains(i1));
    CHECK(i5.contains(i3));

    Interval o2 = outer_bracket(om, cg, ess, 2);
    Interval o4 = outer_bracket(om, cg, ess, 4);
    Interval o8 = outer_bracket(om, cg, ess, 8);
    CHECK(o2.contains(o4));
    CHECK(o4.contains(o8));

    // inner within outer, with floating slack
    CHECK(o8.contains(i5, 1e-11));

    CHECK(i5.lo > 0.9);
    CHECK(i5.hi < 1.1);

    CHECK_THROWS_AS(cycle_dims(om, cg, ess, 6, 10), Error);          // budget
    CHECK_THROWS_AS(cycle_dims(om, cg, cg.comp_of[0], 3), Error);    // not a loop class
    CHECK_THROWS_AS(inner_bracket({}), Error);
}

TEST_CASE("attainable set: exact points") {
    Omega om = build_omega(eleven_map_system());
    ClassGraph cg = analyze_classes(om);

    AttainableSet left = attainable_set(om, cg, cg.comp_of[1]);
    CHECK(left.kind == AttainableSet::Kind::Point);
    CHECK(left.lo == left.hi);
    CHECK(left.lo == doctest::Approx(std::log(164.0) / std::log(4.0)).epsilon(1e-12));
    CHECK(left.lo_expr == "log(1/164)/(log(1/4))");

    AttainableSet mid = attainable_set(om, cg, cg.comp_of[7]);
    CHECK(mid.kind == AttainableSet::Kind::Point);
    CHECK(mid.lo == doctest::Approx(std::log(82.0) / std::log(4.0)).epsilon(1e-12));
    CHECK(mid.lo_expr == "log(1/82)/(log(1/4))");
}

TEST_CASE("attainable set: exact scalar interval") {
    Omega om = build_omega(binary_system());
    ClassGraph cg = analyze_classes(om);
    AttainableSet s = attainable_set(om, cg, cg.essential);
    CHECK(s.kind == AttainableSet::Kind::Interval);
    CHECK(s.lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.hi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.lo_expr == "log(1/2)/(log(1/2))");
}

TEST_CASE("attainable set: bracketed matrix class") {
    Omega om = build_omega(overlap_system());
    ClassGraph cg = analyze_classes(om);

    // the two-offset vector is the absorbing class
    CHECK(cg.in_essential(2));

    AttainableSet s = attainable_set(om, cg, cg.essential, 4, 4);
    CHECK(s.kind == AttainableSet::Kind::Bracketed);
    // the triangular self-edges give the largest dimension log3/log2
    CHECK(s.inner.hi == doctest::Approx(std::log(3.0) / std::log(2.0)).epsilon(1e-11));
    // the alternating product has radius (3+sqrt 5)/18
    double alt = std::log((3.0 + std::sqrt(5.0)) / 18.0) / (2.0 * std::log(0.5));
    CHECK(s.inner.lo == doctest::Approx(alt).epsilon(1e-11));
    CHECK(s.outer.contains(s.inner, 1e-11));

    // the flanking single-offset classes are exact points
    AttainableSet flank = attainable_set(om, cg, cg.comp_of[1]);
    CHECK(flank.kind == AttainableSet::Kind::Point);
    CHECK(flank.lo_expr == "log(1/3)/(log(1/2))");
}

TEST_CASE("block attractor dimensions") {
    WeightedIFS f = eleven_map_system();
    CHECK(loop_attractor_dim(f, {0}) == doctest::Approx(0.0));
    CHECK(loop_attractor_dim(f, {0, 4}) == doctest::Approx(0.5).epsilon(1e-12)); // digits 0 and 1/4
    CHECK(loop_attractor_dim(f, {0, 4, 8}) == doctest::Approx(std::log(3.0) / std::log(4.0)).epsilon(1e-12));
    CHECK_THROWS_AS(loop_attractor_dim(f, {0, 1}), Error);   // adjacent digits overlap
    CHECK_THROWS_AS(loop_attractor_dim(f, {0, 99}), Error);  // bad index
    CHECK_THROWS_AS(loop_attractor_dim(f, {}), Error);
}
