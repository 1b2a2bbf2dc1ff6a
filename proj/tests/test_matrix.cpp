#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "ifstype/errors.hpp"
#include "ifstype/matrix.hpp"

using namespace ifstype;
using namespace ifstype::testing;

namespace {

RatMatrix mk(std::uint32_t r, std::uint32_t c, std::vector<Rat> entries) {
    RatMatrix m(r, c);
    m.a = std::move(entries);
    return m;
}

} // namespace

TEST_CASE("exact products and norms") {
    // (1/164) [[2,20],[0,1]] squared
    RatMatrix t = mk(2, 2, {rq("2/164"), rq("20/164"), rq("0"), rq("1/164")});
    RatMatrix sq = product(t, t);
    CHECK(sq == mk(2, 2, {rq("4/26896"), rq("60/26896"), rq("0"), rq("1/26896")}));

    CHECK(entry_sum_norm(t) == rq("23/164"));
    CHECK(min_row_sum(t) == rq("1/164"));
    CHECK(max_row_sum(t) == rq("22/164"));

    RatMatrix wide = mk(2, 3, {Rat(1), Rat(2), Rat(3), Rat(4), Rat(5), Rat(6)});
    CHECK_THROWS_AS(product(wide, wide), Error);

    std::vector<const RatMatrix*> path{&t, &t, &t};
    CHECK(product(path) == product(sq, t));
    CHECK_THROWS_AS(product(std::vector<const RatMatrix*>{}), Error);
}

TEST_CASE("norms bound products both ways") {
    RatMatrix t1 = mk(2, 2, {rq("2/164"), rq("20/164"), rq("0"), rq("1/164")});
    RatMatrix t2 = mk(2, 2, {rq("1/164"), rq("0"), rq("20/164"), rq("2/164")});
    RatMatrix p = product(t1, t2);
    CHECK(entry_sum_norm(p) <= entry_sum_norm(t1) * entry_sum_norm(t2));
    CHECK(min_row_sum(p) >= min_row_sum(t1) * min_row_sum(t2));
}

TEST_CASE("characteristic polynomial is exact") {
    RatMatrix t = mk(2, 2, {Rat(2), Rat(20), Rat(0), Rat(1)});
    CHECK(char_poly(t) == std::vector<Rat>{Rat(1), Rat(-3), Rat(2)});

    RatMatrix rot = mk(3, 3, {Rat(0), Rat(1), Rat(0),
                              Rat(0), Rat(0), Rat(1),
                              Rat(1), Rat(0), Rat(0)});
    CHECK(char_poly(rot) == std::vector<Rat>{Rat(1), Rat(0), Rat(0), Rat(-1)}); // t^3 - 1

    RatMatrix a = mk(2, 2, {rq("1/2"), rq("1/3"), rq("1/5"), rq("1/7")});
    // trace 9/14, det 1/14 - 1/15 = 1/210
    CHECK(char_poly(a) == std::vector<Rat>{Rat(1), rq("-9/14"), rq("1/210")});
}

TEST_CASE("spectral radius: exact cases") {
    SpectralRadius one = spectral_radius(mk(1, 1, {rq("1/164")}));
    CHECK(one.exact);
    CHECK(*one.exact_value == rq("1/164"));

    SpectralRadius tri = spectral_radius(mk(2, 2, {rq("2/164"), rq("20/164"), rq("0"), rq("1/164")}));
    CHECK(tri.exact);
    CHECK(*tri.exact_value == rq("2/164"));

    SpectralRadius low = spectral_radius(mk(2, 2, {rq("1/164"), rq("0"), rq("20/164"), rq("2/164")}));
    CHECK(low.exact);
    CHECK(*low.exact_value == rq("2/164"));
}

TEST_CASE("spectral radius: iterated and reducible cases") {
    // permutation matrix: eigenvalues on the unit circle, radius exactly 1
    RatMatrix rot = mk(3, 3, {Rat(0), Rat(1), Rat(0),
                              Rat(0), Rat(0), Rat(1),
                              Rat(1), Rat(0), Rat(0)});
    CHECK(spectral_radius(rot).value == doctest::Approx(1.0).epsilon(1e-11));

    // reducible with the dominant class in the middle of the matrix
    RatMatrix t1 = mk(4, 4, {rq("1/164"), Rat(0),      Rat(0),      Rat(0),
                             rq("20/164"), rq("20/164"), rq("20/164"), rq("20/164"),
                             rq("20/164"), Rat(0),      rq("2/164"),  Rat(0),
                             rq("1/164"),  rq("20/164"), rq("20/164"), rq("20/164")});
    CHECK(spectral_radius(t1).value == doctest::Approx(rat_double(rq("40/164"))).epsilon(1e-11));

    // 2x2 with known quadratic: roots of t^2 - t - 1, radius the golden ratio
    RatMatrix fib = mk(2, 2, {Rat(1), Rat(1), Rat(1), Rat(0)});
    CHECK(spectral_radius(fib).value == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-11));

    CHECK_THROWS_AS(spectral_radius(mk(2, 2, {Rat(1), Rat(-1), Rat(0), Rat(1)})), Error);
    CHECK_THROWS_AS(spectral_radius(mk(2, 3, {Rat(1), Rat(1), Rat(1), Rat(1), Rat(1), Rat(1)})), Error);
}
