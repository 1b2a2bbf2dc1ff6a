#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "ifstype/constructions.hpp"
#include "ifstype/errors.hpp"
#include "ifstype/oracle.hpp"
#include "ifstype/spectra.hpp"

using namespace ifstype;
using namespace ifstype::testing;

namespace {

std::vector<Rat> probs_over(std::vector<long> nums, long den) {
    std::vector<Rat> out;
    for (long n : nums) {
        Rat q(n, den);
        q.canonicalize();
        out.push_back(q);
    }
    return out;
}

WeightedIFS point_system() {
    return multipoint(4, probs_over({1, 2, 1}, 164)).ifs;
}

WeightedIFS interval_system() {
    return multiinterval(14, probs_over({1, 3, 3, 7, 5, 1}, 1150)).ifs;
}

DiscreteMeasure push_once(const WeightedIFS& f, const DiscreteMeasure& m) {
    std::map<Rat, Rat> acc;
    for (const auto& [pos, w] : m.atoms)
        for (std::size_t j = 0; j < f.size(); ++j) acc[f.apply(j, pos)] += w * f.probs[j];
    DiscreteMeasure out;
    out.level = m.level + 1;
    out.atoms.assign(acc.begin(), acc.end());
    return out;
}

std::map<Rat, Rat> enumerate_words(const WeightedIFS& f, std::uint32_t n) {
    std::map<Rat, Rat> expect;
    Word w(n, 0);
    while (true) {
        WordGeometry geo = compose(f, w);
        expect[geo.offset] += geo.weight;
        std::size_t i = 0;
        while (i < n && ++w[i] == f.size()) {
            w[i] = 0;
            ++i;
        }
        if (i == n) break;
    }
    return expect;
}

} // namespace

TEST_CASE("refinement atoms match direct word enumeration") {
    WeightedIFS f = point_system();
    for (std::uint32_t n : {0u, 1u, 2u, 3u, 4u}) {
        DiscreteMeasure m = refine(f, n);
        CHECK(m.level == n);
        CHECK(m.total() == Rat(1));
        std::map<Rat, Rat> expect = enumerate_words(f, n);
        REQUIRE(m.atoms.size() == expect.size());
        std::size_t i = 0;
        for (const auto& [pos, w] : expect) {
            CHECK(m.atoms[i].first == pos);
            CHECK(m.atoms[i].second == w);
            ++i;
        }
    }

    WeightedIFS g = interval_system();
    DiscreteMeasure m2 = refine(g, 2);
    std::map<Rat, Rat> expect2 = enumerate_words(g, 2);
    REQUIRE(m2.atoms.size() == expect2.size());
    CHECK(m2.total() == Rat(1));
    for (const auto& [pos, w] : m2.atoms) {
        auto it = expect2.find(pos);
        REQUIRE(it != expect2.end());
        CHECK(it->second == w);
    }
}

TEST_CASE("one more refinement level equals one pushforward step") {
    WeightedIFS f = point_system();
    DiscreteMeasure prev = refine(f, 0);
    for (std::uint32_t n = 1; n <= 7; ++n) {
        DiscreteMeasure direct = refine(f, n);
        DiscreteMeasure pushed = push_once(f, prev);
        REQUIRE(direct.atoms.size() == pushed.atoms.size());
        for (std::size_t i = 0; i < direct.atoms.size(); ++i) {
            CHECK(direct.atoms[i].first == pushed.atoms[i].first);
            CHECK(direct.atoms[i].second == pushed.atoms[i].second);
        }
        prev = std::move(direct);
    }
}

TEST_CASE("refinement level one lists one atom per distinct digit") {
    WeightedIFS f = point_system();
    DiscreteMeasure m = refine(f, 1);
    REQUIRE(m.atoms.size() == 11);
    for (std::size_t j = 0; j < f.size(); ++j) {
        CHECK(m.atoms[j].first == f.digits[j]);
        CHECK(m.atoms[j].second == f.probs[j]);
    }
    for (std::size_t i = 1; i < m.atoms.size(); ++i)
        CHECK(m.atoms[i - 1].first < m.atoms[i].first);
    CHECK(m.atoms.front().first >= 0);
    CHECK(m.atoms.back().first < 1);
}

TEST_CASE("refinement respects its raw atom budget") {
    CHECK_THROWS_WITH_AS(refine(interval_system(), 6, 1000000), doctest::Contains("Budget"),
                         Error);
}

TEST_CASE("window masses agree exactly with atom sums") {
    WeightedIFS f = point_system();
    DiscreteMeasure m = refine(f, 5);
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> num(-8, 40);
    for (int t = 0; t < 200; ++t) {
        Rat a(num(rng), 32);
        Rat b(num(rng), 32);
        a.canonicalize();
        b.canonicalize();
        if (b < a) std::swap(a, b);
        Rat direct(0);
        for (const auto& [pos, w] : m.atoms)
            if (a <= pos && pos <= b) direct += w;
        CHECK(window_mass(f, 5, a, b) == direct);
    }
}

TEST_CASE("window mass grows with the window at fixed level") {
    WeightedIFS f = interval_system();
    Rat x(1, 3);
    Rat prev(-1);
    for (long k = 1; k <= 20; ++k) {
        Rat w(k, 100);
        Rat mass = window_mass(f, 6, x - w, x + w);
        CHECK(mass >= prev);
        prev = mass;
    }
    CHECK(window_mass(f, 6, Rat(0), Rat(1)) == Rat(1));
    CHECK(window_mass(f, 6, Rat(2), Rat(3)) == Rat(0));
}

TEST_CASE("local dimension estimates at the marked points") {
    WeightedIFS f = point_system();
    const double log4 = std::log(4.0);

    SlopeEstimate left = empirical_local_dim(f, Rat(0));
    CHECK(left.value == doctest::Approx(std::log(164.0) / log4).epsilon(1e-6));
    CHECK(left.spread < 1e-6);
    CHECK(left.points.size() == 7);

    SlopeEstimate right = empirical_local_dim(f, Rat(1));
    CHECK(right.value == doctest::Approx(std::log(164.0) / log4).epsilon(1e-6));

    SlopeEstimate mid = empirical_local_dim(f, Rat(1, 2));
    CHECK(mid.value == doctest::Approx(std::log(82.0) / log4).epsilon(0.05));

    // a point of the leftover set: estimate falls inside the attainable band
    for (const Rat& x : {Rat(1, 3), Rat(2, 3)}) {
        SlopeEstimate ess = empirical_local_dim(f, x);
        CHECK(ess.value > 0.983436074);
        CHECK(ess.value < 1.017811955);
    }

    CHECK_THROWS_WITH_AS(empirical_local_dim(f, Rat(5, 4)), doctest::Contains("InsufficientMass"),
                         Error);
    CHECK_THROWS_WITH_AS(empirical_local_dim(f, Rat(-1, 10)),
                         doctest::Contains("InsufficientMass"), Error);
    CHECK_THROWS_WITH_AS(empirical_local_dim(f, Rat(0), DepthRange{5, 5}),
                         doctest::Contains("DomainError"), Error);
}

TEST_CASE("local dimension estimates for the interval example") {
    WeightedIFS f = interval_system();
    SlopeEstimate left = empirical_local_dim(f, Rat(0));
    CHECK(left.value == doctest::Approx(std::log(1150.0) / std::log(14.0)).epsilon(1e-6));
    SlopeEstimate mid = empirical_local_dim(f, Rat(1, 2));
    CHECK(mid.value > 0.9666);
    CHECK(mid.value < 1.038);
    CHECK(default_depths(f).lo == 4);
    CHECK(default_depths(f).hi == 7);
    CHECK(default_depths(point_system()).lo == 6);
    CHECK(default_depths(point_system()).hi == 12);
}

TEST_CASE("partition sum slopes against closed forms") {
    WeightedIFS f = point_system();
    std::vector<SlopeEstimate> est = empirical_lq(f, {0.0, 1.0, -0.63, 2.0});
    REQUIRE(est.size() == 4);
    CHECK(est[0].value == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(std::abs(est[1].value) < 1e-9);
    // grid value at q = -0.63 tracks the steepest block line there
    CHECK(est[2].value ==
          doctest::Approx(-0.63 * std::log(164.0) / std::log(4.0)).epsilon(0.01));
    CHECK(est[3].value > 0.9);
    CHECK(est[3].value < 1.05);
    for (const SlopeEstimate& e : est) CHECK(e.points.size() == 7);
}

TEST_CASE("partition sum slopes stay inside the assembled band") {
    Construction con = multiinterval(14, probs_over({1, 3, 3, 7, 5, 1}, 1150));
    std::vector<SlopeEstimate> est = empirical_lq(con.ifs, {0.0, 1.0, -0.63}, DepthRange{4, 6});
    CHECK(est[0].value == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(std::abs(est[1].value) < 1e-9);

    Omega om = build_omega(con.ifs);
    ClassGraph cg = analyze_classes(om);
    SpectrumCurve curve = tau_mu(om, cg, con, {}, 3, 4);
    double q = -0.63;
    double upper = curve.envelope->upper(q);
    double lower = curve.envelope->lower(q);
    for (const TauComponent& c : curve.components) {
        upper = std::min(upper, c.tau(q));
        lower = std::min(lower, c.tau(q));
    }
    CHECK(est[2].value > lower - 0.1);
    CHECK(est[2].value < upper + 0.1);
}

TEST_CASE("partition grids over budget error out or trim by default") {
    WeightedIFS f = interval_system();
    CHECK_THROWS_WITH_AS(empirical_lq(f, 0.0, DepthRange{4, 7}, 1000000),
                         doctest::Contains("Budget"), Error);
    std::vector<SlopeEstimate> trimmed = empirical_lq(f, std::vector<double>{0.0});
    CHECK(trimmed[0].points.size() == 3); // depth 7 grid exceeds the default budget
    CHECK_THROWS_WITH_AS(empirical_lq(f, 0.0, DepthRange{}, 1000), doctest::Contains("Budget"),
                         Error);
}
