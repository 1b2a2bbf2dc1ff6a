#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "ifstype/errors.hpp"
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

Construction interval_example() {
    return multiinterval(14, probs_over({1, 3, 3, 7, 5, 1}, 1150));
}

TauComponent component(std::string name, std::vector<long> nums, long den, std::uint32_t R) {
    TauComponent c;
    c.name = std::move(name);
    c.probs = probs_over(std::move(nums), den);
    c.R = R;
    return c;
}

} // namespace

TEST_CASE("closed-form spectra of the interval-example blocks") {
    TauComponent k0 = component("K_0", {1}, 1150, 14);
    TauComponent k1 = component("K_1", {3, 3}, 1150, 14);
    TauComponent k2 = component("K_2", {7, 5}, 1150, 14);

    const double log14 = std::log(14.0);

    CHECK(k0.tau(2.0) == doctest::Approx(-std::log(std::pow(1.0 / 1150, 2.0)) / log14).epsilon(1e-12));
    CHECK(k0.tau(0.0) == 0.0);
    CHECK(k1.tau(0.0) == doctest::Approx(-std::log(2.0) / log14).epsilon(1e-14));
    CHECK(k1.tau(1.0) == doctest::Approx(-std::log(6.0 / 1150) / log14).epsilon(1e-12));
    CHECK(k2.tau(0.0) == doctest::Approx(-std::log(2.0) / log14).epsilon(1e-14));
    CHECK(k2.tau(0.0) == doctest::Approx(-k2.dim()).epsilon(1e-14));

    // concave and strictly increasing on random triples
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    for (int t = 0; t < 1000; ++t) {
        double a = U(rng), b = U(rng);
        if (a > b) std::swap(a, b);
        if (b - a < 1e-6) continue;
        double m = 0.5 * (a + b);
        CHECK(k2.tau(m) >= 0.5 * (k2.tau(a) + k2.tau(b)) - 1e-12);
        CHECK(k2.tau(b) > k2.tau(a));
    }
}

TEST_CASE("essential envelope arms and asymptotic slopes") {
    EssentialEnvelope env{{0.9666, 0.9913}, {1.009, 1.038}};

    CHECK(env.upper(1.0) == doctest::Approx(std::min(1.038 - 1.0, 0.9913)).epsilon(1e-14));
    CHECK(env.lower(1.0) == doctest::Approx(0.9666 - 1.0).epsilon(1e-14));
    CHECK(env.upper(-1.0) == doctest::Approx(std::min(-0.9666 - 1.0, -1.009)).epsilon(1e-14));
    CHECK(env.lower(-1.0) == doctest::Approx(-1.038 - 1.0).epsilon(1e-14));

    // both arms pinch to -1 at q = 0
    CHECK(env.lower(0.0) == -1.0);
    CHECK(env.upper(0.0) == -1.0);

    // tau/q approaches the dimension brackets far out on either side
    double big = 1e8;
    CHECK(env.upper(big) / big == doctest::Approx(0.9913).epsilon(1e-6));
    CHECK(env.lower(big) / big == doctest::Approx(0.9666).epsilon(1e-6));
    CHECK(env.upper(-big) / -big == doctest::Approx(1.009).epsilon(1e-6));
    CHECK(env.lower(-big) / -big == doctest::Approx(1.038).epsilon(1e-6));

    for (double q = -3; q <= 3; q += 0.1) CHECK(env.lower(q) <= env.upper(q) + 1e-15);
}

TEST_CASE("combined spectrum of the interval example") {
    Construction con = interval_example();
    Omega om = build_omega(con.ifs);
    ClassGraph cg = analyze_classes(om);
    SpectrumCurve curve = tau_mu(om, cg, con, {}, 3, 4);

    REQUIRE(curve.components.size() == 4);
    REQUIRE(curve.envelope.has_value());

    // dimension brackets feeding the envelope stay inside the useful window
    CHECK(curve.envelope->dmin.lo > 0.9134);
    CHECK(curve.envelope->dmin.hi == doctest::Approx(0.991072).epsilon(1e-4));
    CHECK(curve.envelope->dmax.lo == doctest::Approx(1.008880).epsilon(1e-4));
    CHECK(curve.envelope->dmax.hi < 1.1196);

    // value at q = 0 is exactly -1, attained by the essential band
    bool saw_zero = false;
    for (const SpectrumSample& s : curve.samples)
        if (s.q == 0.0) {
            saw_zero = true;
            CHECK(s.lower == -1.0);
            CHECK(s.upper == -1.0);
            CHECK(s.active == "essential");
        }
    CHECK(saw_zero);

    for (const SpectrumSample& s : curve.samples) CHECK(s.lower <= s.upper + 1e-15);

    // active sequence on [-1, 1] and the never-active components
    std::vector<std::string> seq;
    for (const SpectrumSample& s : curve.samples) {
        if (s.q < -1.0 || s.q > 1.0) continue;
        if (seq.empty() || seq.back() != s.active) seq.push_back(s.active);
    }
    REQUIRE(seq == std::vector<std::string>{"K_0", "K_1", "essential"});
    for (const SpectrumSample& s : curve.samples) {
        CHECK(s.active != "K_2");
        CHECK(s.active != "K_3");
    }

    // numerical slope on each active stretch stays inside the active
    // component's dimension range
    for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i) {
        const SpectrumSample& a = curve.samples[i];
        const SpectrumSample& b = curve.samples[i + 1];
        if (a.active != b.active) continue;
        double slope = (b.upper - a.upper) / (b.q - a.q);
        double lo, hi;
        if (a.active == "essential") {
            lo = curve.envelope->dmin.lo;
            hi = curve.envelope->dmax.hi;
        } else {
            const TauComponent* c = nullptr;
            for (const TauComponent& cc : curve.components)
                if (cc.name == a.active) c = &cc;
            REQUIRE(c != nullptr);
            double pmin = 1, pmax = 0;
            for (const Rat& p : c->probs) {
                pmin = std::min(pmin, rat_double(p));
                pmax = std::max(pmax, rat_double(p));
            }
            lo = -std::log(pmax) / std::log(14.0);
            hi = -std::log(pmin) / std::log(14.0);
        }
        CHECK(slope >= lo - 1e-6);
        CHECK(slope <= hi + 1e-6);
    }

    CHECK_THROWS_WITH_AS(tau_mu(build_omega(eleven_map_system()), cg, con),
                         doctest::Contains("DomainError"), Error);
}

TEST_CASE("crossing report for the interval example") {
    Construction con = interval_example();
    Omega om = build_omega(con.ifs);
    ClassGraph cg = analyze_classes(om);
    SpectrumCurve curve = tau_mu(om, cg, con, {}, 3, 4);

    std::vector<Crossing> xs = crossings(curve);
    REQUIRE(xs.size() == 2);

    CHECK(xs[0].left == "K_0");
    CHECK(xs[0].right == "K_1");
    CHECK(xs[0].exact);
    CHECK(xs[0].q_lo == xs[0].q_hi);
    CHECK(xs[0].q_lo == doctest::Approx(-std::log(2.0) / std::log(3.0)).epsilon(1e-6));
    CHECK(xs[0].slope_gap == doctest::Approx(std::log(3.0) / std::log(14.0)).epsilon(1e-9));

    CHECK(xs[1].left == "K_1");
    CHECK(xs[1].right == "essential");
    CHECK(!xs[1].exact);
    CHECK(xs[1].q_lo < xs[1].q_hi);
    CHECK(xs[1].q_lo > -0.65);
    CHECK(xs[1].q_hi < -0.55);
    CHECK(xs[1].slope_gap > 1.0);

    // refinement left a fine grid around the exact crossing
    double best_gap = 1.0;
    for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i)
        if (curve.samples[i].q <= xs[0].q_lo && xs[0].q_lo <= curve.samples[i + 1].q)
            best_gap = curve.samples[i + 1].q - curve.samples[i].q;
    CHECK(best_gap <= 1.0 / 4096 + 1e-12);
}

TEST_CASE("identical components never cross") {
    SpectrumCurve curve;
    curve.components.push_back(component("a", {1, 1}, 4, 4));
    curve.components.push_back(component("b", {1, 1}, 4, 4));
    for (double q = -1; q <= 1; q += 0.25) {
        SpectrumSample s;
        s.q = q;
        s.lower = s.upper = curve.components[0].tau(q);
        s.active = "a";
        curve.samples.push_back(s);
    }
    CHECK_THROWS_WITH_AS(crossings(curve), doctest::Contains("NoCrossing"), Error);
}

TEST_CASE("legendre arcs, isolated points, and the non-concave assembly") {
    Construction con = interval_example();
    Omega om = build_omega(con.ifs);
    ClassGraph cg = analyze_classes(om);
    SpectrumCurve curve = tau_mu(om, cg, con, {}, 3, 4);
    MultifractalCurve mf = assemble_f(curve);

    REQUIRE(mf.components.size() == 5);
    const double log14 = std::log(14.0);

    const FComponent& k0 = mf.components[0];
    CHECK(k0.isolated);
    CHECK(!k0.jump);
    CHECK(k0.arc.size() == 1);
    CHECK(k0.arc[0].alpha == doctest::Approx(std::log(1150.0) / log14).epsilon(1e-12));
    CHECK(k0.arc[0].f == 0.0);

    const FComponent& k1 = mf.components[1];
    CHECK(k1.isolated);
    CHECK(k1.jump);
    REQUIRE(k1.arc.size() == 1);
    CHECK(k1.arc[0].alpha == doctest::Approx(std::log(1150.0 / 3) / log14).epsilon(1e-12));
    CHECK(k1.arc[0].f == doctest::Approx(std::log(2.0) / log14).epsilon(1e-12));

    const FComponent& k2 = mf.components[2];
    CHECK(!k2.isolated);
    REQUIRE(k2.arc.size() > 100);
    double fmax = 0, amin = 10, amax = 0;
    for (const FPoint& p : k2.arc) {
        fmax = std::max(fmax, p.f);
        amin = std::min(amin, p.alpha);
        amax = std::max(amax, p.alpha);
        CHECK(p.f >= 0.0);
    }
    CHECK(fmax == doctest::Approx(std::log(2.0) / log14).epsilon(1e-9));
    CHECK(amin > std::log(1150.0 / 7) / log14 - 1e-9);
    CHECK(amax < std::log(1150.0 / 5) / log14 + 1e-9);
    // arc endpoints decay toward zero, faster the farther out the grid goes
    CHECK(k2.arc.front().f < 0.25);
    const TauComponent& k2tau = curve.components[2];
    CHECK(k2tau.f(40.0) <= 1e-3);
    CHECK(k2tau.f(-40.0) <= 1e-3);

    const FComponent& ess = mf.components[4];
    CHECK(ess.annotation);
    REQUIRE(ess.arc.size() == 2);
    CHECK(ess.arc[0].alpha == doctest::Approx(curve.envelope->dmin.lo).epsilon(1e-12));
    CHECK(ess.arc[0].f == 1.0);
    CHECK(ess.arc[1].alpha == doctest::Approx(curve.envelope->dmax.hi).epsilon(1e-12));
    CHECK(ess.arc[1].f == 1.0);

    CHECK(mf.non_concave);

    // Legendre consistency: grid minimization of alpha*q - tau(q) matches
    // the parametric arc value
    for (double qs : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
        double alpha = k2tau.alpha(qs);
        double direct = qs * alpha - k2tau.tau(qs);
        double best = 1e300;
        for (double q = -4; q <= 4; q += 1.0 / 256)
            best = std::min(best, alpha * q - k2tau.tau(q));
        CHECK(direct == doctest::Approx(best).epsilon(1e-6));
    }
}

TEST_CASE("single concave component assembles without a flag") {
    SpectrumCurve curve;
    curve.components.push_back(component("whole", {1, 2}, 3, 2));
    MultifractalCurve mf = assemble_f(curve);
    REQUIRE(mf.components.size() == 1);
    CHECK(!mf.non_concave);
    const FComponent& arc = mf.components[0];
    for (std::size_t i = 1; i < arc.arc.size(); ++i)
        CHECK(arc.arc[i].alpha > arc.arc[i - 1].alpha - 1e-12);
}

TEST_CASE("point-example spectrum: interval annotation plus two zero points") {
    Construction con = multipoint(4, probs_over({1, 2, 1}, 164));
    Omega om = build_omega(con.ifs);
    ClassGraph cg = analyze_classes(om);
    SpectrumCurve curve = tau_mu(om, cg, con, {}, 3, 4);

    REQUIRE(curve.components.size() == 3);
    MultifractalCurve mf = assemble_f(curve);
    REQUIRE(mf.components.size() == 4);

    int zero_points = 0;
    for (const FComponent& fc : mf.components)
        if (fc.isolated && fc.arc[0].f == 0.0) ++zero_points;
    CHECK(zero_points == 3); // the two end blocks coincide; the middle one differs
    CHECK(mf.components.back().annotation);
    CHECK(mf.non_concave);

    std::vector<Crossing> xs = crossings(curve);
    REQUIRE(xs.size() >= 1);
    CHECK(xs.back().right == "essential");
}

TEST_CASE("degenerate grids are rejected") {
    Construction con = interval_example();
    Omega om = build_omega(con.ifs);
    ClassGraph cg = analyze_classes(om);
    GridSpec bad;
    bad.step = 0;
    CHECK_THROWS_WITH_AS(tau_mu(om, cg, con, bad), doctest::Contains("DomainError"), Error);

    SpectrumCurve empty;
    CHECK_THROWS_AS(crossings(empty), Error);
}
