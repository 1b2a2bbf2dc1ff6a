#include "ifstype/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ifstype/errors.hpp"

namespace ifstype {

namespace {

double plog(const Rat& p) { return std::log(rat_double(p)); }

// weighted power sums of the block probabilities at exponent q
struct PowerSums {
    double s = 0;  // sum p^q
    double sl = 0; // sum p^q * log p
};

PowerSums power_sums(const std::vector<Rat>& probs, double q) {
    PowerSums ps;
    for (const Rat& p : probs) {
        double lp = plog(p);
        double w = std::exp(q * lp);
        ps.s += w;
        ps.sl += w * lp;
    }
    return ps;
}

} // namespace

double TauComponent::tau(double q) const {
    if (probs.empty() || R < 2) fail("DomainError", "component without probabilities");
    return -std::log(power_sums(probs, q).s) / std::log(double(R));
}

double TauComponent::alpha(double q) const {
    PowerSums ps = power_sums(probs, q);
    return -ps.sl / (ps.s * std::log(double(R)));
}

double TauComponent::f(double q) const { return q * alpha(q) - tau(q); }

double TauComponent::dim() const { return std::log(double(probs.size())) / std::log(double(R)); }

bool TauComponent::equal_probs() const {
    for (const Rat& p : probs)
        if (p != probs.front()) return false;
    return true;
}

double EssentialEnvelope::lower(double q) const {
    return q >= 0 ? dmin.lo * q - 1.0 : dmax.hi * q - 1.0;
}

double EssentialEnvelope::upper(double q) const {
    return q >= 0 ? std::min(dmax.hi * q - 1.0, dmin.hi * q)
                  : std::min(dmin.lo * q - 1.0, dmax.lo * q);
}

namespace {

SpectrumSample eval_sample(const SpectrumCurve& curve, double q) {
    SpectrumSample s;
    s.q = q;
    double minc = std::numeric_limits<double>::infinity();
    const TauComponent* who = nullptr;
    for (const TauComponent& c : curve.components) {
        double v = c.tau(q);
        if (v < minc) {
            minc = v;
            who = &c;
        }
    }
    double up = minc, lo = minc;
    s.active = who ? who->name : "";
    if (curve.envelope) {
        double eu = curve.envelope->upper(q);
        double el = curve.envelope->lower(q);
        if (eu < minc) {
            s.active = "essential";
            up = eu;
        } else if (el <= minc) {
            s.tie = true; // the essential band straddles the winning value
        }
        lo = std::min(lo, el);
    }
    if (!who && !curve.envelope) fail("DomainError", "empty spectrum curve");
    s.lower = lo;
    s.upper = up;
    return s;
}

void check_same_system(const Omega& om, const Construction& con) {
    if (om.ifs.ratio != con.ifs.ratio || om.ifs.digits != con.ifs.digits ||
        om.ifs.probs != con.ifs.probs)
        fail("DomainError", "closure was built from a different system than the construction");
}

std::vector<double> coarse_grid(const GridSpec& g) {
    if (!(g.qmin <= g.qmax) || g.step <= 0) fail("DomainError", "bad q grid");
    std::vector<double> qs;
    for (double q = g.qmin; q < g.qmax + g.step / 2; q += g.step) qs.push_back(q);
    if (qs.empty() || qs.back() < g.qmax) qs.push_back(g.qmax);
    return qs;
}

} // namespace

SpectrumCurve tau_mu(const Omega& om, const ClassGraph& cg, const Construction& con,
                     const GridSpec& grid, std::uint32_t cycle_len, std::uint32_t outer_len,
                     std::size_t budget) {
    check_same_system(om, con);

    SpectrumCurve curve;
    for (std::size_t b = 0; b < con.blocks.size(); ++b) {
        TauComponent c;
        c.name = "K_" + std::to_string(b);
        c.R = con.grid;
        for (std::size_t j : con.blocks[b].maps) c.probs.push_back(con.ifs.probs[j]);
        curve.components.push_back(std::move(c));
    }

    AttainableSet ess = attainable_set(om, cg, cg.essential, cycle_len, outer_len, budget);
    curve.envelope = EssentialEnvelope{{ess.outer.lo, ess.inner.lo}, {ess.inner.hi, ess.outer.hi}};

    std::vector<double> qs = coarse_grid(grid);
    std::vector<SpectrumSample> coarse;
    coarse.reserve(qs.size());
    for (double q : qs) coarse.push_back(eval_sample(curve, q));

    // refine around active-label changes so crossings are localized
    if (grid.refine > 0 && grid.refine < grid.step)
        for (std::size_t i = 0; i + 1 < coarse.size(); ++i)
            if (coarse[i].active != coarse[i + 1].active)
                for (double q = coarse[i].q + grid.refine; q < coarse[i + 1].q;
                     q += grid.refine)
                    qs.push_back(q);
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

    curve.samples.reserve(qs.size());
    for (double q : qs) curve.samples.push_back(eval_sample(curve, q));
    return curve;
}

namespace {

const TauComponent* find_component(const SpectrumCurve& curve, const std::string& name) {
    for (const TauComponent& c : curve.components)
        if (c.name == name) return &c;
    return nullptr;
}

// slope range of one side of a kink: a closed form runs between the
// dimensions of its largest and smallest weights, the essential spectrum
// between its outer dimension bracket ends
std::pair<double, double> slope_range(const SpectrumCurve& curve, const std::string& name) {
    if (name == "essential") return {curve.envelope->dmin.lo, curve.envelope->dmax.hi};
    const TauComponent* c = find_component(curve, name);
    double logR = std::log(double(c->R));
    double pmin = rat_double(c->probs.front()), pmax = pmin;
    for (const Rat& p : c->probs) {
        pmin = std::min(pmin, rat_double(p));
        pmax = std::max(pmax, rat_double(p));
    }
    return {-std::log(pmax) / logR, -std::log(pmin) / logR};
}

template <class Fn>
double bisect(Fn&& g, double a, double b) {
    double ga = g(a);
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        double m = 0.5 * (a + b);
        double gm = g(m);
        if ((ga <= 0) == (gm <= 0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// root of g nearest to the hint, located by scanning the sample grid for a
// sign change and bisecting inside it
template <class Fn>
double solve_near(Fn&& g, const std::vector<SpectrumSample>& samples, double hint) {
    double best = hint;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        double a = samples[i].q, b = samples[i + 1].q;
        if ((g(a) <= 0) != (g(b) <= 0)) {
            double r = bisect(g, a, b);
            if (std::abs(r - hint) < dist) {
                dist = std::abs(r - hint);
                best = r;
            }
        }
    }
    return best;
}

} // namespace

std::vector<Crossing> crossings(const SpectrumCurve& curve) {
    if (curve.samples.size() < 2) fail("DomainError", "curve carries no grid");
    std::vector<Crossing> out;
    for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i) {
        const SpectrumSample& a = curve.samples[i];
        const SpectrumSample& b = curve.samples[i + 1];
        if (a.active == b.active) continue;
        Crossing c;
        c.left = a.active;
        c.right = b.active;
        const TauComponent* ca = find_component(curve, a.active);
        const TauComponent* cb = find_component(curve, b.active);
        if (ca && cb) {
            double r = bisect([&](double q) { return ca->tau(q) - cb->tau(q); }, a.q, b.q);
            c.q_lo = c.q_hi = r;
            c.exact = true;
        } else {
            // one side is the essential band: the true crossing lies between
            // the crossings of the closed form with the two envelope arms
            const TauComponent* cc = ca ? ca : cb;
            const EssentialEnvelope& env = *curve.envelope;
            double hint = 0.5 * (a.q + b.q);
            double r1 = solve_near([&](double q) { return cc->tau(q) - env.lower(q); },
                                   curve.samples, hint);
            double r2 = solve_near([&](double q) { return cc->tau(q) - env.upper(q); },
                                   curve.samples, hint);
            c.q_lo = std::min(r1, r2);
            c.q_hi = std::max(r1, r2);
        }
        auto [lmin, lmax] = slope_range(curve, c.left);
        auto [rmin, rmax] = slope_range(curve, c.right);
        // the combined curve is a min of concave pieces, so slopes drop
        // across a kink; the gap survives the bracket uncertainty
        c.slope_gap = std::max(0.0, lmin - rmax);
        out.push_back(std::move(c));
    }
    if (out.empty() && curve.components.size() >= 2)
        fail("NoCrossing", "components never exchange the minimum on the grid");
    return out;
}

MultifractalCurve assemble_f(const SpectrumCurve& curve, const GridSpec& grid) {
    MultifractalCurve mf;
    for (const TauComponent& c : curve.components) {
        FComponent fc;
        fc.name = c.name;
        if (c.equal_probs()) {
            fc.isolated = true;
            fc.arc.push_back({c.alpha(0), c.dim()});
            fc.jump = c.dim() > 0;
        } else {
            for (double q = grid.qmax; q >= grid.qmin - grid.step / 2; q -= grid.step)
                fc.arc.push_back({c.alpha(q), std::max(0.0, c.f(q))});
        }
        mf.components.push_back(std::move(fc));
    }
    if (curve.envelope) {
        FComponent fc;
        fc.name = "essential";
        fc.annotation = true;
        fc.arc.push_back({curve.envelope->dmin.lo, 1.0});
        fc.arc.push_back({curve.envelope->dmax.hi, 1.0});
        mf.components.push_back(std::move(fc));
    }

    // Non-concavity of the assembled curve: collect every reported point,
    // fill the alpha gaps between component extents with zeros (the level
    // sets there are empty), and compare against the upper concave hull.
    struct Extent {
        double lo, hi;
    };
    std::vector<FPoint> pts;
    std::vector<Extent> extents;
    for (const FComponent& fc : mf.components) {
        double lo = fc.arc.front().alpha, hi = lo;
        for (const FPoint& p : fc.arc) {
            pts.push_back(p);
            lo = std::min(lo, p.alpha);
            hi = std::max(hi, p.alpha);
        }
        extents.push_back({lo, hi});
    }
    std::sort(extents.begin(), extents.end(), [](const Extent& x, const Extent& y) {
        return x.lo < y.lo;
    });
    double reach = extents.empty() ? 0 : extents.front().hi;
    for (const Extent& e : extents) {
        if (e.lo > reach + 1e-9) pts.push_back({0.5 * (reach + e.lo), 0.0});
        reach = std::max(reach, e.hi);
    }

    std::sort(pts.begin(), pts.end(), [](const FPoint& x, const FPoint& y) {
        return x.alpha < y.alpha || (x.alpha == y.alpha && x.f < y.f);
    });
    std::vector<FPoint> tops; // one point per alpha, keeping the highest
    for (const FPoint& p : pts)
        if (!tops.empty() && tops.back().alpha == p.alpha)
            tops.back() = p;
        else
            tops.push_back(p);
    std::vector<FPoint> hull; // upper concave hull, monotone chain
    for (const FPoint& p : tops) {
        while (hull.size() >= 2) {
            const FPoint& a = hull[hull.size() - 2];
            const FPoint& b = hull.back();
            if ((b.alpha - a.alpha) * (p.f - a.f) - (p.alpha - a.alpha) * (b.f - a.f) >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    auto hull_at = [&](double alpha) {
        for (std::size_t i = 0; i + 1 < hull.size(); ++i)
            if (alpha <= hull[i + 1].alpha) {
                double t = (alpha - hull[i].alpha) / (hull[i + 1].alpha - hull[i].alpha);
                return hull[i].f + t * (hull[i + 1].f - hull[i].f);
            }
        return hull.empty() ? 0.0 : hull.back().f;
    };
    for (const FPoint& p : pts)
        if (p.f < hull_at(p.alpha) - 1e-6) {
            mf.non_concave = true;
            break;
        }
    return mf;
}

} // namespace ifstype
