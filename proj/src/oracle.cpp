#include "ifstype/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "ifstype/errors.hpp"

namespace ifstype {

namespace {

Rat rat_pow(const Rat& base, std::uint32_t e) {
    Rat out(1);
    for (std::uint32_t i = 0; i < e; ++i) out *= base;
    return out;
}

// mu_m of the window, windows memoized per level after clipping to [0,1]
Rat window_rec(const WeightedIFS& f, std::uint32_t m, Rat lo, Rat hi,
               std::vector<std::map<std::pair<Rat, Rat>, Rat>>& memo, std::size_t& left) {
    if (lo < 0) lo = 0;
    if (hi > 1) hi = 1;
    if (hi < lo) return Rat(0);
    if (lo == 0 && hi == 1) return Rat(1);
    if (m == 0) return lo == 0 ? Rat(1) : Rat(0); // level 0 is a unit mass at 0
    auto& tier = memo[m];
    auto key = std::make_pair(lo, hi);
    if (auto it = tier.find(key); it != tier.end()) return it->second;
    if (left == 0) fail("Budget", "window recursion subproblem budget exceeded");
    --left;
    Rat acc(0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        Rat a = (lo - f.digits[j]) / f.ratio;
        Rat b = (hi - f.digits[j]) / f.ratio;
        if (b < 0 || a > 1) continue;
        acc += f.probs[j] * window_rec(f, m - 1, std::move(a), std::move(b), memo, left);
    }
    tier.emplace(std::move(key), acc);
    return acc;
}

void fit_slope(SlopeEstimate& est) {
    const auto& pts = est.points;
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    est.value = sxy / sxx;
    est.spread = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double step = (pts[i + 1].second - pts[i].second) / (pts[i + 1].first - pts[i].first);
        est.spread = std::max(est.spread, std::abs(step - est.value));
    }
}

// Atom positions at level m >= 1 are integers over D*b^(m-1), where D is the
// common digit denominator (forced divisible by b) and ratio = a/b.  One
// level advances index i to a*i + dnum[j]*b^(m-1).
struct GridPlan {
    std::int64_t D = 1;
    std::int64_t a = 1;
    std::int64_t b = 1;
    std::vector<std::int64_t> dnum;
    std::vector<double> p;
};

GridPlan plan_grid(const WeightedIFS& f, std::size_t budget) {
    GridPlan g;
    mpz_class den(f.ratio.get_den());
    mpz_class D(den);
    for (const Rat& d : f.digits) {
        mpz_class dd(d.get_den());
        mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), dd.get_mpz_t());
    }
    if (!D.fits_slong_p() || D.get_si() > static_cast<std::int64_t>(budget))
        fail("Budget", "digit denominator grid exceeds the cell budget");
    g.D = D.get_si();
    if (!f.ratio.get_num().fits_slong_p() || !den.fits_slong_p())
        fail("Budget", "contraction ratio does not fit the integer grid");
    g.a = f.ratio.get_num().get_si();
    g.b = den.get_si();
    for (const Rat& d : f.digits) {
        Rat scaled = d * g.D;
        g.dnum.push_back(mpz_class(scaled.get_num()).get_si());
    }
    for (const Rat& p : f.probs) g.p.push_back(rat_double(p));
    return g;
}

} // namespace

Rat DiscreteMeasure::total() const {
    Rat s(0);
    for (const auto& [pos, w] : atoms) s += w;
    return s;
}

DiscreteMeasure refine(const WeightedIFS& f, std::uint32_t n, std::size_t budget) {
    DiscreteMeasure m;
    m.level = n;
    m.atoms = {{Rat(0), Rat(1)}};
    std::vector<std::pair<Rat, Rat>> next;
    for (std::uint32_t lvl = 1; lvl <= n; ++lvl) {
        std::size_t raw = m.atoms.size() * f.size();
        if (raw > budget)
            fail("Budget", "level " + std::to_string(lvl) + " needs " + std::to_string(raw) +
                               " atom pushes, over the budget of " + std::to_string(budget));
        next.clear();
        next.reserve(raw);
        for (const auto& [pos, w] : m.atoms)
            for (std::size_t j = 0; j < f.size(); ++j)
                next.emplace_back(f.apply(j, pos), w * f.probs[j]);
        std::sort(next.begin(), next.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        m.atoms.clear();
        for (auto& atom : next) {
            if (!m.atoms.empty() && m.atoms.back().first == atom.first)
                m.atoms.back().second += atom.second;
            else
                m.atoms.push_back(std::move(atom));
        }
    }
    return m;
}

Rat window_mass(const WeightedIFS& f, std::uint32_t n, const Rat& lo, const Rat& hi,
                std::size_t budget) {
    std::vector<std::map<std::pair<Rat, Rat>, Rat>> memo(n + 1);
    std::size_t left = budget;
    return window_rec(f, n, lo, hi, memo, left);
}

DepthRange default_depths(const WeightedIFS& f) {
    Rat inv = 1 / f.ratio;
    return inv <= 6 ? DepthRange{6, 12} : DepthRange{4, 7};
}

SlopeEstimate empirical_local_dim(const WeightedIFS& f, const Rat& x, DepthRange depths,
                                  std::size_t budget) {
    if (depths.unset()) depths = default_depths(f);
    if (depths.hi <= depths.lo)
        fail("DomainError", "slope fitting needs at least two depths");
    std::vector<std::map<std::pair<Rat, Rat>, Rat>> memo(depths.hi + 1);
    std::size_t left = budget;
    SlopeEstimate est;
    for (std::uint32_t n = depths.lo; n <= depths.hi; ++n) {
        Rat w = 2 * rat_pow(f.ratio, n);
        Rat mass = window_rec(f, n, x - w, x + w, memo, left);
        if (mass == 0)
            fail("InsufficientMass", "level-" + std::to_string(n) + " window around " +
                                         rat_str(x) + " carries no mass");
        est.points.emplace_back(std::log(rat_double(w)), std::log(rat_double(mass)));
    }
    fit_slope(est);
    return est;
}

std::vector<SlopeEstimate> empirical_lq(const WeightedIFS& f, const std::vector<double>& qs,
                                        DepthRange depths, std::size_t budget) {
    bool defaulted = depths.unset();
    if (defaulted) depths = default_depths(f);
    if (depths.hi <= depths.lo)
        fail("DomainError", "slope fitting needs at least two depths");
    GridPlan g = plan_grid(f, budget);
    double logratio = std::log(rat_double(f.ratio));

    std::vector<SlopeEstimate> out(qs.size());
    std::vector<double> W{1.0};
    std::vector<double> Wn;
    std::int64_t cells = 1;      // grid cells at the current level
    std::int64_t bpow = 1;       // b^(m-1) at level m
    std::int64_t shift = g.D / g.b; // net endpoint offset a^m * D/b in grid units
    for (std::uint32_t m = 1; m <= depths.hi; ++m) {
        if (m == 1) {
            cells = g.D + 1;
        } else {
            cells = (cells - 1) * g.b + 1;
            bpow *= g.b;
        }
        shift *= g.a;
        if (cells > static_cast<std::int64_t>(budget)) {
            if (!defaulted || m <= depths.lo + 1)
                fail("Budget", "level " + std::to_string(m) + " grid needs " +
                                   std::to_string(cells) + " cells, over the budget of " +
                                   std::to_string(budget));
            depths.hi = m - 1; // defaulted range: keep the depths that fit
            break;
        }
        Wn.assign(cells, 0.0);
        for (std::size_t j = 0; j < g.dnum.size(); ++j) {
            const std::int64_t off = g.dnum[j] * bpow;
            const double pj = g.p[j];
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(W.size()); ++i)
                if (W[i] > 0) Wn[g.a * i + off] += pj * W[i];
        }
        W.swap(Wn);

        if (m < depths.lo) continue;
        // sweep the net intervals: cell boundaries are atom positions, their
        // right endpoints one map image wide ahead, and the two ends of [0,1]
        std::vector<long double> sums(qs.size(), 0.0L);
        long double acc = 0.0L;
        for (std::int64_t j = 0; j <= cells; ++j) {
            bool boundary = j == 0 || j == cells ||
                            (j < cells && W[j] > 0) ||
                            (j >= shift && W[j - shift] > 0);
            if (boundary && acc > 0) {
                for (std::size_t t = 0; t < qs.size(); ++t)
                    sums[t] += std::pow(static_cast<double>(acc), qs[t]);
                acc = 0.0L;
            }
            if (j < cells) acc += W[j];
        }
        for (std::size_t t = 0; t < qs.size(); ++t)
            out[t].points.emplace_back(m * logratio,
                                       std::log(static_cast<double>(sums[t])));
    }
    if (out.empty()) return out;
    if (out[0].points.size() < 2)
        fail("Budget", "fewer than two depths fit the cell budget of " + std::to_string(budget));
    for (SlopeEstimate& est : out) fit_slope(est);
    return out;
}

SlopeEstimate empirical_lq(const WeightedIFS& f, double q, DepthRange depths, std::size_t budget) {
    return empirical_lq(f, std::vector<double>{q}, depths, budget).at(0);
}

} // namespace ifstype
