#include "ifstype/dimensions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ifstype/errors.hpp"

namespace ifstype {

namespace {

Rat rat_pow(const Rat& a, unsigned long e) {
    Rat out;
    mpz_pow_ui(out.get_num().get_mpz_t(), a.get_num().get_mpz_t(), e);
    mpz_pow_ui(out.get_den().get_mpz_t(), a.get_den().get_mpz_t(), e);
    return out;
}

// prod_a^(1/len_a) < prod_b^(1/len_b) in exact arithmetic
bool mean_less(const Rat& pa, unsigned la, const Rat& pb, unsigned lb) {
    return rat_pow(pa, lb) < rat_pow(pb, la);
}

std::string dim_expr(const Rat& value, unsigned len, const Rat& ratio) {
    std::string denom = "log(" + rat_str(ratio) + ")";
    if (len != 1) denom = std::to_string(len) + "*" + denom;
    return "log(" + rat_str(value) + ")/(" + denom + ")";
}

struct ClassEdge {
    std::uint32_t slot;
    std::uint32_t to;
    const RatMatrix* T;
};

// Outgoing edges that stay inside the component, indexed by vertex.
std::vector<std::vector<ClassEdge>> class_edges(const Omega& om, const ClassGraph& cg,
                                                std::uint32_t comp) {
    std::vector<std::vector<ClassEdge>> out(om.vecs.size());
    for (std::uint32_t v : cg.members[comp])
        for (std::uint32_t s = 0; s < om.children[v].size(); ++s) {
            const ChildEdge& e = om.children[v][s];
            if (cg.comp_of[e.child] == comp) out[v].push_back({s, e.child, &e.T});
        }
    return out;
}

void require_loop(const ClassGraph& cg, std::uint32_t comp) {
    if (comp >= cg.is_loop.size()) fail("UnknownClass", "no component " + std::to_string(comp));
    if (!cg.is_loop[comp])
        fail("NotLoopClass", "component " + std::to_string(comp) + " carries no cycle");
}

struct DMat {
    std::uint32_t rows = 0, cols = 0;
    std::vector<double> a;
    double at(std::uint32_t i, std::uint32_t j) const { return a[std::size_t(i) * cols + j]; }
    double& at(std::uint32_t i, std::uint32_t j) { return a[std::size_t(i) * cols + j]; }
};

DMat to_double(const RatMatrix& m) {
    DMat d{m.rows, m.cols, {}};
    d.a.reserve(m.a.size());
    for (const Rat& x : m.a) d.a.push_back(rat_double(x));
    return d;
}

void dproduct(const DMat& x, const DMat& y, DMat& out) {
    out.rows = x.rows;
    out.cols = y.cols;
    out.a.assign(std::size_t(x.rows) * y.cols, 0.0);
    for (std::uint32_t i = 0; i < x.rows; ++i)
        for (std::uint32_t k = 0; k < x.cols; ++k) {
            const double xv = x.at(i, k);
            if (xv == 0) continue;
            for (std::uint32_t j = 0; j < y.cols; ++j) out.a[std::size_t(i) * y.cols + j] += xv * y.at(k, j);
        }
}

} // namespace

double periodic_dim(const Omega& om, const SymbolicPath& path) {
    if (!path.periodic) fail("NotPeriodic", "address carries no repeating block");
    std::vector<const RatMatrix*> mats;
    for (std::size_t k = path.preperiod; k < path.preperiod + path.period; ++k)
        mats.push_back(&om.children[path.cvs[k]][path.edges[k]].T);
    RatMatrix cycle = product(mats);
    double sp = spectral_radius(cycle).value;
    return std::log(sp) / (double(path.period) * std::log(rat_double(om.ifs.ratio)));
}

std::vector<PointDim> local_dims_at(const Omega& om, const ClassGraph& cg, const Rat& x,
                                    std::uint32_t depth_cap) {
    std::vector<PointDim> out;
    for (PointClass& pc : classify(om, cg, x, depth_cap)) {
        if (!pc.path.periodic)
            fail("DepthExceeded", "address of " + rat_str(x) + " has no repeating state within the cap");
        PointDim pd;
        pd.dim = periodic_dim(om, pc.path);
        pd.cls = std::move(pc);
        out.push_back(std::move(pd));
    }
    return out;
}

std::vector<CycleDim> cycle_dims(const Omega& om, const ClassGraph& cg, std::uint32_t comp,
                                 std::uint32_t max_len, std::size_t budget) {
    require_loop(cg, comp);
    auto edges = class_edges(om, cg, comp);
    const double logr = std::log(rat_double(om.ifs.ratio));

    std::vector<CycleDim> found;
    std::size_t steps = 0;
    for (std::uint32_t anchor : cg.members[comp]) {
        std::vector<std::uint32_t> slots;
        std::vector<RatMatrix> prods;
        std::function<void(std::uint32_t)> rec = [&](std::uint32_t v) {
            for (const ClassEdge& e : edges[v]) {
                if (e.to < anchor) continue; // anchored at the smallest vertex of the walk
                if (++steps > budget) fail("CapExceeded", "closed-walk enumeration budget exceeded");
                prods.push_back(prods.empty() ? *e.T : product(prods.back(), *e.T));
                slots.push_back(e.slot);
                if (e.to == anchor) {
                    double sp = spectral_radius(prods.back()).value;
                    found.push_back({anchor, slots, std::log(sp) / (double(slots.size()) * logr)});
                }
                if (slots.size() < max_len) rec(e.to);
                prods.pop_back();
                slots.pop_back();
            }
        };
        rec(anchor);
    }
    return found;
}

Interval inner_bracket(const std::vector<CycleDim>& cycles) {
    if (cycles.empty()) fail("NoCycles", "no closed walks to bracket with");
    Interval iv{cycles[0].dim, cycles[0].dim};
    for (const CycleDim& c : cycles) {
        iv.lo = std::min(iv.lo, c.dim);
        iv.hi = std::max(iv.hi, c.dim);
    }
    return iv;
}

Interval outer_bracket(const Omega& om, const ClassGraph& cg, std::uint32_t comp, std::uint32_t L,
                       std::size_t budget) {
    require_loop(cg, comp);
    if (L == 0) fail("DomainError", "outer bracket needs L >= 1");
    auto edges = class_edges(om, cg, comp);
    const double logr = std::log(rat_double(om.ifs.ratio));
    const auto& mem = cg.members[comp];

    // Walk products are carried in doubles: the accumulated rounding over a
    // handful of nonnegative 14x14 products sits far below the relative slop
    // folded into the final logs.
    std::vector<std::vector<DMat>> dm(om.vecs.size());
    for (std::uint32_t v : mem) {
        dm[v].reserve(edges[v].size());
        for (const ClassEdge& e : edges[v]) dm[v].push_back(to_double(*e.T));
    }

    // One strictly positive weight vector per vertex turns each edge matrix
    // into an operator with a submultiplicative weighted norm.  Iterating
    // the entrywise max of T*w over out-edges pushes the weights toward the
    // ones that make the worst single-step norm smallest; any positive
    // fixed-up result keeps the norm sound, so no exactness is needed here.
    std::vector<std::vector<double>> weight(om.vecs.size());
    for (std::uint32_t v : mem) weight[v].assign(om.vecs[v].nbrs.size(), 1.0);
    for (int round = 0; round < 96; ++round) {
        double gmax = 0;
        std::vector<std::vector<double>> next(om.vecs.size());
        for (std::uint32_t v : mem) {
            std::vector<double> acc(weight[v].size(), 0.0);
            for (std::size_t k = 0; k < edges[v].size(); ++k) {
                const DMat& M = dm[v][k];
                const std::vector<double>& w = weight[edges[v][k].to];
                for (std::uint32_t i = 0; i < M.rows; ++i) {
                    double s = 0;
                    for (std::uint32_t j = 0; j < M.cols; ++j) s += M.at(i, j) * w[j];
                    acc[i] = std::max(acc[i], s);
                }
            }
            for (double x : acc) gmax = std::max(gmax, x);
            next[v] = std::move(acc);
        }
        if (gmax <= 0) break;
        for (std::uint32_t v : mem) {
            weight[v] = std::move(next[v]);
            for (double& x : weight[v]) x /= gmax;
        }
    }
    for (std::uint32_t v : mem)
        for (double& x : weight[v]) x = std::max(x, 1e-12);

    // Four one-sided bounds over all length-L walks.  The entry-sum and
    // weighted operator norms are submultiplicative, so their walk maxima
    // bound every longer product from above; row-sum and column-sum minima
    // are supermultiplicative, so their walk minima bound it from below.
    // With log r < 0 the best of each pair becomes one end of a dimension
    // bracket, and doubling L never widens either end.
    double best_sum = -1, best_wnorm = -1, worst_row = -1, worst_col = -1;
    std::size_t steps = 0;
    std::vector<DMat> stk(L);
    std::function<void(std::uint32_t, std::uint32_t, std::uint32_t)> rec =
        [&](std::uint32_t start, std::uint32_t v, std::uint32_t depth) {
            for (std::size_t k = 0; k < edges[v].size(); ++k) {
                if (++steps > budget) fail("CapExceeded", "outer bracket enumeration budget exceeded");
                const std::uint32_t to = edges[v][k].to;
                if (depth == 0)
                    stk[0] = dm[v][k];
                else
                    dproduct(stk[depth - 1], dm[v][k], stk[depth]);
                if (depth + 1 == L) {
                    const DMat& P = stk[depth];
                    double sum = 0, wn = 0;
                    for (std::uint32_t i = 0; i < P.rows; ++i) {
                        double rs = 0, tw = 0;
                        for (std::uint32_t j = 0; j < P.cols; ++j) {
                            rs += P.at(i, j);
                            tw += P.at(i, j) * weight[to][j];
                        }
                        sum += rs;
                        wn = std::max(wn, tw / weight[start][i]);
                        if (worst_row < 0 || rs < worst_row) worst_row = rs;
                    }
                    for (std::uint32_t j = 0; j < P.cols; ++j) {
                        double cs = 0;
                        for (std::uint32_t i = 0; i < P.rows; ++i) cs += P.at(i, j);
                        if (worst_col < 0 || cs < worst_col) worst_col = cs;
                    }
                    best_sum = std::max(best_sum, sum);
                    best_wnorm = std::max(best_wnorm, wn);
                } else {
                    rec(start, to, depth + 1);
                }
            }
        };
    for (std::uint32_t v : mem) rec(v, v, 0);

    if (best_sum <= 0 || worst_row <= 0 || worst_col <= 0)
        fail("NoCycles", "no length-" + std::to_string(L) + " walks in the class");

    const double slop = 1e-10; // pushes both ends outward past any rounding
    double up = std::min(best_sum, best_wnorm) * (1.0 + slop);
    double down = std::max(worst_row, worst_col) * (1.0 - slop);
    return {std::log(up) / (double(L) * logr), std::log(down) / (double(L) * logr)};
}

AttainableSet attainable_set(const Omega& om, const ClassGraph& cg, std::uint32_t comp,
                             std::uint32_t max_cycle_len, std::uint32_t outer_len,
                             std::size_t budget) {
    require_loop(cg, comp);
    auto edges = class_edges(om, cg, comp);
    const auto& mem = cg.members[comp];
    const double logr = std::log(rat_double(om.ifs.ratio));

    AttainableSet s;

    std::size_t edge_count = 0;
    bool all_scalar = true;
    for (std::uint32_t v : mem)
        for (const ClassEdge& e : edges[v]) {
            ++edge_count;
            if (e.T->rows != 1 || e.T->cols != 1) all_scalar = false;
        }

    if (mem.size() == 1 && edge_count == 1) {
        const RatMatrix& T = *edges[mem[0]][0].T;
        SpectralRadius sp = spectral_radius(T);
        s.kind = AttainableSet::Kind::Point;
        s.lo = s.hi = std::log(sp.value) / logr;
        if (sp.exact) s.lo_expr = s.hi_expr = dim_expr(*sp.exact_value, 1, om.ifs.ratio);
        s.inner = s.outer = {s.lo, s.hi};
        return s;
    }

    if (all_scalar) {
        // Walk dimensions are running means of scalar weights, so the set is
        // the exact interval between the extreme simple-cycle means.
        struct Best {
            Rat prod;
            unsigned len = 0;
        };
        Best minc, maxc;
        std::vector<char> onpath(om.vecs.size(), 0);
        for (std::uint32_t anchor : mem) {
            std::function<void(std::uint32_t, const Rat&, unsigned)> rec =
                [&](std::uint32_t v, const Rat& prod, unsigned len) {
                    for (const ClassEdge& e : edges[v]) {
                        if (e.to < anchor) continue;
                        Rat np = prod * e.T->a[0];
                        if (e.to == anchor) {
                            if (minc.len == 0 || mean_less(np, len + 1, minc.prod, minc.len))
                                minc = {np, len + 1};
                            if (maxc.len == 0 || mean_less(maxc.prod, maxc.len, np, len + 1))
                                maxc = {np, len + 1};
                        } else if (!onpath[e.to]) {
                            onpath[e.to] = 1;
                            rec(e.to, np, len + 1);
                            onpath[e.to] = 0;
                        }
                    }
                };
            onpath[anchor] = 1;
            rec(anchor, Rat(1), 0);
            onpath[anchor] = 0;
        }
        if (minc.len == 0) fail("NoCycles", "no simple cycles in a loop class");
        s.kind = AttainableSet::Kind::Interval;
        // larger mean weight means smaller dimension
        s.lo = std::log(rat_double(maxc.prod)) / (double(maxc.len) * logr);
        s.hi = std::log(rat_double(minc.prod)) / (double(minc.len) * logr);
        s.lo_expr = dim_expr(maxc.prod, maxc.len, om.ifs.ratio);
        s.hi_expr = dim_expr(minc.prod, minc.len, om.ifs.ratio);
        s.inner = s.outer = {s.lo, s.hi};
        return s;
    }

    s.kind = AttainableSet::Kind::Bracketed;
    s.inner = inner_bracket(cycle_dims(om, cg, comp, max_cycle_len, budget));
    s.outer = outer_bracket(om, cg, comp, outer_len);
    s.lo = s.outer.lo;
    s.hi = s.outer.hi;
    return s;
}

double loop_attractor_dim(const WeightedIFS& ifs, const std::vector<std::uint32_t>& block) {
    if (block.empty()) fail("DomainError", "empty map block");
    std::vector<Rat> ds;
    for (std::uint32_t j : block) {
        if (j >= ifs.size()) fail("DomainError", "map index out of range");
        ds.push_back(ifs.digits[j]);
    }
    std::sort(ds.begin(), ds.end());
    for (std::size_t i = 0; i + 1 < ds.size(); ++i)
        if (ds[i + 1] - ds[i] < ifs.ratio)
            fail("OverlapError", "open images of the block maps overlap");
    return std::log(double(block.size())) / std::log(1.0 / rat_double(ifs.ratio));
}

} // namespace ifstype
