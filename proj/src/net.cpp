#include "ifstype/net.hpp"

#include <algorithm>
#include <deque>

#include "ifstype/errors.hpp"

namespace ifstype {

std::size_t CharVecHash::operator()(const CharVec& v) const {
    std::size_t h = rat_hash(v.ell);
    for (const Rat& x : v.nbrs) h = hash_mix(h, rat_hash(x));
    return h;
}

std::string cv_str(const CharVec& v) {
    std::string s = "(" + rat_str(v.ell) + ", (";
    for (std::size_t i = 0; i < v.nbrs.size(); ++i) {
        if (i) s += ", ";
        s += rat_str(v.nbrs[i]);
    }
    s += "))";
    return s;
}

std::vector<RawChild> derive_children(const WeightedIFS& ifs, const CharVec& parent) {
    const Rat& r = ifs.ratio;
    const Rat& len = parent.ell;

    // Distinct frame offsets e of the next-generation images [e, e+r] that
    // meet the parent's interior.  e = d - c for a parent offset c and map
    // digit d; different (c, d) pairs may coincide.
    std::vector<Rat> es;
    for (const Rat& c : parent.nbrs)
        for (const Rat& d : ifs.digits) {
            Rat e = d - c;
            if (e < len && e + r > 0) es.push_back(e);
        }
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    if (es.empty()) fail("TilingFailure", "no next-generation image meets a net interval");

    std::vector<Rat> pts{Rat(0), len};
    for (const Rat& e : es) {
        if (e > 0 && e < len) pts.push_back(e);
        Rat f = e + r;
        if (f > 0 && f < len) pts.push_back(f);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<RawChild> out;
    out.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Rat& h0 = pts[i];
        const Rat& h1 = pts[i + 1];

        std::vector<Rat> cover;
        for (const Rat& e : es)
            if (e <= h0 && e + r >= h1) cover.push_back(e);
        if (cover.empty()) fail("TilingFailure", "next-generation images leave a gap inside a net interval");

        RawChild rc;
        rc.h = h0;
        rc.cv.ell = (h1 - h0) / r;
        rc.cv.nbrs.reserve(cover.size());
        for (const Rat& e : cover) rc.cv.nbrs.push_back((h0 - e) / r); // cover is sorted, offsets descend
        std::sort(rc.cv.nbrs.begin(), rc.cv.nbrs.end());

        RatMatrix T(std::uint32_t(parent.nbrs.size()), std::uint32_t(rc.cv.nbrs.size()));
        for (std::uint32_t j = 0; j < parent.nbrs.size(); ++j) {
            bool hit = false;
            for (std::uint32_t t = 0; t < ifs.size(); ++t) {
                Rat e = ifs.digits[t] - parent.nbrs[j];
                if (!(e <= h0 && e + r >= h1)) continue;
                Rat v = (h0 - e) / r;
                auto it = std::lower_bound(rc.cv.nbrs.begin(), rc.cv.nbrs.end(), v);
                if (it == rc.cv.nbrs.end() || *it != v)
                    fail("TilingFailure", "covering image missing from the child offset list");
                std::uint32_t k = std::uint32_t(it - rc.cv.nbrs.begin());
                if (T.at(j, k) != 0) fail("TilingFailure", "two digits land one parent offset on one child offset");
                T.at(j, k) = ifs.probs[t];
                hit = true;
            }
            // Each parent-generation image is tiled by its own refinements,
            // so every row must extend into every child.
            if (!hit) fail("TilingFailure", "a parent offset has no extension into a child");
        }
        rc.T = std::move(T);
        out.push_back(std::move(rc));
    }
    return out;
}

std::uint32_t Omega::index_of(const CharVec& v) const {
    auto it = index.find(v);
    if (it == index.end()) fail("UnknownVector", "characteristic data not in the closure: " + cv_str(v));
    return it->second;
}

Omega build_omega(const WeightedIFS& ifs, std::size_t cap) {
    validate(ifs);
    Omega om;
    om.ifs = ifs;
    CharVec root;
    root.ell = 1;
    root.nbrs = {Rat(0)};
    om.vecs.push_back(root);
    om.index.emplace(root, 0);
    om.children.emplace_back();

    std::deque<std::uint32_t> queue{0};
    while (!queue.empty()) {
        std::uint32_t cur = queue.front();
        queue.pop_front();
        const CharVec parent = om.vecs[cur]; // copy: vecs may reallocate below
        std::vector<RawChild> raw = derive_children(ifs, parent);

        std::vector<ChildEdge> edges;
        edges.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            std::uint32_t sibling = 1;
            for (std::size_t j = 0; j < i; ++j)
                if (raw[j].cv == raw[i].cv) ++sibling;

            std::uint32_t idx;
            auto it = om.index.find(raw[i].cv);
            if (it != om.index.end()) {
                idx = it->second;
            } else {
                if (om.vecs.size() >= cap)
                    fail("CapExceeded", "characteristic closure exceeds " + std::to_string(cap) + " vectors");
                idx = std::uint32_t(om.vecs.size());
                om.index.emplace(raw[i].cv, idx);
                om.vecs.push_back(raw[i].cv);
                om.children.emplace_back();
                queue.push_back(idx);
            }
            edges.push_back(ChildEdge{idx, sibling, std::move(raw[i].h), std::move(raw[i].T)});
        }
        om.children[cur] = std::move(edges);
    }
    return om;
}

void walk_net_intervals(const Omega& om, std::uint32_t level,
                        const std::function<void(const NetInterval&)>& fn,
                        std::size_t budget) {
    std::vector<Rat> rp(level + 1);
    rp[0] = 1;
    for (std::uint32_t k = 1; k <= level; ++k) rp[k] = rp[k - 1] * om.ifs.ratio;

    std::size_t count = 0;
    std::function<void(std::uint32_t, const Rat&, std::uint32_t)> rec =
        [&](std::uint32_t cv, const Rat& a, std::uint32_t depth) {
            if (depth == level) {
                if (++count > budget) fail("CapExceeded", "net interval budget exceeded");
                NetInterval ni;
                ni.a = a;
                ni.b = a + rp[level] * om.vecs[cv].ell;
                ni.cv = cv;
                fn(ni);
                return;
            }
            for (const ChildEdge& e : om.children[cv]) rec(e.child, a + rp[depth] * e.h, depth + 1);
        };
    rec(0, Rat(0), 0);
}

std::vector<NetInterval> net_intervals(const Omega& om, std::uint32_t level, std::size_t budget) {
    std::vector<NetInterval> out;
    walk_net_intervals(om, level, [&](const NetInterval& ni) { out.push_back(ni); }, budget);
    return out;
}

namespace {

struct WalkKey {
    std::uint32_t cv;
    Rat u;
    bool operator==(const WalkKey& o) const { return cv == o.cv && u == o.u; }
};

struct WalkKeyHash {
    std::size_t operator()(const WalkKey& k) const { return hash_mix(k.cv, rat_hash(k.u)); }
};

struct Walker {
    SymbolicPath path;
    Rat u; // position relative to the current interval, current-generation units
    std::unordered_map<WalkKey, std::uint32_t, WalkKeyHash> seen;
    bool done = false;
};

} // namespace

std::vector<SymbolicPath> symbolic(const Omega& om, const Rat& x, std::uint32_t depth) {
    if (x < 0 || x > 1) fail("DomainError", "point " + rat_str(x) + " lies outside [0,1]");

    std::vector<Walker> live;
    {
        Walker w;
        w.path.cvs.push_back(0);
        w.u = x;
        live.push_back(std::move(w));
    }

    bool progress = true;
    while (progress) {
        progress = false;
        std::vector<Walker> next;
        for (Walker& w : live) {
            if (w.done) {
                next.push_back(std::move(w));
                continue;
            }
            std::uint32_t cv = w.path.cvs.back();
            std::uint32_t step = std::uint32_t(w.path.edges.size());

            WalkKey key{cv, w.u};
            auto it = w.seen.find(key);
            if (it != w.seen.end()) {
                w.path.periodic = true;
                w.path.preperiod = it->second;
                w.path.period = step - it->second;
                w.done = true;
                next.push_back(std::move(w));
                continue;
            }
            w.seen.emplace(key, step);
            if (step == depth) {
                w.done = true;
                next.push_back(std::move(w));
                continue;
            }

            const auto& edges = om.children[cv];
            std::vector<std::uint32_t> slots;
            for (std::uint32_t s = 0; s < edges.size(); ++s) {
                const Rat lo = edges[s].h;
                const Rat hi = edges[s].h + om.ifs.ratio * om.vecs[edges[s].child].ell;
                if (lo <= w.u && w.u <= hi) slots.push_back(s);
            }
            if (slots.empty()) fail("TilingFailure", "point escaped its net interval during the walk");
            if (slots.size() > 2 || (slots.size() == 2 && live.size() + next.size() > 2))
                fail("TilingFailure", "more than two addresses for one point");

            progress = true;
            auto advance = [&](Walker&& walker, std::uint32_t s) {
                walker.u = (walker.u - edges[s].h) / om.ifs.ratio;
                walker.path.edges.push_back(s);
                walker.path.cvs.push_back(edges[s].child);
                next.push_back(std::move(walker));
            };
            if (slots.size() == 2) advance(Walker(w), slots[0]); // left branch first
            advance(std::move(w), slots.back());
        }
        live = std::move(next);
    }

    std::vector<SymbolicPath> out;
    out.reserve(live.size());
    for (Walker& w : live) out.push_back(std::move(w.path));
    return out;
}

} // namespace ifstype
