#include "ifstype/constructions.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

#include "ifstype/errors.hpp"

namespace ifstype {

namespace {

Rat frac(unsigned long num, unsigned long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

struct Skeleton {
    std::string kind;
    std::uint32_t R = 0;
    std::vector<std::vector<std::uint32_t>> block_idx; // grid numerators, ascending
};

std::size_t slot_count(const Skeleton& sk) {
    std::size_t n = 0;
    for (const auto& blk : sk.block_idx) n += blk.size();
    return n;
}

Skeleton multipoint_skeleton(std::uint32_t R) {
    if (R < 4 || R % 2 != 0)
        fail("ParityError", "point construction needs an even grid of at least 4, got " + std::to_string(R));
    Skeleton sk{"multipoint", R, {}};
    for (std::uint32_t i = 0; i <= R / 2; ++i) sk.block_idx.push_back({2 * i * (R - 1)});
    return sk;
}

Skeleton multiinterval_skeleton(std::uint32_t R) {
    if (R % 6 != 2 || R < 14)
        fail("CongruenceError",
             "interval construction needs a grid of 2 mod 6, at least 14, got " + std::to_string(R));
    Skeleton sk{"multiinterval", R, {}};
    sk.block_idx.push_back({0});
    for (std::uint32_t i = 1; i <= (R - 2) / 6; ++i)
        sk.block_idx.push_back({(6 * i - 4) * (R - 1), 6 * i * (R - 1)});
    sk.block_idx.push_back({R * (R - 1)});
    return sk;
}

Skeleton make_skeleton(const std::string& kind, std::uint32_t R) {
    if (kind == "multipoint") return multipoint_skeleton(R);
    if (kind == "multiinterval") return multiinterval_skeleton(R);
    fail("DomainError", "unknown construction kind '" + kind + "'");
}

// A block's own attractor: the maps, restricted to themselves, fix a point
// or span a Cantor set.  Hull endpoints are the extreme fixed points.
struct TailSet {
    std::vector<Rat> dig;
    Rat lo, hi;
    bool single = false;
};

TailSet tail_from_grid(std::uint32_t R, const std::vector<std::uint32_t>& idx) {
    TailSet K;
    for (std::uint32_t j : idx) K.dig.push_back(frac(j, (unsigned long)R * R));
    K.lo = frac(idx.front(), (unsigned long)R * (R - 1));
    K.hi = frac(idx.back(), (unsigned long)R * (R - 1));
    K.single = idx.size() == 1;
    return K;
}

TailSet tail_from_block(const Construction& con, const Block& b) {
    TailSet K;
    for (std::size_t m : b.maps) K.dig.push_back(con.ifs.digits[m]);
    K.lo = b.lo;
    K.hi = b.hi;
    K.single = b.singleton();
    return K;
}

// Does the open interval (lo, hi) meet the attractor?  Exact: preimages grow
// by 1/r per level, so the interval soon swallows a hull endpoint or clears
// the hull entirely.
bool meets_open(const TailSet& K, const Rat& r, const Rat& lo, const Rat& hi, int depth) {
    if (hi <= K.lo || lo >= K.hi) return false;
    if (lo < K.lo && hi > K.hi) return true;
    if (K.lo > lo && K.lo < hi) return true;
    if (K.hi > lo && K.hi < hi) return true;
    if (depth == 0) fail("CapExceeded", "attractor disjointness recursion too deep");
    for (const Rat& d : K.dig)
        if (meets_open(K, r, (lo - d) / r, (hi - d) / r, depth - 1)) return true;
    return false;
}

// Grid indices whose open images avoid every block attractor, block indices
// excluded.
std::vector<std::uint32_t> shared_indices(const Skeleton& sk, const std::vector<TailSet>& tails) {
    std::set<std::uint32_t> blocked;
    for (const auto& blk : sk.block_idx) blocked.insert(blk.begin(), blk.end());

    const Rat r = frac(1, sk.R);
    std::vector<std::uint32_t> out;
    for (std::uint32_t j = 0; j <= sk.R * (sk.R - 1); ++j) {
        if (blocked.count(j)) continue;
        Rat lo = frac(j, (unsigned long)sk.R * sk.R);
        Rat hi = lo + r;
        bool clear = true;
        for (const TailSet& K : tails)
            if (meets_open(K, r, lo, hi, 200)) {
                clear = false;
                break;
            }
        if (clear) out.push_back(j);
    }
    return out;
}

Construction assemble(const Skeleton& sk, const std::vector<Rat>& block_probs,
                      const std::optional<Rat>& shared_prob) {
    const std::size_t slots = slot_count(sk);
    if (block_probs.size() != slots)
        fail("ProbabilityError", "expected " + std::to_string(slots) + " block weights, got " +
                                     std::to_string(block_probs.size()));
    for (const Rat& p : block_probs)
        if (p <= 0) fail("ProbabilityError", "block weights must be positive");
    if (!(block_probs.front() == block_probs.back()))
        fail("ProbabilityError", "the end blocks must carry equal weight");
    for (const Rat& p : block_probs)
        if (p < block_probs.front()) fail("ProbabilityError", "the end weight must be minimal");

    std::vector<TailSet> tails;
    for (const auto& blk : sk.block_idx) tails.push_back(tail_from_grid(sk.R, blk));
    std::vector<std::uint32_t> shared = shared_indices(sk, tails);

    Rat used(0);
    for (const Rat& p : block_probs) used += p;
    Rat ps;
    if (shared_prob) {
        ps = *shared_prob;
        if (ps <= 0) fail("ProbabilityError", "shared weight must be positive");
        if (!(used + ps * (unsigned long)shared.size() == 1))
            fail("ProbabilityError", "weights do not sum to 1");
    } else {
        if (shared.empty()) fail("ProbabilityError", "no shared maps to absorb the remaining mass");
        ps = (Rat(1) - used) / (unsigned long)shared.size();
        if (ps <= 0) fail("ProbabilityError", "block weights leave no mass for the shared maps");
    }
    if (block_probs.front() > ps)
        fail("ProbabilityError", "the end weight must not exceed the shared weight");

    // every map on the grid, ascending
    struct Entry {
        std::uint32_t j;
        Rat p;
        std::int64_t block; // -1 for shared
    };
    std::vector<Entry> entries;
    std::size_t slot = 0;
    for (std::size_t b = 0; b < sk.block_idx.size(); ++b)
        for (std::uint32_t j : sk.block_idx[b]) entries.push_back({j, block_probs[slot++], (std::int64_t)b});
    for (std::uint32_t j : shared) entries.push_back({j, ps, -1});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.j < b.j; });

    Construction con;
    con.kind = sk.kind;
    con.grid = sk.R;
    con.ifs.ratio = frac(1, sk.R);
    con.blocks.resize(sk.block_idx.size());
    for (std::size_t b = 0; b < tails.size(); ++b) {
        con.blocks[b].lo = tails[b].lo;
        con.blocks[b].hi = tails[b].hi;
    }
    for (std::size_t k = 0; k < entries.size(); ++k) {
        con.ifs.digits.push_back(frac(entries[k].j, (unsigned long)sk.R * sk.R));
        con.ifs.probs.push_back(entries[k].p);
        if (entries[k].block >= 0)
            con.blocks[entries[k].block].maps.push_back(k);
        else
            con.shared.push_back(k);
    }
    validate(con.ifs);
    return con;
}

// Sample points whose addresses land in the classes a block claims: the
// fixed point for a singleton, both hull ends and one interior image for a
// Cantor set.
std::map<std::uint32_t, std::vector<std::size_t>> tail_claims(const Omega& om, const ClassGraph& cg,
                                                              const Construction& con) {
    std::map<std::uint32_t, std::vector<std::size_t>> claims;
    for (std::size_t b = 0; b < con.blocks.size(); ++b) {
        std::vector<Rat> pts{con.blocks[b].lo};
        if (!con.blocks[b].singleton()) {
            pts.push_back(con.blocks[b].hi);
            pts.push_back(con.ifs.apply(con.blocks[b].maps.front(), con.blocks[b].hi));
        }
        for (const Rat& x : pts)
            for (const PointClass& pc : classify(om, cg, x)) {
                if (pc.essential) continue;
                auto& lst = claims[pc.comp];
                if (std::find(lst.begin(), lst.end(), b) == lst.end()) lst.push_back(b);
            }
    }
    return claims;
}

// Certifies that every point whose address stays in the class belongs to the
// tail attractor.  Net intervals are walked depth first, pruned to vectors
// that can still reach the class; an in-class interval must always meet the
// level cover lagging two generations behind, otherwise the limit points it
// carries would sit at positive distance from the attractor.  States are
// keyed by vector and position relative to the unique cover piece they
// touch; two states with equal keys see similar futures, so each key is
// walked once.
struct TailWalk {
    const Omega& om;
    const ClassGraph& cg;
    std::uint32_t comp;
    TailSet K;
    std::size_t budget;
    int lag = 2;

    std::vector<char> reach;
    std::set<std::pair<std::uint32_t, Rat>> seen;
    std::string witness;
    bool exhausted = false;

    TailWalk(const Omega& om_, const ClassGraph& cg_, std::uint32_t comp_, TailSet K_, std::size_t budget_)
        : om(om_), cg(cg_), comp(comp_), K(std::move(K_)), budget(budget_) {}

    // closed frame against the level-m refinement of the hull
    bool cover_meets(const Rat& a, const Rat& b, long m) const {
        if (b < K.lo || a > K.hi) return false;
        if (m <= 0 || K.single) return true;
        const Rat& r = om.ifs.ratio;
        for (const Rat& d : K.dig)
            if (cover_meets((a - d) / r, (b - d) / r, m - 1)) return true;
        return false;
    }

    // left endpoints of the level-m pieces whose closed hull meets [a, b];
    // stops after two, one is the common case
    void piece_hits(const Rat& a, const Rat& b, long m, const Rat& off, const Rat& scale,
                    std::vector<Rat>& out) const {
        if (out.size() >= 2) return;
        Rat plo = off + scale * K.lo;
        Rat phi = off + scale * K.hi;
        if (b < plo || a > phi) return;
        if (m <= 0) {
            out.push_back(plo);
            return;
        }
        const Rat& r = om.ifs.ratio;
        for (const Rat& d : K.dig) piece_hits(a, b, m - 1, off + scale * d, scale * r, out);
    }

    bool walk(std::uint32_t v, const Rat& a, const Rat& scale, std::uint32_t d) {
        if (budget == 0) {
            exhausted = true;
            witness = "containment walk ran out of budget";
            return false;
        }
        --budget;

        const Rat& r = om.ifs.ratio;
        const Rat b = a + scale * om.vecs[v].ell;
        const bool inside = cg.comp_of[v] == comp;
        long m = (long)d - lag;
        if (m < 0) m = 0;

        if (inside && !cover_meets(a, b, m)) {
            witness = "class interval [" + rat_str(a) + ", " + rat_str(b) + "] at level " +
                      std::to_string(d) + " misses the tail cover";
            return false;
        }

        if (d >= (std::uint32_t)lag) {
            std::vector<Rat> hits;
            if (K.single) {
                if (a <= K.lo && K.lo <= b) hits.push_back(K.lo);
            } else {
                piece_hits(a, b, m, Rat(0), Rat(1), hits);
            }
            if (hits.empty()) {
                // the frame cleared the cover, yet some descendant re-enters
                // the class; that descendant inherits the miss
                witness = "interval [" + rat_str(a) + ", " + rat_str(b) + "] at level " +
                          std::to_string(d) + " leads into the class but left the tail cover";
                return false;
            }
            if (hits.size() == 1) {
                Rat rm = scale;
                for (int i = 0; i < lag; ++i) rm /= r;
                Rat rel = (a - hits[0]) / rm;
                if (!seen.emplace(v, std::move(rel)).second) return true; // conjugate state done
            }
            // two pieces touched: no canonical frame, walk it raw
        }

        for (const ChildEdge& e : om.children[v]) {
            if (!reach[e.child]) continue;
            if (!walk(e.child, a + scale * e.h, scale * r, d + 1)) return false;
        }
        return true;
    }

    bool run() {
        std::vector<std::vector<std::uint32_t>> rev(om.vecs.size());
        for (std::uint32_t v = 0; v < om.vecs.size(); ++v)
            for (const ChildEdge& e : om.children[v]) rev[e.child].push_back(v);
        reach.assign(om.vecs.size(), 0);
        std::vector<std::uint32_t> queue = cg.members[comp];
        for (std::uint32_t v : queue) reach[v] = 1;
        while (!queue.empty()) {
            std::uint32_t v = queue.back();
            queue.pop_back();
            for (std::uint32_t u : rev[v])
                if (!reach[u]) {
                    reach[u] = 1;
                    queue.push_back(u);
                }
        }
        if (!reach[0]) return true; // class unreachable, nothing to certify
        return walk(0, Rat(0), Rat(1), 0);
    }
};

std::string class_label(const Omega& om, const ClassGraph& cg, std::uint32_t comp) {
    std::string s = "{";
    for (std::size_t k = 0; k < cg.members[comp].size(); ++k) {
        if (k) s += ", ";
        s += cv_str(om.vecs[cg.members[comp][k]]);
    }
    return s + "}";
}

} // namespace

Construction multipoint(std::uint32_t R, const std::vector<Rat>& block_probs,
                        std::optional<Rat> shared_prob) {
    return assemble(multipoint_skeleton(R), block_probs, shared_prob);
}

Construction multiinterval(std::uint32_t R, const std::vector<Rat>& block_probs,
                           std::optional<Rat> shared_prob) {
    return assemble(multiinterval_skeleton(R), block_probs, shared_prob);
}

bool tail_meets_interval(const Construction& con, std::size_t b, const Rat& lo, const Rat& hi) {
    if (b >= con.blocks.size()) fail("DomainError", "no block " + std::to_string(b));
    return meets_open(tail_from_block(con, con.blocks[b]), con.ifs.ratio, lo, hi, 200);
}

bool RequirementReport::ok() const {
    for (const RequirementCheck& c : checks)
        if (!c.passed) return false;
    return true;
}

const RequirementCheck& RequirementReport::check(int id) const {
    for (const RequirementCheck& c : checks)
        if (c.id == id) return c;
    fail("DomainError", "no requirement " + std::to_string(id));
}

RequirementReport verify_requirements(const Omega& om, const ClassGraph& cg, const Construction& con,
                                      std::size_t budget) {
    if (!(om.ifs.ratio == con.ifs.ratio) || om.ifs.digits != con.ifs.digits ||
        om.ifs.probs != con.ifs.probs)
        fail("DomainError", "closure belongs to a different system");

    RequirementReport rep;

    // 1: the images tile [0,1] without gaps
    {
        RequirementCheck c{1, true, ""};
        const Rat& r = con.ifs.ratio;
        if (!(con.ifs.digits.front() == 0)) {
            c = {1, false, "leftmost map does not start at 0"};
        } else if (!(con.ifs.digits.back() + r == 1)) {
            c = {1, false, "rightmost map does not end at 1"};
        } else {
            for (std::size_t j = 0; j + 1 < con.ifs.size(); ++j)
                if (con.ifs.digits[j + 1] > con.ifs.digits[j] + r) {
                    c = {1, false,
                         "gap between maps " + std::to_string(j) + " and " + std::to_string(j + 1)};
                    break;
                }
        }
        rep.checks.push_back(c);
    }

    // 2: blocks hold one or two maps
    {
        RequirementCheck c{2, true, ""};
        for (std::size_t b = 0; b < con.blocks.size(); ++b)
            if (con.blocks[b].maps.empty() || con.blocks[b].maps.size() > 2) {
                c = {2, false,
                     "block " + std::to_string(b) + " holds " + std::to_string(con.blocks[b].maps.size()) +
                         " maps"};
                break;
            }
        rep.checks.push_back(c);
    }

    // 4: every map outside a block keeps its open image off that block's attractor
    {
        RequirementCheck c{4, true, ""};
        const Rat& r = con.ifs.ratio;
        for (std::size_t b = 0; b < con.blocks.size() && c.passed; ++b) {
            const auto& maps = con.blocks[b].maps;
            for (std::size_t j = 0; j < con.ifs.size(); ++j) {
                if (std::find(maps.begin(), maps.end(), j) != maps.end()) continue;
                Rat lo = con.ifs.digits[j];
                if (tail_meets_interval(con, b, lo, lo + r)) {
                    c = {4, false,
                         "open image of map " + std::to_string(j) + ", (" + rat_str(lo) + ", " +
                             rat_str(lo + r) + "), meets tail " + std::to_string(b)};
                    break;
                }
            }
        }
        rep.checks.push_back(c);
    }

    // 5: every non-essential maximal loop class lies in a block attractor
    {
        RequirementCheck c{5, true, ""};
        auto claims = tail_claims(om, cg, con);
        bool any_exhausted = false;
        for (std::uint32_t comp = 0; comp < cg.members.size() && c.passed; ++comp) {
            if (!cg.is_loop[comp] || comp == cg.essential) continue;
            auto it = claims.find(comp);
            if (it == claims.end()) {
                c = {5, false, "loop class " + class_label(om, cg, comp) + " claimed by no tail"};
                break;
            }
            bool certified = false;
            std::string last;
            for (std::size_t b : it->second) {
                TailWalk w(om, cg, comp, tail_from_block(con, con.blocks[b]), budget);
                if (w.run()) {
                    certified = true;
                    break;
                }
                any_exhausted = any_exhausted || w.exhausted;
                last = "tail " + std::to_string(b) + ": " + w.witness;
            }
            if (!certified) {
                if (any_exhausted) fail("CapExceeded", "containment walk budget too small to decide");
                c = {5, false, "loop class " + class_label(om, cg, comp) + " not contained: " + last};
            }
        }
        rep.checks.push_back(c);
    }

    return rep;
}

void require_requirements(const Omega& om, const ClassGraph& cg, const Construction& con,
                          std::size_t budget) {
    RequirementReport rep = verify_requirements(om, cg, con, budget);
    for (const RequirementCheck& c : rep.checks)
        if (!c.passed)
            fail("RequirementViolation", "check " + std::to_string(c.id) + " failed: " + c.witness);
}

Selection select_probabilities(const std::string& kind, std::uint32_t R, const std::vector<Rat>& targets,
                               std::uint32_t outer_len, std::size_t cap) {
    Skeleton sk = make_skeleton(kind, R);
    const std::size_t slots = slot_count(sk);

    std::vector<Rat> probs = targets;
    if (probs.empty()) {
        std::vector<TailSet> tails;
        for (const auto& blk : sk.block_idx) tails.push_back(tail_from_grid(sk.R, blk));
        std::size_t total = slots + shared_indices(sk, tails).size();
        // repeated halving below the equidistribution weight keeps every
        // block heavier-to-lighter distinct and the shared weight dominant
        Rat base = frac(1, 2 * (unsigned long)total);
        probs.assign(slots, Rat(0));
        if (sk.kind == "multipoint") {
            Rat ends = base;
            for (std::uint32_t i = 0; i < R / 2; ++i) ends /= 2;
            probs.front() = probs.back() = ends;
            Rat p = base;
            for (std::size_t i = 1; i + 1 < slots; ++i) {
                p /= 2;
                probs[i] = p;
            }
        } else {
            Rat p = base;
            for (std::size_t i = 1; i + 1 < slots; ++i) {
                p /= 2;
                probs[i] = p;
            }
            probs.front() = probs.back() = p / 2;
        }
    }

    Selection sel{assemble(sk, probs, std::nullopt), true, {}};

    Omega om = build_omega(sel.con.ifs, cap);
    ClassGraph cg = analyze_classes(om);
    auto claims = tail_claims(om, cg, sel.con);

    struct Bucket {
        double lo, hi;
        std::string name;
        std::int64_t block; // -1 essential, -2 unclaimed
    };
    std::map<std::int64_t, Bucket> by_block;
    std::vector<Bucket> buckets;
    for (std::uint32_t comp = 0; comp < cg.members.size(); ++comp) {
        if (!cg.is_loop[comp]) continue;
        AttainableSet as = attainable_set(om, cg, comp, 2, outer_len);
        if (comp == cg.essential) {
            buckets.push_back({as.outer.lo, as.outer.hi, "essential", -1});
            continue;
        }
        auto it = claims.find(comp);
        if (it == claims.end() || it->second.empty()) {
            buckets.push_back(
                {as.outer.lo, as.outer.hi, "unclaimed class " + std::to_string(comp), -2});
            continue;
        }
        std::int64_t b = (std::int64_t)it->second.front();
        auto bit = by_block.find(b);
        if (bit == by_block.end()) {
            by_block.emplace(b, Bucket{as.outer.lo, as.outer.hi, "tail " + std::to_string(b), b});
        } else {
            bit->second.lo = std::min(bit->second.lo, as.outer.lo);
            bit->second.hi = std::max(bit->second.hi, as.outer.hi);
        }
    }
    // the end blocks share their weight by design, so they share one bucket
    std::int64_t last = (std::int64_t)sel.con.blocks.size() - 1;
    if (by_block.count(0) && by_block.count(last) && last > 0 &&
        by_block[0].lo == by_block[last].lo && by_block[0].hi == by_block[last].hi) {
        by_block[0].name = "tails 0+" + std::to_string(last);
        by_block.erase(last);
    }
    for (auto& kv : by_block) buckets.push_back(kv.second);

    std::sort(buckets.begin(), buckets.end(), [](const Bucket& a, const Bucket& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    for (std::size_t k = 0; k + 1 < buckets.size(); ++k)
        if (!(buckets[k].hi < buckets[k + 1].lo)) sel.disjoint = false;
    for (const Bucket& b : buckets)
        sel.summary.push_back(b.name + ": [" + fmt(b.lo) + ", " + fmt(b.hi) + "]");

    if (!sel.disjoint && targets.empty())
        fail("Infeasible", "attainable components overlap under the weight schedule");
    return sel;
}

} // namespace ifstype
