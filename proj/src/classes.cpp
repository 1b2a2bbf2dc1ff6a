#include "ifstype/classes.hpp"

#include <algorithm>

#include "ifstype/errors.hpp"

namespace ifstype {

namespace {

// Iterative Tarjan on plain adjacency lists.
std::vector<std::uint32_t> scc_of(const std::vector<std::vector<std::uint32_t>>& adj,
                                  std::uint32_t& comp_count) {
    const std::uint32_t n = std::uint32_t(adj.size());
    std::vector<std::int32_t> index(n, -1), low(n, 0);
    std::vector<bool> onstack(n, false);
    std::vector<std::uint32_t> stack, comp(n, 0);
    std::int32_t counter = 0;
    comp_count = 0;

    struct Frame { std::uint32_t v; std::uint32_t next; };
    for (std::uint32_t s = 0; s < n; ++s) {
        if (index[s] >= 0) continue;
        std::vector<Frame> frames{{s, 0}};
        index[s] = low[s] = counter++;
        stack.push_back(s);
        onstack[s] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next < adj[f.v].size()) {
                std::uint32_t w = adj[f.v][f.next++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    onstack[w] = true;
                    frames.push_back({w, 0});
                } else if (onstack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                std::uint32_t v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    for (;;) {
                        std::uint32_t w = stack.back();
                        stack.pop_back();
                        onstack[w] = false;
                        comp[w] = comp_count;
                        if (w == v) break;
                    }
                    ++comp_count;
                }
            }
        }
    }
    return comp;
}

} // namespace

ClassGraph analyze_classes(const Omega& om) {
    const std::uint32_t n = std::uint32_t(om.vecs.size());
    std::vector<std::vector<std::uint32_t>> adj(n);
    std::vector<bool> self_edge(n, false);
    for (std::uint32_t v = 0; v < n; ++v) {
        for (const ChildEdge& e : om.children[v]) {
            if (e.child == v) self_edge[v] = true;
            adj[v].push_back(e.child);
        }
        std::sort(adj[v].begin(), adj[v].end());
        adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
    }

    ClassGraph cg;
    std::uint32_t m = 0;
    cg.comp_of = scc_of(adj, m);
    cg.members.assign(m, {});
    for (std::uint32_t v = 0; v < n; ++v) cg.members[cg.comp_of[v]].push_back(v);

    cg.is_loop.assign(m, false);
    for (std::uint32_t c = 0; c < m; ++c)
        cg.is_loop[c] = cg.members[c].size() > 1 ||
                        (cg.members[c].size() == 1 && self_edge[cg.members[c][0]]);

    cg.comp_children.assign(m, {});
    for (std::uint32_t v = 0; v < n; ++v)
        for (std::uint32_t w : adj[v])
            if (cg.comp_of[v] != cg.comp_of[w]) cg.comp_children[cg.comp_of[v]].push_back(cg.comp_of[w]);
    for (auto& ch : cg.comp_children) {
        std::sort(ch.begin(), ch.end());
        ch.erase(std::unique(ch.begin(), ch.end()), ch.end());
    }

    std::vector<std::uint32_t> sinks;
    for (std::uint32_t c = 0; c < m; ++c)
        if (cg.comp_children[c].empty()) sinks.push_back(c);
    if (sinks.empty()) fail("NoEssentialClass", "the child graph has no absorbing class");
    if (sinks.size() > 1)
        fail("MultipleEssentialClasses",
             "the child graph has " + std::to_string(sinks.size()) + " absorbing classes");
    if (!cg.is_loop[sinks[0]])
        fail("NoEssentialClass", "the absorbing class carries no cycle"); // impossible: every vertex has children
    cg.essential = sinks[0];
    return cg;
}

std::vector<PointClass> classify(const Omega& om, const ClassGraph& cg, const Rat& x,
                                 std::uint32_t depth_cap) {
    std::vector<PointClass> out;
    for (SymbolicPath& p : symbolic(om, x, depth_cap)) {
        PointClass pc;
        pc.comp = 0;
        pc.essential = false;
        bool settled = false;
        for (std::uint32_t v : p.cvs) {
            if (cg.in_essential(v)) { // child-closed: the tail stays here
                pc.comp = cg.essential;
                pc.essential = true;
                settled = true;
                break;
            }
        }
        if (!settled && p.periodic) {
            pc.comp = cg.comp_of[p.cvs[p.preperiod]];
            settled = true;
        }
        if (!settled)
            fail("DepthExceeded",
                 "address of " + rat_str(x) + " did not settle within " + std::to_string(depth_cap) + " steps");
        pc.path = std::move(p);
        out.push_back(std::move(pc));
    }
    return out;
}

} // namespace ifstype
