#include "ifstype/report.hpp"

#include <cstdio>
#include <sstream>

namespace ifstype {

namespace {

std::string mat_str(const RatMatrix& m) {
    std::string out = "[";
    for (std::uint32_t i = 0; i < m.rows; ++i) {
        out += i ? ",[" : "[";
        for (std::uint32_t j = 0; j < m.cols; ++j) {
            if (j) out += ",";
            out += rat_str(m.at(i, j));
        }
        out += "]";
    }
    return out + "]";
}

std::string interval_str(const Interval& iv) {
    return "[" + fmt_g(iv.lo) + "," + fmt_g(iv.hi) + "]";
}

} // namespace

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string render_omega(const Omega& om) {
    std::ostringstream out;
    out << "vectors: " << om.vecs.size() << "\n";
    for (std::size_t v = 0; v < om.vecs.size(); ++v) {
        out << "v" << v + 1 << ": " << cv_str(om.vecs[v]) << "\n";
        for (const ChildEdge& e : om.children[v])
            out << "  -> v" << e.child + 1 << " sibling=" << e.sibling << " h=" << rat_str(e.h)
                << " T=" << mat_str(e.T) << "\n";
    }
    return out.str();
}

std::string render_classes(const Omega& om, const ClassGraph& cg) {
    std::ostringstream out;
    out << "components: " << cg.members.size() << "\n";
    for (std::size_t c = 0; c < cg.members.size(); ++c) {
        out << "class " << c << ": " << (cg.is_loop[c] ? "loop" : "transient");
        if (c == cg.essential) out << " essential";
        out << " members=[";
        for (std::size_t i = 0; i < cg.members[c].size(); ++i)
            out << (i ? "," : "") << "v" << cg.members[c][i] + 1;
        out << "]\n";
    }
    for (std::size_t c = 0; c < cg.comp_children.size(); ++c)
        for (std::uint32_t d : cg.comp_children[c]) out << "class " << c << " -> class " << d << "\n";
    (void)om;
    return out.str();
}

std::string render_dimset(const Omega& om, const ClassGraph& cg, std::uint32_t cycle_len,
                          std::uint32_t outer_len, std::size_t budget) {
    std::ostringstream out;
    for (std::size_t c = 0; c < cg.members.size(); ++c) {
        if (!cg.is_loop[c]) continue;
        AttainableSet s =
            attainable_set(om, cg, static_cast<std::uint32_t>(c), cycle_len, outer_len, budget);
        const char* kind = s.kind == AttainableSet::Kind::Point      ? "point"
                           : s.kind == AttainableSet::Kind::Interval ? "interval"
                                                                     : "bracketed";
        out << "class=" << c << " essential=" << (c == cg.essential ? "yes" : "no")
            << " kind=" << kind << " lo=" << fmt_g(s.lo) << " hi=" << fmt_g(s.hi)
            << " inner=" << interval_str(s.inner) << " outer=" << interval_str(s.outer)
            << " expr_lo=" << (s.lo_expr.empty() ? "-" : s.lo_expr)
            << " expr_hi=" << (s.hi_expr.empty() ? "-" : s.hi_expr) << "\n";
    }
    return out.str();
}

std::string render_tau_csv(const SpectrumCurve& curve) {
    std::ostringstream out;
    out << "q,lower,upper,active\n";
    for (const SpectrumSample& s : curve.samples)
        out << fmt_g(s.q) << "," << fmt_g(s.lower) << "," << fmt_g(s.upper) << "," << s.active
            << (s.tie ? "?" : "") << "\n";
    return out.str();
}

std::string render_f_csv(const MultifractalCurve& mf) {
    std::ostringstream out;
    out << "component,alpha,f\n";
    for (const FComponent& fc : mf.components)
        for (const FPoint& p : fc.arc)
            out << fc.name << "," << fmt_g(p.alpha) << "," << fmt_g(p.f) << "\n";
    return out.str();
}

std::string render_crossings(const std::vector<Crossing>& xs) {
    std::ostringstream out;
    for (const Crossing& x : xs)
        out << "crossing left=" << x.left << " right=" << x.right << " q_lo=" << fmt_g(x.q_lo)
            << " q_hi=" << fmt_g(x.q_hi) << " exact=" << (x.exact ? "yes" : "no")
            << " slope_gap=" << fmt_g(x.slope_gap) << "\n";
    return out.str();
}

std::string render_oracle(const std::vector<std::pair<Rat, SlopeEstimate>>& dims,
                          const std::vector<std::pair<double, SlopeEstimate>>& lqs) {
    std::ostringstream out;
    for (const auto& [x, est] : dims)
        out << "localdim x=" << rat_str(x) << " value=" << fmt_g(est.value)
            << " spread=" << fmt_g(est.spread) << " depths=" << est.points.size() << "\n";
    for (const auto& [q, est] : lqs)
        out << "lq q=" << fmt_g(q) << " value=" << fmt_g(est.value)
            << " spread=" << fmt_g(est.spread) << " depths=" << est.points.size() << "\n";
    return out.str();
}

} // namespace ifstype
