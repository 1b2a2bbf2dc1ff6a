#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ifstype/classes.hpp"
#include "ifstype/constructions.hpp"
#include "ifstype/dimensions.hpp"
#include "ifstype/errors.hpp"
#include "ifstype/ifs.hpp"
#include "ifstype/net.hpp"
#include "ifstype/oracle.hpp"
#include "ifstype/rational.hpp"
#include "ifstype/spectra.hpp"

namespace py = pybind11;
using namespace ifstype;

namespace {

// Accepts str ("3/4"), int, or anything whose str() parses as a rational,
// which covers fractions.Fraction.
Rat to_rat(const py::handle& h) { return rat_parse(py::str(h).cast<std::string>()); }

std::vector<Rat> to_rats(const py::sequence& seq) {
    std::vector<Rat> out;
    out.reserve(py::len(seq));
    for (auto item : seq) out.push_back(to_rat(item));
    return out;
}

py::list rat_strs(const std::vector<Rat>& v) {
    py::list out;
    for (const auto& r : v) out.append(rat_str(r));
    return out;
}

std::optional<Rat> opt_rat(const py::object& o) {
    if (o.is_none()) return std::nullopt;
    return to_rat(o);
}

DepthRange to_depths(const py::object& o) {
    if (o.is_none()) return {};
    auto p = o.cast<std::pair<std::uint32_t, std::uint32_t>>();
    return DepthRange{p.first, p.second};
}

py::tuple interval_pair(const Interval& iv) { return py::make_tuple(iv.lo, iv.hi); }

py::dict path_dict(const SymbolicPath& p) {
    py::dict d;
    d["vectors"] = p.cvs;
    d["edges"] = p.edges;
    d["periodic"] = p.periodic;
    d["preperiod"] = p.preperiod;
    d["period"] = p.period;
    return d;
}

py::dict slope_dict(const SlopeEstimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["spread"] = e.spread;
    d["points"] = e.points;
    return d;
}

const char* kind_name(AttainableSet::Kind k) {
    switch (k) {
        case AttainableSet::Kind::Point: return "point";
        case AttainableSet::Kind::Interval: return "interval";
        default: return "bracketed";
    }
}

py::object expr_or_none(const std::string& s) {
    if (s.empty()) return py::none();
    return py::str(s);
}

// Net structure and loop classes of one system, built once and queried.
struct Analysis {
    Omega om;
    ClassGraph cg;
};

} // namespace

PYBIND11_MODULE(_ifstype, m) {
    m.doc() = "finite-type analysis of equicontractive weighted iterated function systems";

    py::register_exception<Error>(m, "Error");

    py::class_<WeightedIFS>(m, "System",
                            "Maps x -> ratio*x + digit with one probability per map; "
                            "validated against the standard assumptions on construction.")
        .def(py::init([](const py::object& ratio, const py::sequence& digits,
                         const py::sequence& probs) {
                 WeightedIFS f{to_rat(ratio), to_rats(digits), to_rats(probs)};
                 validate(f);
                 return f;
             }),
             py::arg("ratio"), py::arg("digits"), py::arg("probs"))
        .def_property_readonly("ratio", [](const WeightedIFS& f) { return rat_str(f.ratio); })
        .def_property_readonly("digits", [](const WeightedIFS& f) { return rat_strs(f.digits); })
        .def_property_readonly("probs", [](const WeightedIFS& f) { return rat_strs(f.probs); })
        .def("__len__", [](const WeightedIFS& f) { return f.size(); })
        .def("__repr__", [](const WeightedIFS& f) {
            return "System(ratio=" + rat_str(f.ratio) + ", maps=" + std::to_string(f.size()) + ")";
        });

    py::class_<Construction>(m, "Construction",
                             "Grid system from multipoint()/multiinterval(): the block "
                             "decomposition plus the assembled System.")
        .def_property_readonly("kind", [](const Construction& c) { return c.kind; })
        .def_property_readonly("grid", [](const Construction& c) { return c.grid; })
        .def_property_readonly("system", [](const Construction& c) { return c.ifs; })
        .def_property_readonly("shared", [](const Construction& c) { return c.shared; })
        .def_property_readonly("blocks",
                               [](const Construction& c) {
                                   py::list out;
                                   for (const auto& b : c.blocks) {
                                       py::dict d;
                                       d["maps"] = b.maps;
                                       d["lo"] = rat_str(b.lo);
                                       d["hi"] = rat_str(b.hi);
                                       out.append(d);
                                   }
                                   return out;
                               })
        .def("__repr__", [](const Construction& c) {
            return "Construction(" + c.kind + ", R=" + std::to_string(c.grid) + ")";
        });

    m.def(
        "multipoint",
        [](std::uint32_t R, const py::sequence& block_probs, const py::object& shared) {
            return multipoint(R, to_rats(block_probs), opt_rat(shared));
        },
        py::arg("R"), py::arg("block_probs"), py::arg("shared") = py::none(),
        "Grid system whose non-essential points are the isolated fixed points 0, 2/R, ..., 1.");

    m.def(
        "multiinterval",
        [](std::uint32_t R, const py::sequence& block_probs, const py::object& shared) {
            return multiinterval(R, to_rats(block_probs), opt_rat(shared));
        },
        py::arg("R"), py::arg("block_probs"), py::arg("shared") = py::none(),
        "Grid system whose non-essential sets are 0, 1 and a row of two-map Cantor blocks.");

    py::class_<Analysis>(m, "Analysis",
                         "Net structure closure and loop-class graph of a System.")
        .def(py::init([](const WeightedIFS& f, std::size_t cap) {
                 Omega om = build_omega(f, cap);
                 ClassGraph cg = analyze_classes(om);
                 return Analysis{std::move(om), std::move(cg)};
             }),
             py::arg("system"), py::arg("cap") = 4096)
        .def_property_readonly("system", [](const Analysis& a) { return a.om.ifs; })
        .def_property_readonly("vector_count", [](const Analysis& a) { return a.om.vecs.size(); })
        .def(
            "vector",
            [](const Analysis& a, std::uint32_t i) {
                if (i >= a.om.vecs.size()) fail("DomainError", "vector index out of range");
                const CharVec& v = a.om.vecs[i];
                py::dict d;
                d["ell"] = rat_str(v.ell);
                d["nbrs"] = rat_strs(v.nbrs);
                py::list ch;
                for (const auto& e : a.om.children[i]) {
                    py::dict ed;
                    ed["child"] = e.child;
                    ed["sibling"] = e.sibling;
                    ed["h"] = rat_str(e.h);
                    py::list rows;
                    for (std::size_t r = 0; r < e.T.rows; ++r) {
                        py::list row;
                        for (std::size_t c = 0; c < e.T.cols; ++c) row.append(rat_str(e.T.at(r, c)));
                        rows.append(row);
                    }
                    ed["T"] = rows;
                    ch.append(ed);
                }
                d["children"] = ch;
                return d;
            },
            py::arg("index"))
        .def_property_readonly("component_count",
                               [](const Analysis& a) { return a.cg.members.size(); })
        .def_property_readonly("essential", [](const Analysis& a) { return a.cg.essential; })
        .def(
            "component",
            [](const Analysis& a, std::uint32_t c) {
                if (c >= a.cg.members.size()) fail("DomainError", "component index out of range");
                py::dict d;
                d["members"] = a.cg.members[c];
                d["loop"] = static_cast<bool>(a.cg.is_loop[c]);
                d["essential"] = c == a.cg.essential;
                d["children"] = a.cg.comp_children[c];
                return d;
            },
            py::arg("index"))
        .def(
            "classify",
            [](const Analysis& a, const py::object& x, std::uint32_t depth_cap) {
                py::list out;
                for (const auto& pc : classify(a.om, a.cg, to_rat(x), depth_cap)) {
                    py::dict d;
                    d["component"] = pc.comp;
                    d["essential"] = pc.essential;
                    d["path"] = path_dict(pc.path);
                    out.append(d);
                }
                return out;
            },
            py::arg("x"), py::arg("depth_cap") = 10000,
            "Loop class of each address of a rational point.")
        .def(
            "point_dims",
            [](const Analysis& a, const py::object& x, std::uint32_t depth_cap) {
                py::list out;
                for (const auto& pd : local_dims_at(a.om, a.cg, to_rat(x), depth_cap)) {
                    py::dict d;
                    d["dim"] = pd.dim;
                    d["component"] = pd.cls.comp;
                    d["essential"] = pd.cls.essential;
                    out.append(d);
                }
                return out;
            },
            py::arg("x"), py::arg("depth_cap") = 10000,
            "Local dimension along each address of a rational point.")
        .def(
            "attainable",
            [](const Analysis& a, std::uint32_t comp, std::uint32_t cycle_len,
               std::uint32_t outer_len, std::size_t budget) {
                AttainableSet s = attainable_set(a.om, a.cg, comp, cycle_len, outer_len, budget);
                py::dict d;
                d["kind"] = kind_name(s.kind);
                d["lo"] = s.lo;
                d["hi"] = s.hi;
                d["lo_expr"] = expr_or_none(s.lo_expr);
                d["hi_expr"] = expr_or_none(s.hi_expr);
                d["inner"] = interval_pair(s.inner);
                d["outer"] = interval_pair(s.outer);
                return d;
            },
            py::arg("component"), py::arg("cycle_len") = 6, py::arg("outer_len") = 4,
            py::arg("budget") = std::size_t(2000000),
            "Attainable local dimensions of one loop class, with inner/outer brackets.")
        .def("__repr__", [](const Analysis& a) {
            return "Analysis(vectors=" + std::to_string(a.om.vecs.size()) +
                   ", components=" + std::to_string(a.cg.members.size()) + ")";
        });

    m.def(
        "verify",
        [](const Analysis& a, const Construction& con, std::size_t budget) {
            RequirementReport rep = verify_requirements(a.om, a.cg, con, budget);
            py::dict d;
            d["ok"] = rep.ok();
            py::list checks;
            for (const auto& c : rep.checks) {
                py::dict cd;
                cd["id"] = c.id;
                cd["passed"] = c.passed;
                cd["witness"] = c.witness;
                checks.append(cd);
            }
            d["checks"] = checks;
            return d;
        },
        py::arg("analysis"), py::arg("construction"), py::arg("budget") = std::size_t(200000),
        "Run the structural requirement checks of a construction against its closure.");

    py::class_<TauComponent>(m, "Component",
                             "Closed-form L^q spectrum of one block of a construction.")
        .def_property_readonly("name", [](const TauComponent& c) { return c.name; })
        .def_property_readonly("R", [](const TauComponent& c) { return c.R; })
        .def_property_readonly("probs", [](const TauComponent& c) { return rat_strs(c.probs); })
        .def("tau", &TauComponent::tau, py::arg("q"))
        .def("alpha", &TauComponent::alpha, py::arg("q"))
        .def("f", &TauComponent::f, py::arg("q"))
        .def("dim", &TauComponent::dim)
        .def("equal_probs", &TauComponent::equal_probs)
        .def("__repr__",
             [](const TauComponent& c) { return "Component(" + c.name + ")"; });

    py::class_<EssentialEnvelope>(m, "Envelope",
                                  "Linear two-sided bounds for the essential-class spectrum.")
        .def_property_readonly("dmin",
                               [](const EssentialEnvelope& e) { return interval_pair(e.dmin); })
        .def_property_readonly("dmax",
                               [](const EssentialEnvelope& e) { return interval_pair(e.dmax); })
        .def("lower", &EssentialEnvelope::lower, py::arg("q"))
        .def("upper", &EssentialEnvelope::upper, py::arg("q"));

    py::class_<SpectrumCurve>(m, "Spectrum",
                              "Sampled combined L^q spectrum with active-component labels.")
        .def_property_readonly("components",
                               [](const SpectrumCurve& c) { return c.components; })
        .def_property_readonly("envelope",
                               [](const SpectrumCurve& c) -> py::object {
                                   if (!c.envelope) return py::none();
                                   return py::cast(*c.envelope);
                               })
        .def_property_readonly("samples",
                               [](const SpectrumCurve& c) {
                                   py::list out;
                                   for (const auto& s : c.samples) {
                                       py::dict d;
                                       d["q"] = s.q;
                                       d["lower"] = s.lower;
                                       d["upper"] = s.upper;
                                       d["active"] = s.active;
                                       d["tie"] = s.tie;
                                       out.append(d);
                                   }
                                   return out;
                               })
        .def("crossings",
             [](const SpectrumCurve& c) {
                 py::list out;
                 for (const auto& x : crossings(c)) {
                     py::dict d;
                     d["left"] = x.left;
                     d["right"] = x.right;
                     d["q_lo"] = x.q_lo;
                     d["q_hi"] = x.q_hi;
                     d["exact"] = x.exact;
                     d["slope_gap"] = x.slope_gap;
                     out.append(d);
                 }
                 return out;
             },
             "Active-component changes, each with a bracket on its location.")
        .def(
            "multifractal",
            [](const SpectrumCurve& c, double qmin, double qmax, double step, double refine) {
                MultifractalCurve mf = assemble_f(c, GridSpec{qmin, qmax, step, refine});
                py::dict d;
                d["non_concave"] = mf.non_concave;
                py::list comps;
                for (const auto& fc : mf.components) {
                    py::dict fd;
                    fd["name"] = fc.name;
                    py::list arc;
                    for (const auto& p : fc.arc) arc.append(py::make_tuple(p.alpha, p.f));
                    fd["arc"] = arc;
                    fd["isolated"] = fc.isolated;
                    fd["jump"] = fc.jump;
                    fd["annotation"] = fc.annotation;
                    comps.append(fd);
                }
                d["components"] = comps;
                return d;
            },
            py::arg("qmin") = -4.0, py::arg("qmax") = 4.0, py::arg("step") = 1.0 / 256,
            py::arg("refine") = 1.0 / 4096,
            "Legendre arcs of the components plus the essential annotation.");

    m.def(
        "tau_spectrum",
        [](const Analysis& a, const Construction& con, double qmin, double qmax, double step,
           double refine, std::uint32_t cycle_len, std::uint32_t outer_len, std::size_t budget) {
            return tau_mu(a.om, a.cg, con, GridSpec{qmin, qmax, step, refine}, cycle_len,
                          outer_len, budget);
        },
        py::arg("analysis"), py::arg("construction"), py::arg("qmin") = -4.0,
        py::arg("qmax") = 4.0, py::arg("step") = 1.0 / 256, py::arg("refine") = 1.0 / 4096,
        py::arg("cycle_len") = 3, py::arg("outer_len") = 5,
        py::arg("budget") = std::size_t(50000000),
        "Combined L^q spectrum of a construction over a q grid.");

    m.def(
        "refine_atoms",
        [](const WeightedIFS& f, std::uint32_t n, std::size_t budget) {
            DiscreteMeasure mu = refine(f, n, budget);
            py::list out;
            for (const auto& [pos, w] : mu.atoms)
                out.append(py::make_tuple(rat_str(pos), rat_str(w)));
            return out;
        },
        py::arg("system"), py::arg("n"), py::arg("budget") = std::size_t(50000000),
        "Exact level-n refinement as sorted (position, weight) rational pairs.");

    m.def(
        "window_mass",
        [](const WeightedIFS& f, std::uint32_t n, const py::object& lo, const py::object& hi,
           std::size_t budget) { return rat_str(window_mass(f, n, to_rat(lo), to_rat(hi), budget)); },
        py::arg("system"), py::arg("n"), py::arg("lo"), py::arg("hi"),
        py::arg("budget") = std::size_t(10000000),
        "Exact mass of [lo, hi] under the level-n refinement, as a rational string.");

    m.def(
        "default_depths",
        [](const WeightedIFS& f) {
            DepthRange d = default_depths(f);
            return py::make_tuple(d.lo, d.hi);
        },
        py::arg("system"));

    m.def(
        "local_dim_estimate",
        [](const WeightedIFS& f, const py::object& x, const py::object& depths,
           std::size_t budget) {
            return slope_dict(empirical_local_dim(f, to_rat(x), to_depths(depths), budget));
        },
        py::arg("system"), py::arg("x"), py::arg("depths") = py::none(),
        py::arg("budget") = std::size_t(10000000),
        "Empirical local dimension at x from window masses over a depth range.");

    m.def(
        "lq_estimate",
        [](const WeightedIFS& f, const std::vector<double>& qs, const py::object& depths,
           std::size_t budget) {
            py::list out;
            for (const auto& e : empirical_lq(f, qs, to_depths(depths), budget))
                out.append(slope_dict(e));
            return out;
        },
        py::arg("system"), py::arg("qs"), py::arg("depths") = py::none(),
        py::arg("budget") = std::size_t(200000000),
        "Empirical L^q spectrum slopes from partition sums over a depth range.");
}
