#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ifstype/classes.hpp"
#include "ifstype/dimensions.hpp"
#include "ifstype/net.hpp"
#include "ifstype/oracle.hpp"
#include "ifstype/spectra.hpp"

namespace ifstype {

// Plain-text and CSV renderings of the analysis results.  All orders are
// the deterministic orders of the underlying structures and all decimals
// are printed with 12 significant digits, so reruns are byte-identical.

// %.12g decimal form shared by every report.
std::string fmt_g(double v);

// One line per characteristic vector: id, normalized length, neighbour
// offsets, then one indented line per child edge with its sibling index,
// relative position and primitive transition matrix.
std::string render_omega(const Omega& om);

// Loop-class structure: one line per component with members and flags,
// then the condensation edges.
std::string render_classes(const Omega& om, const ClassGraph& cg);

// One line per loop class: the attainable-dimension description produced
// by attainable_set under the given walk lengths.
std::string render_dimset(const Omega& om, const ClassGraph& cg, std::uint32_t cycle_len,
                          std::uint32_t outer_len, std::size_t budget = 50000000);

// CSV with header q,lower,upper,active.
std::string render_tau_csv(const SpectrumCurve& curve);

// CSV with header component,alpha,f; isolated points are single rows, the
// essential annotation two rows at height 1.
std::string render_f_csv(const MultifractalCurve& mf);

// One line per active-component switch; exact crossings carry q_lo == q_hi.
std::string render_crossings(const std::vector<Crossing>& xs);

// Estimator lines: localdim rows for the points, lq rows for the exponents.
std::string render_oracle(const std::vector<std::pair<Rat, SlopeEstimate>>& dims,
                          const std::vector<std::pair<double, SlopeEstimate>>& lqs);

} // namespace ifstype
