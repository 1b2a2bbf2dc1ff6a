#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifstype/constructions.hpp"
#include "ifstype/dimensions.hpp"

namespace ifstype {

// Loop-class component whose L^q-spectrum has a closed form: a block of
// maps with contraction 1/R whose open images are pairwise disjoint, so
// tau(q) = -log(sum of p^q) / log R on its Cantor attractor.
struct TauComponent {
    std::string name;
    std::vector<Rat> probs;
    std::uint32_t R = 0;

    double tau(double q) const;
    double alpha(double q) const; // d tau / dq, the Legendre parameter
    double f(double q) const;     // q * alpha(q) - tau(q)
    double dim() const;           // log(#probs)/log R, the attractor dimension
    bool equal_probs() const;
};

// Linear two-sided envelopes for the essential-class spectrum, built from
// its local-dimension brackets: dmin lies in [dmin.lo, dmin.hi] and dmax in
// [dmax.lo, dmax.hi] (outer bracket ends outside, cycle ends inside).
// Concavity plus the asymptotic slopes tau(q)/q -> dmin (q -> +inf) and
// -> dmax (q -> -inf) give the min() forms; both arms pinch to -1 at q = 0.
struct EssentialEnvelope {
    Interval dmin;
    Interval dmax;

    double lower(double q) const;
    double upper(double q) const;
};

struct SpectrumSample {
    double q = 0;
    double lower = 0;
    double upper = 0;
    std::string active; // component attaining the combined upper envelope
    bool tie = false;   // the essential band straddles the winning value
};

struct GridSpec {
    double qmin = -4.0;
    double qmax = 4.0;
    double step = 1.0 / 256;
    double refine = 1.0 / 4096; // inserted around active-label changes
};

struct SpectrumCurve {
    std::vector<TauComponent> components;
    std::optional<EssentialEnvelope> envelope;
    std::vector<SpectrumSample> samples;
};

// Pointwise min of the closed-form component spectra and the essential
// envelope over the grid, with active-component labels.  The block
// decomposition comes from the construction; the essential brackets from
// the cycle and walk analysis of the class graph at the given lengths.
SpectrumCurve tau_mu(const Omega& om, const ClassGraph& cg, const Construction& con,
                     const GridSpec& grid = {}, std::uint32_t cycle_len = 3,
                     std::uint32_t outer_len = 5, std::size_t budget = 50000000);

struct Crossing {
    std::string left;
    std::string right;
    double q_lo = 0; // bracket of the crossing point; ends equal when exact
    double q_hi = 0;
    bool exact = false;   // both sides closed forms, solved by bisection
    double slope_gap = 0; // lower bound on the slope jump across the kink
};

// Active-label changes of the assembled curve.  Closed-form pairs are
// solved to 1e-10; a change into the essential band is reported as the
// interval between the crossings with its two envelope arms.  Throws
// Error("NoCrossing") when several components never exchange the minimum.
std::vector<Crossing> crossings(const SpectrumCurve& curve);

struct FPoint {
    double alpha = 0;
    double f = 0;
};

struct FComponent {
    std::string name;
    std::vector<FPoint> arc; // parametric Legendre arc, alpha increasing
    bool isolated = false;   // arc collapsed to a single point (equal probs)
    bool jump = false;       // positive isolated value: a jump of the global curve
    bool annotation = false; // essential: f = 1 attached to the dim bracket ends
};

struct MultifractalCurve {
    std::vector<FComponent> components;
    bool non_concave = false;
};

// Legendre transforms of the closed-form components plus the height-1
// essential annotation; flags the global curve when the pieces violate
// concavity (checked against the upper hull with the gaps filled at 0).
MultifractalCurve assemble_f(const SpectrumCurve& curve, const GridSpec& grid = {});

} // namespace ifstype
