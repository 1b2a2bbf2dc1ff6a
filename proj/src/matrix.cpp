#include "ifstype/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "ifstype/errors.hpp"

namespace ifstype {

RatMatrix product(const RatMatrix& lhs, const RatMatrix& rhs) {
    if (lhs.cols != rhs.rows) fail("ShapeMismatch", "matrix product shape mismatch");
    RatMatrix out(lhs.rows, rhs.cols);
    for (std::uint32_t i = 0; i < lhs.rows; ++i) {
        for (std::uint32_t k = 0; k < lhs.cols; ++k) {
            const Rat& l = lhs.at(i, k);
            if (l == 0) continue;
            for (std::uint32_t j = 0; j < rhs.cols; ++j) {
                const Rat& r = rhs.at(k, j);
                if (r == 0) continue;
                out.at(i, j) += l * r;
            }
        }
    }
    return out;
}

RatMatrix product(const std::vector<const RatMatrix*>& path) {
    if (path.empty()) fail("ShapeMismatch", "empty matrix path");
    RatMatrix acc = *path.front();
    for (std::size_t i = 1; i < path.size(); ++i) acc = product(acc, *path[i]);
    return acc;
}

Rat entry_sum_norm(const RatMatrix& m) {
    Rat s = 0;
    for (const Rat& x : m.a) s += x;
    return s;
}

Rat min_row_sum(const RatMatrix& m) {
    Rat best = 0;
    for (std::uint32_t i = 0; i < m.rows; ++i) {
        Rat s = 0;
        for (std::uint32_t j = 0; j < m.cols; ++j) s += m.at(i, j);
        if (i == 0 || s < best) best = s;
    }
    return best;
}

Rat max_row_sum(const RatMatrix& m) {
    Rat best = 0;
    for (std::uint32_t i = 0; i < m.rows; ++i) {
        Rat s = 0;
        for (std::uint32_t j = 0; j < m.cols; ++j) s += m.at(i, j);
        if (s > best) best = s;
    }
    return best;
}

Rat min_col_sum(const RatMatrix& m) {
    Rat best = 0;
    for (std::uint32_t j = 0; j < m.cols; ++j) {
        Rat s = 0;
        for (std::uint32_t i = 0; i < m.rows; ++i) s += m.at(i, j);
        if (j == 0 || s < best) best = s;
    }
    return best;
}

namespace {

bool is_triangular(const RatMatrix& m) {
    bool upper = true, lower = true;
    for (std::uint32_t i = 0; i < m.rows; ++i)
        for (std::uint32_t j = 0; j < m.cols; ++j) {
            if (m.at(i, j) == 0) continue;
            if (i > j) upper = false;
            if (i < j) lower = false;
        }
    return upper || lower;
}

// Iterative Tarjan over the support graph of a square matrix.
std::vector<std::vector<std::uint32_t>> support_components(const RatMatrix& m) {
    const std::uint32_t n = m.rows;
    std::vector<std::int32_t> index(n, -1), low(n, 0);
    std::vector<bool> onstack(n, false);
    std::vector<std::uint32_t> stack;
    std::vector<std::vector<std::uint32_t>> comps;
    std::int32_t counter = 0;

    struct Frame { std::uint32_t v; std::uint32_t next; };
    for (std::uint32_t s = 0; s < n; ++s) {
        if (index[s] >= 0) continue;
        std::vector<Frame> frames{{s, 0}};
        index[s] = low[s] = counter++;
        stack.push_back(s);
        onstack[s] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next < n) {
                std::uint32_t w = f.next++;
                if (m.at(f.v, w) == 0) continue;
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
                    std::vector<std::uint32_t> comp;
                    for (;;) {
                        std::uint32_t w = stack.back();
                        stack.pop_back();
                        onstack[w] = false;
                        comp.push_back(w);
                        if (w == v) break;
                    }
                    comps.push_back(std::move(comp));
                }
            }
        }
    }
    return comps;
}

RatMatrix submatrix(const RatMatrix& m, const std::vector<std::uint32_t>& idx) {
    RatMatrix out(std::uint32_t(idx.size()), std::uint32_t(idx.size()));
    for (std::uint32_t i = 0; i < out.rows; ++i)
        for (std::uint32_t j = 0; j < out.cols; ++j)
            out.at(i, j) = m.at(idx[i], idx[j]);
    return out;
}

// Power iteration on B + I for an irreducible nonnegative block B.  The shift
// makes the block primitive, so the Collatz-Wielandt enclosure
//   min_i (Mx)_i/x_i  <=  sp(M)  <=  max_i (Mx)_i/x_i   (any x > 0)
// contracts geometrically.  Writes sp(B) and reports success.
bool power_iteration_block(const RatMatrix& block, double tol, std::size_t max_iter, double& out) {
    const std::uint32_t n = block.rows;
    std::vector<double> b(std::size_t(n) * n);
    double scale = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        b[i] = rat_double(block.a[i]);
        scale = std::max(scale, b[i]);
    }
    if (scale == 0) { out = 0; return true; }
    for (double& x : b) x /= scale;

    std::vector<double> v(n, 1.0), w(n, 0.0);
    for (std::size_t it = 0; it < max_iter; ++it) {
        for (std::uint32_t i = 0; i < n; ++i) {
            double s = v[i]; // the +I shift
            const double* row = &b[std::size_t(i) * n];
            for (std::uint32_t j = 0; j < n; ++j) s += row[j] * v[j];
            w[i] = s;
        }
        double lo = w[0] / v[0], hi = lo;
        for (std::uint32_t i = 1; i < n; ++i) {
            double q = w[i] / v[i];
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        if (hi - lo <= tol * std::max(1.0, hi)) {
            out = (0.5 * (lo + hi) - 1.0) * scale;
            return true;
        }
        double norm = 0;
        for (std::uint32_t i = 0; i < n; ++i) norm = std::max(norm, w[i]);
        for (std::uint32_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    }
    return false;
}

} // namespace

std::vector<Rat> char_poly(const RatMatrix& b) {
    const std::uint32_t n = b.rows;
    std::vector<Rat> c(n + 1, Rat(0));
    c[0] = 1;
    RatMatrix m(n, n); // M_0 = 0
    for (std::uint32_t k = 1; k <= n; ++k) {
        RatMatrix bm = product(b, m); // B M_{k-1}
        for (std::uint32_t i = 0; i < n; ++i) bm.at(i, i) += c[k - 1];
        m = std::move(bm);            // M_k
        RatMatrix am = product(b, m);
        Rat tr = 0;
        for (std::uint32_t i = 0; i < n; ++i) tr += am.at(i, i);
        c[k] = -tr / Rat(int(k));
    }
    return c;
}

namespace {

int sign_at(const std::vector<Rat>& poly, const Rat& t) {
    Rat acc = 0;
    for (const Rat& c : poly) acc = acc * t + c;
    return acc > 0 ? 1 : (acc < 0 ? -1 : 0);
}

// Perron root of an irreducible block, exact-polynomial path.  The root is
// the largest real root and simple, so the polynomial is strictly positive
// beyond it and strictly negative on a genuine interval just below it.
// Scanning downward from above therefore meets the first sign change exactly
// at the root; a finer grid is tried if the negative window was missed.
double char_poly_perron(const RatMatrix& block) {
    std::vector<Rat> poly = char_poly(block);
    Rat lo = min_row_sum(block);
    Rat hi = max_row_sum(block);
    if (sign_at(poly, hi) <= 0) hi = hi + 1;

    for (std::size_t cells = 1u << 12; cells <= (1u << 24); cells *= 8) {
        Rat step = (hi - lo) / long(cells);
        if (step == 0) break;
        Rat t = hi;
        Rat prev = hi;
        bool found = false;
        while (t > lo) {
            t -= step;
            if (t < lo) t = lo;
            if (sign_at(poly, t) <= 0) { found = true; break; }
            prev = t;
        }
        if (!found) continue;
        Rat a = t, bnd = prev; // sign(a) <= 0 < sign(bnd)
        for (int it = 0; it < 120; ++it) {
            Rat mid = (a + bnd) / 2;
            int s = sign_at(poly, mid);
            if (s == 0) return rat_double(mid);
            if (s < 0) a = mid; else bnd = mid;
        }
        return rat_double((a + bnd) / 2);
    }
    fail("NonConvergence", "characteristic polynomial root isolation failed");
}

} // namespace

SpectralRadius spectral_radius(const RatMatrix& m, double tol, std::size_t max_iter) {
    if (m.rows != m.cols) fail("ShapeMismatch", "spectral radius of a non-square matrix");
    for (const Rat& x : m.a)
        if (x < 0) fail("NegativeEntry", "spectral radius expects a nonnegative matrix");

    SpectralRadius res;
    if (m.rows == 1) {
        res.value = rat_double(m.a[0]);
        res.exact = true;
        res.exact_value = m.a[0];
        return res;
    }
    if (is_triangular(m)) {
        Rat best = m.at(0, 0);
        for (std::uint32_t i = 1; i < m.rows; ++i) best = std::max(best, m.at(i, i));
        res.value = rat_double(best);
        res.exact = true;
        res.exact_value = best;
        return res;
    }

    // The spectrum of a matrix in block-triangular form is the union over the
    // diagonal blocks, so the Perron root is the max over communicating
    // classes of the support graph.
    double best = 0;
    for (const auto& comp : support_components(m)) {
        if (comp.size() == 1) {
            best = std::max(best, rat_double(m.at(comp[0], comp[0])));
            continue;
        }
        RatMatrix block = submatrix(m, comp);
        double v = 0;
        if (power_iteration_block(block, tol, max_iter, v)) {
            best = std::max(best, v);
        } else if (block.rows <= 8) {
            best = std::max(best, char_poly_perron(block));
        } else {
            fail("NonConvergence", "power iteration stalled on a block of size " + std::to_string(block.rows));
        }
    }
    res.value = best;
    return res;
}

} // namespace ifstype
