#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifstype/rational.hpp"

namespace ifstype {

// Dense nonnegative matrix with exact rational entries.  Transition matrices
// between net intervals are small (rows and columns indexed by neighbour
// sets), so no sparsity or blocking is attempted.
struct RatMatrix {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<Rat> a; // row-major

    RatMatrix() = default;
    RatMatrix(std::uint32_t r, std::uint32_t c) : rows(r), cols(c), a(std::size_t(r) * c, Rat(0)) {}

    Rat& at(std::uint32_t i, std::uint32_t j) { return a[std::size_t(i) * cols + j]; }
    const Rat& at(std::uint32_t i, std::uint32_t j) const { return a[std::size_t(i) * cols + j]; }

    bool operator==(const RatMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

// Exact product; throws Error("ShapeMismatch") unless lhs.cols == rhs.rows.
RatMatrix product(const RatMatrix& lhs, const RatMatrix& rhs);

// Product along a path, left to right.  Identity on an empty path is not
// defined here: paths always carry at least one matrix.
RatMatrix product(const std::vector<const RatMatrix*>& path);

// Entry-sum norm: sum of all entries.  Submultiplicative on nonnegative
// matrices with matching shapes.
Rat entry_sum_norm(const RatMatrix& m);

// Minimum row and column sums.  Supermultiplicative on nonnegative square
// matrices.
Rat min_row_sum(const RatMatrix& m);
Rat max_row_sum(const RatMatrix& m);
Rat min_col_sum(const RatMatrix& m);

// Coefficients of det(tI - m) from the leading monic term down to the
// constant, computed exactly by trace recurrence.
std::vector<Rat> char_poly(const RatMatrix& m);

struct SpectralRadius {
    double value = 0;
    bool exact = false;       // true when derived from rational data with no iteration
    std::optional<Rat> exact_value; // set for 1x1 and triangular inputs
};

// Spectral radius of a square nonnegative matrix.
//
// 1x1 and triangular matrices are answered exactly.  Otherwise the matrix is
// split into communicating classes; each nontrivial class is handled by power
// iteration on the diagonally shifted block, whose Collatz-Wielandt quotients
// give a certified enclosure that tightens geometrically.  If the enclosure
// fails to reach `tol` within `max_iter` steps the routine falls back to exact
// characteristic-polynomial bisection for blocks up to 8x8 and otherwise
// throws Error("NonConvergence").
SpectralRadius spectral_radius(const RatMatrix& m, double tol = 1e-12, std::size_t max_iter = 100000);

} // namespace ifstype
