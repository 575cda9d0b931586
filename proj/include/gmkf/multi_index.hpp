#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

namespace gmkf {

/// Exponent tuple of one multivariate polynomial term; length = germ dimension.
using MultiIndex = std::vector<int>;

/// Sum of the exponents.
int total_degree(const MultiIndex& alpha);

/// Graded lexicographic order: ascending total degree, ties broken so that
/// within a degree class the first variable carries the higher exponent first
/// ((0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...).
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

/// Truncation rule of an index set.
enum class Truncation { TotalDegree, TensorDegree, Custom };

/// A finite, graded-lex sorted set of multi-indices over `dim` variables.
struct MultiIndexSet {
  int dim = 1;
  int degree = 0; // truncation degree; max total degree for Custom sets
  Truncation rule = Truncation::TotalDegree;
  std::vector<MultiIndex> indices;

  int size() const { return static_cast<int>(indices.size()); }
};

/// Enumerate the total-degree (|alpha| <= degree) or tensor-degree
/// (max_k alpha_k <= degree) set over `dim` variables in graded-lex order.
/// The zero index comes first and, for degree >= 1, every unit index is present.
MultiIndexSet build_index_set(int dim, int degree, Truncation rule = Truncation::TotalDegree);

/// Wrap an explicit list of indices (Custom rule): validates dimensions and
/// nonnegativity, sorts graded-lex, and drops duplicates.
MultiIndexSet custom_index_set(int dim, std::vector<MultiIndex> indices);

/// Number of elements of the total-degree set, C(dim + degree, degree).
std::size_t total_degree_count(int dim, int degree);

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& a) const noexcept;
};

/// Position lookup table for a set's indices.
std::unordered_map<MultiIndex, int, MultiIndexHash> index_positions(const MultiIndexSet& set);

/// Re-express `alpha` (over a block of variables starting at `offset`) as an
/// index over `total_dim` variables, zero-padded outside the block.
MultiIndex embed_index(const MultiIndex& alpha, int offset, int total_dim);

/// Union of two sets embedded at the given offsets into a common germ of
/// max(offA + A.dim, offB + B.dim) variables; always contains the zero index.
MultiIndexSet union_embedded(const MultiIndexSet& A, int offA,
                             const MultiIndexSet& B, int offB);

} // namespace gmkf
