#include "gmkf/multi_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gmkf {

int total_degree(const MultiIndex& alpha) {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  // Within a degree class the lexicographically larger tuple comes first.
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

void enumerate_compositions(int dim, int remaining, MultiIndex& scratch, int pos,
                            std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    scratch[pos] = remaining;
    out.push_back(scratch);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    scratch[pos] = k;
    enumerate_compositions(dim, remaining - k, scratch, pos + 1, out);
  }
}

} // namespace

std::size_t total_degree_count(int dim, int degree) {
  // C(dim + degree, degree) without overflow for desk-scale arguments.
  std::size_t num = 1;
  for (int i = 1; i <= degree; ++i) num = num * static_cast<std::size_t>(dim + i) / i;
  return num;
}

MultiIndexSet build_index_set(int dim, int degree, Truncation rule) {
  if (dim < 1) throw std::invalid_argument("build_index_set: dim must be >= 1");
  if (degree < 0) throw std::invalid_argument("build_index_set: degree must be >= 0");
  if (rule == Truncation::Custom)
    throw std::invalid_argument("build_index_set: Custom sets need an explicit index list");

  constexpr std::size_t kMaxEntries = 10'000'000;
  MultiIndexSet set;
  set.dim = dim;
  set.degree = degree;
  set.rule = rule;

  if (rule == Truncation::TotalDegree) {
    if (total_degree_count(dim, degree) > kMaxEntries)
      throw std::invalid_argument("build_index_set: total-degree set too large");
    MultiIndex scratch(dim, 0);
    for (int d = 0; d <= degree; ++d)
      enumerate_compositions(dim, d, scratch, 0, set.indices);
  } else {
    if (std::pow(degree + 1.0, dim) > static_cast<double>(kMaxEntries))
      throw std::invalid_argument("build_index_set: tensor-degree set too large");
    MultiIndex alpha(dim, 0);
    while (true) {
      set.indices.push_back(alpha);
      int k = dim - 1;
      while (k >= 0 && alpha[k] == degree) alpha[k--] = 0;
      if (k < 0) break;
      ++alpha[k];
    }
    std::sort(set.indices.begin(), set.indices.end(), graded_lex_less);
  }
  return set;
}

MultiIndexSet custom_index_set(int dim, std::vector<MultiIndex> indices) {
  if (dim < 1) throw std::invalid_argument("custom_index_set: dim must be >= 1");
  if (indices.empty()) throw std::invalid_argument("custom_index_set: empty index list");
  for (const auto& alpha : indices) {
    if (static_cast<int>(alpha.size()) != dim)
      throw std::invalid_argument("custom_index_set: index dimension mismatch");
    for (int e : alpha)
      if (e < 0) throw std::invalid_argument("custom_index_set: negative exponent");
  }
  std::sort(indices.begin(), indices.end(), graded_lex_less);
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());

  MultiIndexSet set;
  set.dim = dim;
  set.rule = Truncation::Custom;
  set.indices = std::move(indices);
  set.degree = total_degree(set.indices.back());
  return set;
}

std::size_t MultiIndexHash::operator()(const MultiIndex& a) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int e : a) {
    h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

std::unordered_map<MultiIndex, int, MultiIndexHash> index_positions(const MultiIndexSet& set) {
  std::unordered_map<MultiIndex, int, MultiIndexHash> pos;
  pos.reserve(set.indices.size());
  for (int t = 0; t < set.size(); ++t) pos.emplace(set.indices[t], t);
  return pos;
}

MultiIndex embed_index(const MultiIndex& alpha, int offset, int total_dim) {
  if (offset < 0 || offset + static_cast<int>(alpha.size()) > total_dim)
    throw std::invalid_argument("embed_index: block does not fit the target germ");
  MultiIndex out(total_dim, 0);
  std::copy(alpha.begin(), alpha.end(), out.begin() + offset);
  return out;
}

MultiIndexSet union_embedded(const MultiIndexSet& A, int offA,
                             const MultiIndexSet& B, int offB) {
  const int total = std::max(offA + A.dim, offB + B.dim);
  std::vector<MultiIndex> all;
  all.reserve(A.indices.size() + B.indices.size() + 1);
  for (const auto& a : A.indices) all.push_back(embed_index(a, offA, total));
  for (const auto& b : B.indices) all.push_back(embed_index(b, offB, total));
  all.push_back(MultiIndex(total, 0));
  return custom_index_set(total, std::move(all));
}

} // namespace gmkf
