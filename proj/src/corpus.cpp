#include "efg/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "efg/errors.hpp"

namespace efg {
namespace {

// Flattened upper triangle in row order under a point permutation.
std::vector<unsigned> canonical_form(const std::vector<std::vector<unsigned>>& d) {
  const std::size_t n = d.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<unsigned> best;
  do {
    std::vector<unsigned> flat;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) flat.push_back(d[perm[i]][perm[j]]);
    if (best.empty() || flat < best) best = flat;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool triangle_ok(const std::vector<std::vector<unsigned>>& d) {
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (d[i][k] > d[i][j] + d[j][k]) return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<FiniteMetricSpace> metric_corpus(unsigned max_points, unsigned max_distance) {
  if (max_points == 0 || max_points > 6 || max_distance == 0)
    fail("BadArgument", "corpus bounds out of range");
  std::vector<FiniteMetricSpace> out;
  for (unsigned n = 1; n <= max_points; ++n) {
    const unsigned m = n * (n - 1) / 2;
    std::set<std::vector<unsigned>> kept;
    std::vector<unsigned> flat(m, 1);
    while (true) {
      std::vector<std::vector<unsigned>> d(n, std::vector<unsigned>(n, 0));
      std::size_t pos = 0;
      for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = i + 1; j < n; ++j) {
          d[i][j] = d[j][i] = flat[pos++];
        }
      }
      if (triangle_ok(d)) kept.insert(canonical_form(d));
      // next distance vector
      std::size_t l = 0;
      for (; l < m; ++l) {
        if (++flat[l] <= max_distance) break;
        flat[l] = 1;
      }
      if (l == m) break;
    }
    for (const auto& form : kept) {
      FiniteMetricSpace s;
      for (unsigned i = 0; i < n; ++i) s.labels.push_back("p" + std::to_string(i + 1));
      s.dist.assign(n, std::vector<Rational>(n, Rational(0)));
      std::size_t pos = 0;
      for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = i + 1; j < n; ++j) {
          Rational v(static_cast<long>(form[pos++]));
          s.dist[i][j] = v;
          s.dist[j][i] = v;
        }
      }
      validate_metric(s);
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace efg
