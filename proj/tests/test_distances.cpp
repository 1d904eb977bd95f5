#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "efg/corpus.hpp"
#include "efg/distances.hpp"
#include "efg/errors.hpp"

using namespace efg;

namespace {

FiniteMetricSpace two_pt(long d) {
  FiniteMetricSpace m;
  m.labels = {"a", "b"};
  m.dist = {{Rational(0), Rational(d)}, {Rational(d), Rational(0)}};
  return m;
}

FiniteMetricSpace one_pt() {
  FiniteMetricSpace m;
  m.labels = {"p"};
  m.dist = {{Rational(0)}};
  return m;
}

FiniteMetricSpace line3() {
  FiniteMetricSpace m;
  m.labels = {"a", "b", "c"};
  m.dist = {{Rational(0), Rational(1), Rational(2)},
            {Rational(1), Rational(0), Rational(1)},
            {Rational(2), Rational(1), Rational(0)}};
  return m;
}

FiniteMetricSpace triangle3() {
  FiniteMetricSpace m;
  m.labels = {"a", "b", "c"};
  m.dist = {{Rational(0), Rational(1), Rational(1)},
            {Rational(1), Rational(0), Rational(1)},
            {Rational(1), Rational(1), Rational(0)}};
  return m;
}

}  // namespace

TEST_CASE("correspondence distortion over linked pairs") {
  FiniteMetricSpace a = two_pt(1), b = two_pt(2);
  CHECK(correspondence_distortion(a, b, {{0, 0}, {1, 1}}) == Rational(1));
  CHECK(correspondence_distortion(a, b, {{0, 1}, {1, 0}}) == Rational(1));
  // linking one left point to both right points exposes the full spread
  CHECK(correspondence_distortion(a, b, {{0, 0}, {0, 1}, {1, 1}}) == Rational(2));
  CHECK(correspondence_distortion(a, a, {{0, 0}, {1, 1}}) == Rational(0));

  CHECK_THROWS_WITH_AS(correspondence_distortion(a, b, {{0, 0}}),
                       doctest::Contains("BadCorrespondence"), DomainError);
  CHECK_THROWS_WITH_AS(correspondence_distortion(a, b, {}),
                       doctest::Contains("BadCorrespondence"), DomainError);
  CHECK_THROWS_WITH_AS(correspondence_distortion(a, b, {{0, 0}, {1, 5}}),
                       doctest::Contains("BadIndex"), DomainError);
}

TEST_CASE("exhaustive distance minimization with witnesses") {
  FiniteMetricSpace x1 = two_pt(1), x2 = two_pt(2), pt = one_pt();

  GhResult r = gh_bruteforce(x1, x2);
  CHECK(r.distance == Rational(1, 2));
  CHECK(correspondence_distortion(x1, x2, r.witness) == Rational(1));

  CHECK(gh_bruteforce(x1, x1).distance == Rational(0));
  CHECK(gh_bruteforce(pt, x2).distance == Rational(1));
  CHECK(gh_bruteforce(x2, pt).distance == Rational(1));
  CHECK(gh_bruteforce(line3(), triangle3()).distance == Rational(1, 2));

  // witness validity and symmetry across a corpus slice
  auto corpus = metric_corpus();
  for (std::size_t i = 0; i < 13; ++i)
    for (std::size_t j = i; j < 13; ++j) {
      GhResult fwd = gh_bruteforce(corpus[i], corpus[j]);
      GhResult bwd = gh_bruteforce(corpus[j], corpus[i]);
      CHECK(fwd.distance == bwd.distance);
      CHECK(correspondence_distortion(corpus[i], corpus[j], fwd.witness) ==
            fwd.distance * Rational(2));
      if (i == j) CHECK(fwd.distance == Rational(0));
    }
}

TEST_CASE("least bilipschitz stretch over bijections") {
  FiniteMetricSpace x1 = two_pt(1), x2 = two_pt(2);

  LipschitzResult r = lipschitz_bruteforce(x1, x2);
  REQUIRE(r.exists);
  CHECK(r.factor == Rational(2));
  // recompute the stretch of the returned bijection
  Rational worst(1);
  for (int i = 0; i < 2; ++i)
    for (int j = i + 1; j < 2; ++j) {
      Rational da = x1.d(i, j), db = x2.d(r.bijection[i], r.bijection[j]);
      worst = std::max(worst, std::max(da / db, db / da));
    }
  CHECK(worst == r.factor);

  CHECK(lipschitz_bruteforce(x1, x1).factor == Rational(1));
  CHECK(!lipschitz_bruteforce(x1, one_pt()).exists);
  CHECK(lipschitz_bruteforce(line3(), triangle3()).factor == Rational(2));
}

TEST_CASE("two-sided set distance inside one space") {
  FiniteMetricSpace ln = line3();
  CHECK(hausdorff_distance(ln, {0}, {2}) == Rational(2));
  CHECK(hausdorff_distance(ln, {0, 2}, {1}) == Rational(1));
  CHECK(hausdorff_distance(ln, {0}, {0, 1}) == Rational(1));
  CHECK(hausdorff_distance(ln, {0, 1, 2}, {0, 1, 2}) == Rational(0));
  CHECK_THROWS_WITH_AS(hausdorff_distance(ln, {}, {0}), doctest::Contains("EmptySet"),
                       DomainError);
}

TEST_CASE("gluing along a correspondence") {
  FiniteMetricSpace x1 = two_pt(1), x2 = two_pt(2);
  std::vector<std::pair<int, int>> ident = {{0, 0}, {1, 1}};

  GlueResult g = glue_spaces(x1, x2, ident, Rational(1, 2));
  CHECK_NOTHROW(validate_metric(g.space));
  // both sides embed isometrically
  CHECK(g.space.d(g.embed_a[0], g.embed_a[1]) == Rational(1));
  CHECK(g.space.d(g.embed_b[0], g.embed_b[1]) == Rational(2));
  // linked points sit at the separation, unlinked ones route through it
  CHECK(g.space.d(g.embed_a[0], g.embed_b[0]) == Rational(1, 2));
  CHECK(g.space.d(g.embed_a[1], g.embed_b[1]) == Rational(1, 2));
  CHECK(g.space.d(g.embed_a[0], g.embed_b[1]) == Rational(3, 2));
  CHECK(g.space.d(g.embed_a[1], g.embed_b[0]) == Rational(3, 2));
  CHECK(hausdorff_distance(g.space, g.embed_a, g.embed_b) == Rational(1, 2));

  // separation below half the distortion cannot produce a metric
  CHECK_THROWS_WITH_AS(glue_spaces(x1, x2, ident, Rational(1, 4)),
                       doctest::Contains("DistortionTooLarge"), DomainError);
  CHECK_THROWS_WITH_AS(glue_spaces(x1, x2, ident, Rational(-1)),
                       doctest::Contains("BadPrecision"), DomainError);

  // zero separation collapses linked points
  GlueResult z = glue_spaces(x1, x1, ident, Rational(0));
  CHECK(z.space.size() == 2);
  CHECK(z.embed_a == z.embed_b);
  CHECK(z.space.d(z.embed_a[0], z.embed_a[1]) == Rational(1));
}

TEST_CASE("bisected game thresholds snap to the flip point") {
  FiniteMetricSpace x1 = two_pt(1), x2 = two_pt(2), pt = one_pt();
  Rational res(1, 16);

  GameDistance add = game_distance(x1, x2, Precision::Kind::Additive, res);
  CHECK(add.bounded);
  CHECK(add.snapped);
  CHECK(add.lo == Rational(1, 2));
  CHECK(add.hi == Rational(1, 2));
  CHECK(add.lo == gh_bruteforce(x1, x2).distance);

  GameDistance mul = game_distance(x1, x2, Precision::Kind::Multiplicative, res);
  CHECK(mul.bounded);
  CHECK(mul.snapped);
  CHECK(mul.lo == Rational(2));
  CHECK(mul.lo == lipschitz_bruteforce(x1, x2).factor);

  GameDistance far = game_distance(pt, x2, Precision::Kind::Additive, res);
  CHECK(far.snapped);
  CHECK(far.lo == Rational(1));

  GameDistance unb = game_distance(x1, pt, Precision::Kind::Multiplicative, res);
  CHECK(!unb.bounded);

  GameDistance self = game_distance(x1, x1, Precision::Kind::Additive, res);
  CHECK(self.snapped);
  CHECK(self.lo == Rational(0));
}

TEST_CASE("bounded-distortion correspondence enumeration") {
  FiniteMetricSpace a = two_pt(1), b = two_pt(2);

  // oracle: filter all pair subsets by cover and distortion
  auto brute = [&](const Rational& cap) {
    std::set<std::vector<std::pair<int, int>>> out;
    std::vector<std::pair<int, int>> all = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (unsigned m = 1; m < 16; ++m) {
      std::vector<std::pair<int, int>> pairs;
      for (unsigned t = 0; t < 4; ++t)
        if (m >> t & 1u) pairs.push_back(all[t]);
      bool ca0 = false, ca1 = false, cb0 = false, cb1 = false;
      for (auto [i, j] : pairs) {
        (i == 0 ? ca0 : ca1) = true;
        (j == 0 ? cb0 : cb1) = true;
      }
      if (!(ca0 && ca1 && cb0 && cb1)) continue;
      if (correspondence_distortion(a, b, pairs) <= cap) out.insert(pairs);
    }
    return out;
  };

  for (const Rational& cap : {Rational(1, 2), Rational(1), Rational(2), Rational(3)}) {
    auto got = correspondences_within(a, b, cap);
    std::set<std::vector<std::pair<int, int>>> got_set;
    for (auto& pairs : got) {
      std::sort(pairs.begin(), pairs.end());
      CHECK(correspondence_distortion(a, b, pairs) <= cap);
      got_set.insert(pairs);
    }
    CHECK(got_set.size() == got.size());
    CHECK(got_set == brute(cap));
  }

  CHECK(correspondences_within(a, b, Rational(1, 2)).empty());
  GhResult r = gh_bruteforce(a, b);
  auto at_min = correspondences_within(a, b, r.distance * Rational(2));
  std::vector<std::pair<int, int>> w = r.witness;
  std::sort(w.begin(), w.end());
  bool found = false;
  for (auto pairs : at_min) {
    std::sort(pairs.begin(), pairs.end());
    found = found || pairs == w;
  }
  CHECK(found);
}
