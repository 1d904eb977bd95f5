#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "efg/errors.hpp"
#include "efg/logic.hpp"

using namespace efg;

namespace {

FiniteMetricSpace two_point(long d) {
  FiniteMetricSpace m;
  m.labels = {"a", "b"};
  m.dist = {{Rational(0), Rational(d)}, {Rational(d), Rational(0)}};
  return m;
}

Structure one_dim_config(const std::vector<Rational>& values, bool ball) {
  NormedPointConfig c;
  c.dim = 1;
  c.norm = NormKind::L1;
  c.unit_ball_only = ball;
  for (std::size_t i = 0; i < values.size(); ++i) {
    c.labels.push_back("p" + std::to_string(i + 1));
    c.points.push_back({values[i]});
  }
  return make_normed_structure(std::move(c), ball ? Vocabulary::BanachBall
                                                  : Vocabulary::Banach);
}

}  // namespace

TEST_CASE("rational parsing accepts canonical forms and rejects junk") {
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational::parse("6/8") == Rational(3, 4));
  CHECK(Rational::parse("0") == Rational(0));
  CHECK(Rational::parse("-12") == Rational(-12));
  CHECK(!Rational::parse(""));
  CHECK(!Rational::parse("1.5"));
  CHECK(!Rational::parse("1/0"));
  CHECK(!Rational::parse("a/b"));
  CHECK(!Rational::parse("1/ 2"));
  CHECK(Rational::parse_or_throw("3/4") == Rational(3, 4));
  CHECK_THROWS_AS(Rational::parse_or_throw("x"), std::invalid_argument);
}

TEST_CASE("rational strings are canonical") {
  CHECK(Rational(6, 8).str() == "3/4");
  CHECK(Rational(-6, 8).str() == "-3/4");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational(0).str() == "0");
  CHECK(Rational(5, -10).str() == "-1/2");
}

TEST_CASE("floor and ceiling behave on negatives") {
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(7, 2).ceil() == 4);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).ceil() == -3);
  CHECK(Rational(4).floor() == 4);
  CHECK(Rational(4).ceil() == 4);
}

TEST_CASE("truncated arithmetic clamps at the boundaries") {
  CHECK(monus(Rational(1, 2), Rational(3, 4)) == Rational(0));
  CHECK(monus(Rational(3, 4), Rational(1, 2)) == Rational(1, 4));
  CHECK(add_capped(Rational(3, 4), Rational(1, 2), Rational(1)) == Rational(1));
  CHECK(add_capped(Rational(1, 4), Rational(1, 2), Rational(1)) == Rational(3, 4));
  CHECK(midpoint(Rational(1, 2), Rational(1)) == Rational(3, 4));
  // truncated subtraction composes additively even through the clamp
  for (long r = 0; r <= 8; ++r)
    for (long e = 0; e <= 4; ++e)
      for (long d = 0; d <= 4; ++d)
        CHECK(monus(monus(Rational(r, 4), Rational(e, 4)), Rational(d, 4)) ==
              monus(Rational(r, 4), Rational(e + d, 4)));
}

TEST_CASE("equal rationals hash equally") {
  CHECK(Rational(2, 4).hash() == Rational(1, 2).hash());
  CHECK(Rational(-3).hash() == Rational(-6, 2).hash());
}

TEST_CASE("metric validation names the violated invariant") {
  FiniteMetricSpace m = two_point(1);
  CHECK_NOTHROW(validate_metric(m));

  FiniteMetricSpace tri;
  tri.labels = {"a", "b", "c"};
  tri.dist = {{Rational(0), Rational(1), Rational(3)},
              {Rational(1), Rational(0), Rational(1)},
              {Rational(3), Rational(1), Rational(0)}};
  CHECK_THROWS_WITH_AS(validate_metric(tri), doctest::Contains("TriangleViolation"),
                       DomainError);

  FiniteMetricSpace diag = two_point(1);
  diag.dist[1][1] = Rational(1);
  CHECK_THROWS_WITH_AS(validate_metric(diag), doctest::Contains("NonzeroDiagonal"),
                       DomainError);

  FiniteMetricSpace asym = two_point(1);
  asym.dist[0][1] = Rational(2);
  CHECK_THROWS_WITH_AS(validate_metric(asym), doctest::Contains("AsymmetricMatrix"),
                       DomainError);

  FiniteMetricSpace neg = two_point(1);
  neg.dist[0][1] = neg.dist[1][0] = Rational(-1);
  CHECK_THROWS_WITH_AS(validate_metric(neg), doctest::Contains("NonpositiveDistance"),
                       DomainError);
}

TEST_CASE("metric summary values") {
  FiniteMetricSpace m;
  m.labels = {"a", "b", "c"};
  m.dist = {{Rational(0), Rational(1), Rational(2)},
            {Rational(1), Rational(0), Rational(3, 2)},
            {Rational(2), Rational(3, 2), Rational(0)}};
  CHECK(m.max_distance() == Rational(2));
  CHECK(*m.min_positive_distance() == Rational(1));

  FiniteMetricSpace single;
  single.labels = {"a"};
  single.dist = {{Rational(0)}};
  CHECK(single.max_distance() == Rational(0));
  CHECK(!single.min_positive_distance());
}

TEST_CASE("polyhedral norms evaluate exactly") {
  NormedPointConfig c;
  c.dim = 2;
  c.norm = NormKind::L1;
  CHECK(c.norm_linear({Rational(3, 4), Rational(-1, 2)}) == Rational(5, 4));
  c.norm = NormKind::Linf;
  CHECK(c.norm_linear({Rational(3, 4), Rational(-1, 2)}) == Rational(3, 4));
  c.norm = NormKind::WeightedL1;
  c.weights = {Rational(2), Rational(1, 2)};
  CHECK(c.norm_linear({Rational(3, 4), Rational(-1, 2)}) == Rational(7, 4));
  c.norm = NormKind::WeightedLinf;
  CHECK(c.norm_linear({Rational(3, 4), Rational(-1, 2)}) == Rational(3, 2));
}

TEST_CASE("euclidean comparisons go through squared values") {
  NormedPointConfig c;
  c.dim = 2;
  c.norm = NormKind::L2;
  CHECK(c.norm_l2_squared({Rational(3), Rational(4)}) == Rational(25));
  CHECK(c.compare_norm({Rational(3), Rational(4)}, Rational(5)) == 0);
  CHECK(c.compare_norm({Rational(3), Rational(4)}, Rational(6)) < 0);
  CHECK(c.compare_norm({Rational(3), Rational(4)}, Rational(4)) > 0);
  // sqrt(2) against 1 + slack without materializing roots
  CHECK(sqrt_leq_sqrt_plus(Rational(2), Rational(1), Rational(1, 2)));
  CHECK(!sqrt_leq_sqrt_plus(Rational(2), Rational(1), Rational(2, 5)));
  CHECK(sqrt_leq_sqrt_plus(Rational(4), Rational(4), Rational(0)));
}

TEST_CASE("normed validation rejects malformed configurations") {
  NormedPointConfig c;
  c.dim = 2;
  c.norm = NormKind::L1;
  c.labels = {"p"};
  c.points = {{Rational(1)}};  // wrong arity
  CHECK_THROWS_WITH_AS(validate_normed(c), doctest::Contains("BadShape"), DomainError);

  NormedPointConfig ball;
  ball.dim = 1;
  ball.norm = NormKind::L1;
  ball.unit_ball_only = true;
  ball.labels = {"p"};
  ball.points = {{Rational(3, 2)}};
  CHECK_THROWS_WITH_AS(validate_normed(ball), doctest::Contains("NormOverflow"),
                       DomainError);

  NormedPointConfig w;
  w.dim = 1;
  w.norm = NormKind::WeightedL1;
  w.weights = {Rational(0)};
  w.labels = {"p"};
  w.points = {{Rational(1)}};
  CHECK_THROWS_WITH_AS(validate_normed(w), doctest::Contains("NonpositiveWeight"),
                       DomainError);
}

TEST_CASE("structure json round trips both carrier kinds") {
  Structure m = make_metric_structure(two_point(2));
  Json jm = structure_to_json(m);
  Structure m2 = parse_structure(jm, Precision::Kind::Additive);
  CHECK(m2.is_metric());
  CHECK(m2.metric().d(0, 1) == Rational(2));
  CHECK(structure_to_json(m2) == jm);

  NormedPointConfig c;
  c.dim = 2;
  c.norm = NormKind::WeightedLinf;
  c.weights = {Rational(2), Rational(1)};
  c.labels = {"p", "q"};
  c.points = {{Rational(1, 2), Rational(0)}, {Rational(-1, 4), Rational(1)}};
  Structure n = make_normed_structure(c, Vocabulary::Banach);
  Json jn = structure_to_json(n);
  Structure n2 = parse_structure(jn, Precision::Kind::Multiplicative);
  CHECK(!n2.is_metric());
  CHECK(n2.normed().points[1][0] == Rational(-1, 4));
  CHECK(structure_to_json(n2) == jn);
}

TEST_CASE("semantics picks the vocabulary during parsing") {
  Json j = structure_to_json(make_metric_structure(two_point(1)));
  CHECK(parse_structure(j, Precision::Kind::Additive).vocab == Vocabulary::MetricCorr);
  CHECK(parse_structure(j, Precision::Kind::Multiplicative).vocab == Vocabulary::MetricIso);
}

TEST_CASE("atomic evaluation over metric carriers") {
  Structure s = make_metric_structure(two_point(2));
  Assignment ab{{"u", 0}, {"v", 1}};
  Assignment aa{{"u", 0}, {"v", 0}};
  CHECK(eval_atomic(s, AtomicFormula::dist_leq(Rational(2), "u", "v"), ab));
  CHECK(!eval_atomic(s, AtomicFormula::dist_leq(Rational(3, 2), "u", "v"), ab));
  CHECK(eval_atomic(s, AtomicFormula::dist_geq(Rational(2), "u", "v"), ab));
  CHECK(!eval_atomic(s, AtomicFormula::dist_geq(Rational(5, 2), "u", "v"), ab));
  CHECK(eval_atomic(s, AtomicFormula::dist_geq(Rational(0), "u", "v"), aa));
  CHECK_THROWS_WITH_AS(
      eval_atomic(s, AtomicFormula::dist_leq(Rational(1), "u", "w"), ab),
      doctest::Contains("UnboundVariable"), DomainError);
  CHECK_THROWS_WITH_AS(
      eval_atomic(s, AtomicFormula::norm_leq({{"u", Rational(1)}}), ab),
      doctest::Contains("VocabularyMismatch"), DomainError);
}

TEST_CASE("atomic evaluation over normed carriers") {
  Structure s = one_dim_config({Rational(3, 2), Rational(-1, 2)}, false);
  Assignment pq{{"x", 0}, {"y", 1}};
  // || 1*p1 + 1*p2 || = |3/2 - 1/2| = 1
  AtomicFormula sum = AtomicFormula::norm_leq({{"x", Rational(1)}, {"y", Rational(1)}});
  CHECK(eval_atomic(s, sum, pq));
  AtomicFormula big = AtomicFormula::norm_leq({{"x", Rational(1)}});
  CHECK(!eval_atomic(s, big, pq));  // 3/2 > 1
  CHECK(eval_atomic(s, AtomicFormula::norm_geq({{"x", Rational(1)}}), pq));

  Structure ball = one_dim_config({Rational(7, 8)}, true);
  Assignment p{{"x", 0}};
  CHECK(eval_atomic(ball, AtomicFormula::norm_leq({{"x", Rational(1)}}, Rational(7, 8)), p));
  CHECK(!eval_atomic(ball, AtomicFormula::norm_leq({{"x", Rational(1)}}, Rational(3, 4)), p));
  CHECK(eval_atomic(ball, AtomicFormula::norm_geq({{"x", Rational(1)}}, Rational(1, 2)), p));
}

TEST_CASE("breakpoints and saturation for a simple pair") {
  Structure a = make_metric_structure(two_point(1));
  Structure b = make_metric_structure(two_point(2));
  auto add = distance_breakpoints(a, b, Precision::Kind::Additive);
  CHECK(add == std::vector<Rational>{Rational(0), Rational(1, 2), Rational(1)});
  auto mult = distance_breakpoints(a.with_vocab(Vocabulary::MetricIso),
                                   b.with_vocab(Vocabulary::MetricIso),
                                   Precision::Kind::Multiplicative);
  CHECK(mult == std::vector<Rational>{Rational(1, 2), Rational(1), Rational(2)});
  CHECK(good_saturation_bound(a, b) == 1);

  FiniteMetricSpace thirds;
  thirds.labels = {"a", "b"};
  thirds.dist = {{Rational(0), Rational(1, 3)}, {Rational(1, 3), Rational(0)}};
  Structure c = make_metric_structure(thirds);
  CHECK(good_saturation_bound(c, c) == 3);
}

TEST_CASE("approximation widens atoms by family and kind") {
  Precision add = Precision::additive(Rational(1, 2));
  Precision mult = Precision::multiplicative(Rational(3, 2));

  AtomicFormula leq = AtomicFormula::dist_leq(Rational(1), "u", "v");
  AtomicFormula geq = AtomicFormula::dist_geq(Rational(1), "u", "v");
  CHECK(*appr(leq, add).threshold == Rational(2));       // r + 2 eps
  CHECK(*appr(geq, add).threshold == Rational(0));       // r - 2 eps, floored
  CHECK(*appr(leq, mult).threshold == Rational(3, 2));   // s * r
  CHECK(*appr(geq, mult).threshold == Rational(2, 3));   // r / s

  AtomicFormula nleq = AtomicFormula::norm_leq({{"x", Rational(2)}});
  AtomicFormula ngeq = AtomicFormula::norm_geq({{"x", Rational(2)}});
  CHECK(appr(nleq, mult).term[0].second == Rational(4, 3));  // coeff / s
  CHECK(appr(ngeq, mult).term[0].second == Rational(3));     // coeff * s

  AtomicFormula bleq = AtomicFormula::norm_leq({{"x", Rational(1)}}, Rational(3, 4));
  AtomicFormula bgeq = AtomicFormula::norm_geq({{"x", Rational(1)}}, Rational(1, 4));
  CHECK(*appr(bleq, add).threshold == Rational(1));  // capped at 1
  CHECK(*appr(bgeq, add).threshold == Rational(0));  // floored at 0
}

TEST_CASE("mismatched precision kinds are rejected") {
  AtomicFormula leq = AtomicFormula::dist_leq(Rational(1), "u", "v");
  // a multiplicative budget cannot widen an additive-vocabulary atom directly;
  // the mismatch surfaces when the atom belongs to a thresholded ball family
  AtomicFormula ball = AtomicFormula::norm_leq({{"x", Rational(1)}}, Rational(1, 2));
  CHECK_THROWS_WITH_AS(appr(ball, Precision::multiplicative(Rational(2))),
                       doctest::Contains("SemanticsMismatch"), DomainError);
  AtomicFormula whole = AtomicFormula::norm_leq({{"x", Rational(1)}});
  CHECK_THROWS_WITH_AS(appr(whole, Precision::additive(Rational(1, 2))),
                       doctest::Contains("SemanticsMismatch"), DomainError);
  CHECK_NOTHROW(appr(leq, Precision::additive(Rational(1, 2))));
  CHECK_NOTHROW(appr(leq, Precision::multiplicative(Rational(2))));
}

TEST_CASE("precision composition is sequential budget spending") {
  Precision a = Precision::additive(Rational(1, 4));
  Precision b = Precision::additive(Rational(1, 2));
  CHECK(a.compose(b).value == Rational(3, 4));
  Precision s = Precision::multiplicative(Rational(3, 2));
  Precision t = Precision::multiplicative(Rational(4, 3));
  CHECK(s.compose(t).value == Rational(2));
  CHECK(Precision::additive(Rational(0)).is_identity());
  CHECK(Precision::multiplicative(Rational(1)).is_identity());
  CHECK_THROWS_AS(a.compose(s), DomainError);
  CHECK_THROWS_AS(Precision::additive(Rational(-1)), DomainError);
  CHECK_THROWS_AS(Precision::multiplicative(Rational(1, 2)), DomainError);
}

TEST_CASE("connective builders canonicalize") {
  AtomicFormula x = AtomicFormula::dist_leq(Rational(1), "u", "v");
  AtomicFormula y = AtomicFormula::dist_geq(Rational(1), "u", "v");
  FormulaPtr fx = make_atom(x), fy = make_atom(y);
  CHECK(equal_formulas(make_and({fx, fy}), make_and({fy, fx})));
  CHECK(equal_formulas(make_and({fx, fx, fy}), make_and({fx, fy})));
  CHECK(!equal_formulas(make_and({fx, fy}), make_or({fx, fy})));
  CHECK(equal_formulas(make_true(), make_and({})));
  CHECK(equal_formulas(make_false(), make_or({})));
  CHECK(compare_formulas(*fx, *fx) == 0);
  CHECK(compare_formulas(*fx, *fy) != 0);
}

TEST_CASE("dual swap is an involution and dualizes connectives") {
  AtomicFormula x = AtomicFormula::dist_leq(Rational(1), "u", "v");
  CHECK(weak_neg(x).kind == AtomicFormula::Kind::DistGeq);
  CHECK(*weak_neg(x).threshold == Rational(1));
  CHECK(weak_neg(weak_neg(x)) == x);

  FormulaPtr f = make_exists(
      "w", make_and({make_atom(x), make_forall("z", make_or({make_atom(weak_neg(x))}))}));
  FormulaPtr n = weak_neg(f);
  CHECK(n->op == Formula::Op::Forall);
  CHECK(equal_formulas(weak_neg(n), f));
}

TEST_CASE("quantified evaluation ranges over the carrier") {
  FiniteMetricSpace m;
  m.labels = {"a", "b", "c"};
  m.dist = {{Rational(0), Rational(1), Rational(2)},
            {Rational(1), Rational(0), Rational(1)},
            {Rational(2), Rational(1), Rational(0)}};
  Structure s = make_metric_structure(m);
  // every point has a neighbour within 1
  FormulaPtr f = make_forall(
      "x", make_exists("y", make_and({make_atom(AtomicFormula::dist_leq(Rational(1), "x", "y")),
                                      make_atom(AtomicFormula::dist_geq(Rational(1), "x", "y"))})));
  CHECK(eval_formula(s, f, {}));
  // no point is at distance >= 3 from a
  FormulaPtr g = make_exists("y", make_atom(AtomicFormula::dist_geq(Rational(3), "x", "y")));
  CHECK(!eval_formula(s, g, {{"x", 0}}));
}

TEST_CASE("approximation distributes through connectives") {
  Precision add = Precision::additive(Rational(1, 4));
  AtomicFormula x = AtomicFormula::dist_leq(Rational(1), "u", "v");
  FormulaPtr f = make_exists("u", make_or({make_atom(x), make_atom(weak_neg(x))}));
  FormulaPtr g = appr_formula(f, add);
  CHECK(g->op == Formula::Op::Exists);
  const Formula& body = *g->kids[0];
  REQUIRE(body.op == Formula::Op::Or);
  std::multiset<std::string> thresholds;
  for (const auto& kid : body.kids) thresholds.insert(kid->atom.threshold->str());
  CHECK(thresholds == std::multiset<std::string>{"1/2", "3/2"});
}

TEST_CASE("bounded-fragment membership tracks the sharpness parameter") {
  AtomicFormula fine = AtomicFormula::dist_leq(Rational(1, 3), "u", "v");
  CHECK(is_good(fine, 3, Vocabulary::MetricIso));
  CHECK(!is_good(fine, 2, Vocabulary::MetricIso));
  AtomicFormula low = AtomicFormula::dist_geq(Rational(1, 5), "u", "v");
  CHECK(is_good(low, 5, Vocabulary::MetricIso));
  CHECK(!is_good(low, 4, Vocabulary::MetricIso));

  AtomicFormula norm3 = AtomicFormula::norm_leq(
      {{"x", Rational(3)}, {"y", Rational(-2)}, {"z", Rational(1)}});
  CHECK(is_good(norm3, 3, Vocabulary::Banach));
  CHECK(!is_good(norm3, 2, Vocabulary::Banach));

  CHECK_THROWS_AS(is_good(fine, 0, Vocabulary::MetricIso), DomainError);
  CHECK_THROWS_AS(is_good(fine, 2, Vocabulary::MetricCorr), DomainError);
}

TEST_CASE("widening a bounded atom lands in the rescaled fragment") {
  for (long num : {1L, 2L, 3L}) {
    AtomicFormula at = AtomicFormula::dist_leq(Rational(num, 3), "u", "v");
    for (long sn : {9L, 5L, 3L}) {
      Rational s(sn, sn == 9 ? 8 : sn == 5 ? 4 : 2);
      unsigned k2 = static_cast<unsigned>((Rational(3) * s).ceil().get_ui());
      CHECK(is_good(appr(at, Precision::multiplicative(s)), k2, Vocabulary::MetricIso));
      CHECK(is_good(appr(AtomicFormula::dist_geq(Rational(num, 3), "u", "v"),
                         Precision::multiplicative(s)),
                    k2, Vocabulary::MetricIso));
    }
  }
}

// Truncation at zero breaks the clean slack-peeling identity for lower-bound
// atoms; the divergent pair of formulas is pinned here.
TEST_CASE("threshold truncation makes slack peeling fail at the floor") {
  Structure s = make_metric_structure(two_point(1));
  FiniteMetricSpace close;
  close.labels = {"a", "b"};
  close.dist = {{Rational(0), Rational(1, 8)}, {Rational(1, 8), Rational(0)}};
  Structure tiny = make_metric_structure(close);

  AtomicFormula d0 = AtomicFormula::dist_geq(Rational(0), "u", "v");
  Precision eps = Precision::additive(Rational(1, 2));
  Precision del = Precision::additive(Rational(1, 8));
  Precision rest = Precision::additive(Rational(3, 8));

  AtomicFormula lhs = appr(weak_neg(appr(d0, eps)), del);   // d <= 1/4
  AtomicFormula rhs = weak_neg(appr(d0, rest));             // d <= 0
  CHECK(*lhs.threshold == Rational(1, 4));
  CHECK(*rhs.threshold == Rational(0));
  Assignment ab{{"u", 0}, {"v", 1}};
  CHECK(eval_atomic(tiny, lhs, ab));
  CHECK(!eval_atomic(tiny, rhs, ab));

  // away from the floor the identity is exact
  AtomicFormula d2 = AtomicFormula::dist_geq(Rational(2), "u", "v");
  CHECK(appr(weak_neg(appr(d2, eps)), del) == weak_neg(appr(d2, rest)));
}

TEST_CASE("zero-threshold lower bounds defeat the dual witness reading") {
  Structure s = make_metric_structure(two_point(1));
  Assignment same{{"u", 0}, {"v", 0}};
  AtomicFormula d0 = AtomicFormula::dist_geq(Rational(0), "u", "v");
  CHECK(eval_atomic(s, d0, same));
  // yet every positive slack also validates the weak-negated approximation
  for (long e = 1; e <= 4; ++e) {
    AtomicFormula dual = weak_neg(appr(d0, Precision::additive(Rational(e, 4))));
    CHECK(eval_atomic(s, dual, same));
  }
}

TEST_CASE("unit-ball cap breaks slack peeling near norm one") {
  Structure ball = one_dim_config({Rational(15, 16)}, true);
  Assignment p{{"x", 0}};
  AtomicFormula at = AtomicFormula::norm_leq({{"x", Rational(1)}}, Rational(7, 8));
  Precision eps = Precision::additive(Rational(1, 4));
  Precision del = Precision::additive(Rational(1, 8));
  Precision rest = Precision::additive(Rational(1, 8));

  AtomicFormula lhs = appr(weak_neg(appr(at, eps)), del);  // ||x|| >= 7/8
  AtomicFormula rhs = weak_neg(appr(at, rest));            // ||x|| >= 1
  CHECK(*lhs.threshold == Rational(7, 8));
  CHECK(*rhs.threshold == Rational(1));
  CHECK(eval_atomic(ball, lhs, p));
  CHECK(!eval_atomic(ball, rhs, p));
}

TEST_CASE("strong negation complements a formula on a concrete pair") {
  Structure a = make_metric_structure(two_point(1));
  Structure b = make_metric_structure(two_point(2));
  std::vector<FormulaPtr> samples = {
      make_atom(AtomicFormula::dist_leq(Rational(1), "u", "v")),
      make_atom(AtomicFormula::dist_geq(Rational(3, 2), "u", "v")),
      make_exists("u", make_atom(AtomicFormula::dist_geq(Rational(2), "u", "v"))),
      make_forall("v", make_or({make_atom(AtomicFormula::dist_leq(Rational(0), "u", "v")),
                                make_atom(AtomicFormula::dist_geq(Rational(2), "u", "v"))}))};
  for (const auto& f : samples) {
    FormulaPtr n = strong_negation(f, a, b);
    for (const Structure* s : {&a, &b})
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) {
          Assignment asg{{"u", u}, {"v", v}};
          CHECK(eval_formula(*s, f, asg) != eval_formula(*s, n, asg));
        }
  }
}

TEST_CASE("formula json round trips plain and shared forms") {
  AtomicFormula x = AtomicFormula::dist_leq(Rational(1, 2), "u", "v");
  AtomicFormula n = AtomicFormula::norm_geq({{"x", Rational(2)}, {"y", Rational(-1)}});
  FormulaPtr shared_leaf = make_atom(x);
  FormulaPtr f = make_and({make_exists("u", make_or({shared_leaf, make_atom(n)})),
                           make_forall("v", shared_leaf)});
  for (bool shared : {false, true}) {
    Json j = formula_to_json(f, shared);
    CHECK(equal_formulas(formula_from_json(j), f));
  }
  // shared form references each distinct node once
  Json js = formula_to_json(f, true);
  CHECK(js.contains("nodes"));
  CHECK(js.contains("root"));
}
