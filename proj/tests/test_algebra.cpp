#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fewnomial/real_expr.hpp"
#include "fewnomial/unipoly.hpp"

using namespace fewnomial;

TEST_CASE("eval_interval on exact rationals") {
  RealExpr e = re_const(rat(44, 31));
  Interval iv = eval_interval(e, 16);
  REQUIRE(iv.contains(rat(44, 31)));
  Dyadic w = iv.width();
  // width <= 2^-12 * max(1, |44/31|)
  REQUIRE(w.to_rat() <= rat(44, 31) * pow_rat(Rat(2), -12));
}

TEST_CASE("eval_interval of sqrt(2) against the squaring oracle") {
  RealExpr e = re_pow(re_const(2), rat(1, 2));
  Interval iv = eval_interval(e, 30);
  // oracle: lo^2 <= 2 <= hi^2 and width below target
  Rat lo = iv.lo().to_rat(), hi = iv.hi().to_rat();
  REQUIRE(lo * lo <= 2);
  REQUIRE(hi * hi >= 2);
  REQUIRE(hi - lo <= pow_rat(Rat(2), -26) * 2);
}

TEST_CASE("eval_interval exact product identity") {
  RealExpr e = re_mul(re_const(rat(3, 2)), re_const(rat(2, 3)));
  REQUIRE(e->exact().has_value());
  REQUIRE(*e->exact() == 1);
  Interval iv = eval_interval(e, 16);
  REQUIRE(iv.contains(Rat(1)));
}

TEST_CASE("sign_of basics") {
  REQUIRE(sign_of(re_sub(re_const(rat(44, 31)), re_const(1))) == Sign::positive);
  REQUIRE(sign_of(re_sub(re_const(1), re_pow(re_const(2), rat(1, 2)))) == Sign::negative);
  // exactly zero but irrational-shaped: must stay undecided at any precision
  RealExpr s2 = re_pow(re_const(3), rat(1, 2));
  RealExpr z = re_sub(re_mul(s2, s2), re_const(3));
  REQUIRE(sign_of(z, 1024) == Sign::undecided);
}

TEST_CASE("pow rejects certified-negative bases at construction") {
  REQUIRE_THROWS_AS(re_pow(re_const(-2), rat(1, 2)), PowOfNonpositive);
  RealExpr neg = re_sub(re_const(1), re_const(3));
  REQUIRE_THROWS_AS(re_pow(neg, rat(1, 3)), PowOfNonpositive);
}

TEST_CASE("pow keeps exactness on perfect powers") {
  RealExpr e = re_pow(re_const(4), rat(1, 2));
  REQUIRE(e->exact().has_value());
  REQUIRE(*e->exact() == 2);
}

TEST_CASE("interval soundness and monotone refinement on random DAGs") {
  std::mt19937_64 rng(20240811);
  std::uniform_int_distribution<int> small(1, 9);
  std::uniform_int_distribution<int> op(0, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    // random DAG of depth <= 6 over small positive rationals (positive
    // leaves keep pow applicable and division well-defined)
    std::vector<RealExpr> pool;
    for (int i = 0; i < 4; ++i) pool.push_back(re_const(rat(small(rng), small(rng))));
    for (int d = 0; d < 6; ++d) {
      std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
      RealExpr a = pool[pick(rng)];
      RealExpr b = pool[pick(rng)];
      switch (op(rng)) {
        case 0: pool.push_back(re_add(a, b)); break;
        case 1: pool.push_back(re_mul(a, b)); break;
        case 2: pool.push_back(re_div(a, b)); break;
        case 3: pool.push_back(re_pow(a, rat(1, 1 + (d % 3)))); break;
        default: pool.push_back(re_add(a, re_const(1))); break;
      }
    }
    RealExpr e = pool.back();
    Interval i16 = eval_interval(e, 16);
    Interval i32 = eval_interval(e, 32);
    Interval i64 = eval_interval(e, 64);
    // nested widths and each interval contains the next one's midpoint
    REQUIRE(i32.width().to_rat() <= i16.width().to_rat());
    REQUIRE(i64.width().to_rat() <= i32.width().to_rat());
    REQUIRE(i16.contains(i32.mid(128).to_rat()));
    REQUIRE(i32.contains(i64.mid(128).to_rat()));
  }
}

TEST_CASE("sturm_count on the spec cases") {
  UniPoly x2m2({Rat(-2), Rat(0), Rat(1)});  // x^2 - 2
  REQUIRE(sturm_count(x2m2, Rat(0), Rat(2)) == 1);

  // (x - 1/2)(x - 1/3) expanded
  UniPoly p = UniPoly::linear(rat(-1, 2), Rat(1)) * UniPoly::linear(rat(-1, 3), Rat(1));
  REQUIRE(sturm_count(p, Rat(0), Rat(1)) == 2);

  UniPoly x2p1({Rat(1), Rat(0), Rat(1)});
  REQUIRE(sturm_count(x2p1, Rat(-10), Rat(10)) == 0);
}

TEST_CASE("sturm_count half-open endpoint convention") {
  UniPoly p = UniPoly::linear(Rat(-1), Rat(1));  // x - 1
  REQUIRE(sturm_count(p, Rat(0), Rat(1)) == 1);   // root at b included
  REQUIRE(sturm_count(p, Rat(1), Rat(2)) == 0);   // root at a excluded
}

TEST_CASE("isolate_roots basics") {
  UniPoly x2m2({Rat(-2), Rat(0), Rat(1)});
  auto ivs = isolate_roots(x2m2, Rat(0), Rat(2), rat(1, 8));
  REQUIRE(ivs.size() == 1);
  REQUIRE(ivs[0].second - ivs[0].first <= rat(1, 8));
  // sqrt(2) inside
  REQUIRE(ivs[0].first * ivs[0].first < 2);
  REQUIRE(ivs[0].second * ivs[0].second > 2);

  UniPoly p = UniPoly::linear(rat(-1, 2), Rat(1)) * UniPoly::linear(rat(-1, 3), Rat(1));
  auto two = isolate_roots(p, Rat(0), Rat(1), rat(1, 16));
  REQUIRE(two.size() == 2);
  REQUIRE(two[0].second <= two[1].first);
  REQUIRE(two[0].first < rat(1, 3));
  REQUIRE(rat(1, 3) < two[0].second);
  REQUIRE(two[1].first < rat(1, 2));
  REQUIRE(rat(1, 2) < two[1].second);

  UniPoly x3({Rat(0), Rat(0), Rat(0), Rat(1)});
  REQUIRE_THROWS_AS(isolate_roots(x3, Rat(-1), Rat(1), Rat(1)), NotSquarefree);
}

TEST_CASE("sturm agrees with isolation on random squarefree polynomials") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> deg(1, 12);
  std::uniform_int_distribution<long> coeff(-8, 8);
  int done = 0;
  while (done < 500) {
    int d = deg(rng);
    std::vector<Rat> cs(static_cast<size_t>(d) + 1);
    for (auto& c : cs) c = Rat(coeff(rng));
    UniPoly p(std::move(cs));
    if (p.is_zero() || p.degree() < 1) continue;
    if (p.squarefree_part().degree() != p.degree()) continue;
    Rat a(-10), b(10);
    if (sgn(p.eval(a)) == 0 || sgn(p.eval(b)) == 0) continue;
    unsigned sc = sturm_count(p, a, b);
    auto ivs = isolate_roots(p, a, b, Rat(1));
    REQUIRE(sc == ivs.size());
    ++done;
  }
}

TEST_CASE("sturm count dominates a grid sign scan") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> coeff(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rat> cs(7);
    for (auto& c : cs) c = Rat(coeff(rng));
    UniPoly p(std::move(cs));
    if (p.is_zero() || p.degree() < 1) continue;
    unsigned grid = 0;
    int prev = 0;
    const int n = 10000;
    for (int i = 0; i <= n; ++i) {
      Rat x = Rat(-10) + Rat(20 * i, n);
      int s = sgn(p.eval(x));
      if (s != 0 && prev != 0 && s != prev) ++grid;
      if (s != 0) prev = s;
    }
    REQUIRE(sturm_count(p, Rat(-10), Rat(10)) >= grid);
  }
}
