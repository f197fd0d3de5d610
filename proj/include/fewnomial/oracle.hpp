#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "fewnomial/genpoly.hpp"
#include "fewnomial/sparse2.hpp"
#include "fewnomial/unipoly.hpp"

namespace fewnomial {

struct GridScan {
  unsigned samples = 0;
  std::vector<Rat> sign_change_abscissae;
  unsigned undecided_points = 0;
  unsigned count() const { return static_cast<unsigned>(sign_change_abscissae.size()); }
};

// Certified sign scan of F at n equispaced interior points; a lower bound
// on the number of roots in (0,1).
inline GridScan grid_scan(const GenPoly& F, unsigned n, unsigned max_precision = 256) {
  if (n < 2) throw Error("grid_scan: need at least 2 points");
  GridScan out;
  out.samples = n;
  PrecisionLadder ladder{max_precision};
  Sign prev = Sign::undecided;
  Rat prev_x;
  for (unsigned i = 1; i <= n; ++i) {
    Rat x(i, n + 1);
    x.canonicalize();
    Sign s = F.sign_at(x, ladder);
    if (s == Sign::undecided) {
      ++out.undecided_points;
      continue;
    }
    if (prev != Sign::undecided && s != prev)
      out.sign_change_abscissae.push_back((prev_x + x) / 2);
    prev = s;
    prev_x = x;
  }
  return out;
}

// ---- exact rational interval helpers (oracle-local) -------------------------

struct QI {  // closed rational interval
  Rat lo, hi;
  bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }
  Rat mid() const { return (lo + hi) / 2; }
  Rat width() const { return hi - lo; }
};

inline QI qi_add(const QI& a, const QI& b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline QI qi_sub(const QI& a, const QI& b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline QI qi_mul(const QI& a, const QI& b) {
  Rat c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Rat lo = c[0], hi = c[0];
  for (int i = 1; i < 4; ++i) {
    if (c[i] < lo) lo = c[i];
    if (c[i] > hi) hi = c[i];
  }
  return {lo, hi};
}
inline QI qi_scale(const QI& a, const Rat& c) {
  return sgn(c) >= 0 ? QI{a.lo * c, a.hi * c} : QI{a.hi * c, a.lo * c};
}

// ---- dense bivariate polynomials over Q -------------------------------------

// coefficient of y^j is yc[j], a polynomial in x
struct BiPoly {
  std::vector<UniPoly> yc;

  int ydeg() const {
    for (size_t j = yc.size(); j-- > 0;)
      if (!yc[j].is_zero()) return static_cast<int>(j);
    return -1;
  }
  bool is_zero() const { return ydeg() < 0; }

  BiPoly dx() const {
    BiPoly r;
    for (const auto& c : yc) r.yc.push_back(c.derivative());
    return r;
  }
  BiPoly dy() const {
    BiPoly r;
    for (size_t j = 1; j < yc.size(); ++j) r.yc.push_back(yc[j] * Rat(static_cast<long>(j)));
    return r;
  }

  Rat eval(const Rat& x, const Rat& y) const {
    Rat acc(0);
    for (size_t j = yc.size(); j-- > 0;) acc = acc * y + yc[j].eval(x);
    return acc;
  }

  QI eval(const QI& x, const QI& y) const {
    QI acc{Rat(0), Rat(0)};
    for (size_t j = yc.size(); j-- > 0;) {
      auto cx = yc[j].eval_rat_interval(x.lo, x.hi);
      acc = qi_add(qi_mul(acc, y), QI{cx.first, cx.second});
    }
    return acc;
  }
};

// Laurent-clear a rational-coefficient integer-exponent signomial to an
// honest polynomial; positive-orthant zero sets are unchanged.
inline BiPoly to_bipoly(const SparsePolyQ2& f) {
  if (!f.integer_exponents()) throw NonIntegerExponent("oracle needs integer exponents");
  Int minx = f.terms().at(0).kx.get_num(), miny = f.terms().at(0).ky.get_num();
  for (const auto& t : f.terms()) {
    if (t.kx.get_num() < minx) minx = t.kx.get_num();
    if (t.ky.get_num() < miny) miny = t.ky.get_num();
  }
  if (sgn(minx) > 0) minx = 0;
  if (sgn(miny) > 0) miny = 0;
  BiPoly out;
  for (const auto& t : f.terms()) {
    if (!t.coeff->exact()) throw Error("oracle needs exact rational coefficients");
    size_t ex = static_cast<size_t>((t.kx.get_num() - minx).get_ui());
    size_t ey = static_cast<size_t>((t.ky.get_num() - miny).get_ui());
    if (out.yc.size() <= ey) out.yc.resize(ey + 1);
    std::vector<Rat> cs(ex + 1, Rat(0));
    cs[ex] = *t.coeff->exact();
    out.yc[ey] = out.yc[ey] + UniPoly(std::move(cs));
  }
  return out;
}

// Fraction-free Bareiss determinant over the polynomial ring.
inline UniPoly bareiss_det(std::vector<std::vector<UniPoly>> M) {
  size_t n = M.size();
  if (n == 0) return UniPoly::constant(Rat(1));
  int sign = 1;
  UniPoly prev = UniPoly::constant(Rat(1));
  for (size_t k = 0; k + 1 < n; ++k) {
    if (M[k][k].is_zero()) {
      size_t piv = k + 1;
      while (piv < n && M[piv][k].is_zero()) ++piv;
      if (piv == n) return UniPoly();  // singular
      std::swap(M[k], M[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j)
        M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).div_exact(prev);
      M[i][k] = UniPoly();
    }
    prev = M[k][k];
  }
  return sign < 0 ? -M[n - 1][n - 1] : M[n - 1][n - 1];
}

// Sylvester resultant eliminating y.
inline UniPoly resultant_y(const BiPoly& f, const BiPoly& g) {
  int n = f.ydeg(), m = g.ydeg();
  if (n < 0 || m < 0) return UniPoly();
  if (n == 0 && m == 0) return UniPoly::constant(Rat(1));
  if (n == 0) {
    UniPoly r = UniPoly::constant(Rat(1));
    for (int i = 0; i < m; ++i) r = r * f.yc[0];
    return r;
  }
  if (m == 0) {
    UniPoly r = UniPoly::constant(Rat(1));
    for (int i = 0; i < n; ++i) r = r * g.yc[0];
    return r;
  }
  size_t dim = static_cast<size_t>(n + m);
  std::vector<std::vector<UniPoly>> M(dim, std::vector<UniPoly>(dim));
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= n; ++j) M[static_cast<size_t>(r)][static_cast<size_t>(r + j)] =
        f.yc[static_cast<size_t>(n - j)];
  for (int r = 0; r < n; ++r)
    for (int j = 0; j <= m; ++j) M[static_cast<size_t>(m + r)][static_cast<size_t>(r + j)] =
        g.yc[static_cast<size_t>(m - j)];
  return bareiss_det(std::move(M));
}

// swap the roles of x and y
inline BiPoly transpose(const BiPoly& f) {
  BiPoly out;
  for (size_t j = 0; j < f.yc.size(); ++j)
    for (size_t i = 0; i < f.yc[j].coeffs().size(); ++i) {
      const Rat& c = f.yc[j].coeffs()[i];
      if (sgn(c) == 0) continue;
      if (out.yc.size() <= i) out.yc.resize(i + 1);
      std::vector<Rat> cs(j + 1, Rat(0));
      cs[j] = c;
      out.yc[i] = out.yc[i] + UniPoly(std::move(cs));
    }
  return out;
}

namespace detail {

struct Mat2 {
  Rat a, b, c, d;  // row-major
  Rat det() const { return a * d - b * c; }
};

// Krawczyk operator test on a box; returns +1 for "unique root inside",
// -1 for "no root", 0 for inconclusive.
inline int krawczyk_test(const BiPoly& f, const BiPoly& g, const BiPoly& fx, const BiPoly& fy,
                         const BiPoly& gx, const BiPoly& gy, QI X, QI Y) {
  if (!f.eval(X, Y).contains_zero() || !g.eval(X, Y).contains_zero()) return -1;
  Rat mx = X.mid(), my = Y.mid();
  Mat2 Jm{fx.eval(mx, my), fy.eval(mx, my), gx.eval(mx, my), gy.eval(mx, my)};
  Rat dm = Jm.det();
  if (sgn(dm) == 0) return 0;
  Mat2 Yi{Jm.d / dm, -Jm.b / dm, -Jm.c / dm, Jm.a / dm};
  Rat f1 = f.eval(mx, my), f2 = g.eval(mx, my);
  // K = m - Yi*F(m) + (I - Yi*J(X)) (X - m)
  QI jxx = fx.eval(X, Y), jxy = fy.eval(X, Y), jyx = gx.eval(X, Y), jyy = gy.eval(X, Y);
  QI r11 = qi_sub(QI{Rat(1), Rat(1)}, qi_add(qi_scale(jxx, Yi.a), qi_scale(jyx, Yi.b)));
  QI r12 = qi_sub(QI{Rat(0), Rat(0)}, qi_add(qi_scale(jxy, Yi.a), qi_scale(jyy, Yi.b)));
  QI r21 = qi_sub(QI{Rat(0), Rat(0)}, qi_add(qi_scale(jxx, Yi.c), qi_scale(jyx, Yi.d)));
  QI r22 = qi_sub(QI{Rat(1), Rat(1)}, qi_add(qi_scale(jxy, Yi.c), qi_scale(jyy, Yi.d)));
  QI dx{X.lo - mx, X.hi - mx}, dy{Y.lo - my, Y.hi - my};
  Rat nx = mx - (Yi.a * f1 + Yi.b * f2);
  Rat ny = my - (Yi.c * f1 + Yi.d * f2);
  QI Kx = qi_add(QI{nx, nx}, qi_add(qi_mul(r11, dx), qi_mul(r12, dy)));
  QI Ky = qi_add(QI{ny, ny}, qi_add(qi_mul(r21, dx), qi_mul(r22, dy)));
  if (Kx.lo > X.lo && Kx.hi < X.hi && Ky.lo > Y.lo && Ky.hi < Y.hi) return 1;
  if (Kx.hi < X.lo || Kx.lo > X.hi || Ky.hi < Y.lo || Ky.lo > Y.hi) return -1;
  return 0;
}

}  // namespace detail

// Exact count of solutions with both coordinates positive, via Sylvester
// resultants in both directions and Krawczyk certification of each
// candidate box. Requires integer exponents, rational coefficients, and a
// zero-dimensional solution set.
inline unsigned resultant_count_positive(const SparsePolyQ2& fs, const SparsePolyQ2& gs) {
  BiPoly f = to_bipoly(fs), g = to_bipoly(gs);
  UniPoly rx = resultant_y(f, g);
  UniPoly ry = resultant_y(transpose(f), transpose(g));
  if (rx.is_zero() || ry.is_zero())
    throw CommonComponent("resultant vanished identically: shared component");
  UniPoly rxs = rx.squarefree_part();
  UniPoly rys = ry.squarefree_part();
  Rat bx = rxs.cauchy_root_bound(), by = rys.cauchy_root_bound();
  auto xs = isolate_roots(rxs, Rat(0), bx, Rat(1, 16));
  auto ys = isolate_roots(rys, Rat(0), by, Rat(1, 16));
  // exact positive rational roots at interval endpoints are excluded by
  // isolate_roots' open-interval contract; roots at 0 are not positive
  BiPoly fx = f.dx(), fy = f.dy(), gx = g.dx(), gy = g.dy();
  unsigned count = 0;
  for (auto& xiv : xs) {
    for (auto& yiv : ys) {
      QI X{xiv.first, xiv.second}, Y{yiv.first, yiv.second};
      std::pair<Rat, Rat> xr = xiv, yr = yiv;
      bool decided = false;
      for (int round = 0; round < 80 && !decided; ++round) {
        int k = detail::krawczyk_test(f, g, fx, fy, gx, gy, X, Y);
        if (k == 1) {
          // confirmed; make sure the box is strictly positive
          while (sgn(X.lo) <= 0) {
            xr = refine_root(rxs, xr, (xr.second - xr.first) / 4);
            X = QI{xr.first, xr.second};
          }
          while (sgn(Y.lo) <= 0) {
            yr = refine_root(rys, yr, (yr.second - yr.first) / 4);
            Y = QI{yr.first, yr.second};
          }
          ++count;
          decided = true;
        } else if (k == -1) {
          decided = true;
        } else {
          xr = refine_root(rxs, xr, (xr.second - xr.first) / 4);
          yr = refine_root(rys, yr, (yr.second - yr.first) / 4);
          X = QI{xr.first, xr.second};
          Y = QI{yr.first, yr.second};
        }
      }
      if (!decided)
        throw NonSimple("candidate box neither certified nor excluded (singular solution?)");
    }
  }
  return count;
}

// ---- uncertified floating seeds ---------------------------------------------

struct NumericSolution {
  Rat x, y;        // exact value of the final floating iterate
  double residual;  // max |f|, |g| there, rounded
};

// Damped Newton from a log-space seed grid at 128-bit floating precision.
// Support tool only: solutions may be missed, nothing is certified.
inline std::vector<NumericSolution> numeric_solve(const SparsePolyQ2& fs, const SparsePolyQ2& gs,
                                                  unsigned seeds_per_axis = 12) {
  BiPoly f = to_bipoly(fs), g = to_bipoly(gs);
  BiPoly fx = f.dx(), fy = f.dy(), gx = g.dx(), gy = g.dy();
  const mpfr_prec_t prec = 128;
  std::vector<NumericSolution> out;
  auto eval_d = [&](const BiPoly& p, const Dyadic& x, const Dyadic& y) {
    Dyadic acc(prec), t(prec);
    mpfr_set_zero(acc.raw(), 1);
    for (size_t j = p.yc.size(); j-- > 0;) {
      mpfr_mul(acc.raw(), acc.raw(), y.raw(), MPFR_RNDN);
      // Horner in x for the coefficient
      Dyadic cx(prec);
      mpfr_set_zero(cx.raw(), 1);
      const auto& cs = p.yc[j].coeffs();
      for (size_t i = cs.size(); i-- > 0;) {
        mpfr_mul(cx.raw(), cx.raw(), x.raw(), MPFR_RNDN);
        mpfr_set_q(t.raw(), cs[i].get_mpq_t(), MPFR_RNDN);
        mpfr_add(cx.raw(), cx.raw(), t.raw(), MPFR_RNDN);
      }
      mpfr_add(acc.raw(), acc.raw(), cx.raw(), MPFR_RNDN);
    }
    return acc;
  };
  const double L = 6.0;
  for (unsigned i = 0; i < seeds_per_axis; ++i) {
    for (unsigned j = 0; j < seeds_per_axis; ++j) {
      Dyadic x(prec), y(prec);
      double sx = -L + 2 * L * i / (seeds_per_axis - 1.0);
      double sy = -L + 2 * L * j / (seeds_per_axis - 1.0);
      mpfr_set_d(x.raw(), sx, MPFR_RNDN);
      mpfr_exp(x.raw(), x.raw(), MPFR_RNDN);
      mpfr_set_d(y.raw(), sy, MPFR_RNDN);
      mpfr_exp(y.raw(), y.raw(), MPFR_RNDN);
      bool converged = false;
      double res = 1e300;
      for (int it = 0; it < 80; ++it) {
        Dyadic f1 = eval_d(f, x, y), f2 = eval_d(g, x, y);
        double r = std::max(std::abs(f1.to_double()), std::abs(f2.to_double()));
        res = r;
        Dyadic a = eval_d(fx, x, y), b = eval_d(fy, x, y);
        Dyadic c = eval_d(gx, x, y), d = eval_d(gy, x, y);
        double det = a.to_double() * d.to_double() - b.to_double() * c.to_double();
        if (det == 0.0 || !std::isfinite(det)) break;
        // solve J * step = F in (crude) double precision for the direction,
        // then apply it in full precision
        double s1 = (d.to_double() * f1.to_double() - b.to_double() * f2.to_double()) / det;
        double s2 = (-c.to_double() * f1.to_double() + a.to_double() * f2.to_double()) / det;
        if (!std::isfinite(s1) || !std::isfinite(s2)) break;
        Dyadic nx(prec), ny(prec), st(prec);
        double damp = 1.0;
        bool improved = false;
        for (int h = 0; h < 24 && !improved; ++h) {
          mpfr_set_d(st.raw(), s1 * damp, MPFR_RNDN);
          mpfr_sub(nx.raw(), x.raw(), st.raw(), MPFR_RNDN);
          mpfr_set_d(st.raw(), s2 * damp, MPFR_RNDN);
          mpfr_sub(ny.raw(), y.raw(), st.raw(), MPFR_RNDN);
          if (nx.sign() > 0 && ny.sign() > 0) {
            Dyadic t1 = eval_d(f, nx, ny), t2 = eval_d(g, nx, ny);
            double nr = std::max(std::abs(t1.to_double()), std::abs(t2.to_double()));
            if (nr < r || nr < 1e-30) {
              x = nx;
              y = ny;
              improved = true;
              res = nr;
            }
          }
          damp /= 2;
        }
        if (!improved) break;
        if (res < 1e-30) {
          converged = true;
          break;
        }
      }
      if (!converged) continue;
      Rat rx = x.to_rat(), ry = y.to_rat();
      bool dup = false;
      for (const auto& s : out) {
        Rat dxr = rx - s.x, dyr = ry - s.y;
        Rat tol = (abs(s.x) + abs(s.y) + 1) / 1000000000;
        if (abs(dxr) < tol && abs(dyr) < tol) dup = true;
      }
      if (!dup) out.push_back(NumericSolution{rx, ry, res});
    }
  }
  std::sort(out.begin(), out.end(), [](const NumericSolution& a, const NumericSolution& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  return out;
}

}  // namespace fewnomial
