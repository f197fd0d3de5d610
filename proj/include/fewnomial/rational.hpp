#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "fewnomial/errors.hpp"

namespace fewnomial {

// Exact rational arithmetic. mpq_class keeps gcd(num,den)=1 and den>0
// canonical, which is exactly the invariant we need.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline Rat rat(const Int& num, const Int& den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline int sgn(const Rat& q) { return mpq_sgn(q.get_mpq_t()); }
inline int sgn(const Int& z) { return mpz_sgn(z.get_mpz_t()); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int rat_floor(const Rat& q) { return floor_div(q.get_num(), q.get_den()); }

// q - floor(q), in [0,1)
inline Rat frac_part(const Rat& q) { return q - Rat(rat_floor(q)); }

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rat pow_rat(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  if (base == 0 && e < 0) throw Error("pow_rat: 0 to a negative power");
  unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
  Rat r(pow_int(base.get_num(), a), pow_int(base.get_den(), a));
  r.canonicalize();
  if (e < 0) r = 1 / r;
  return r;
}

// Exact q-th root if it exists.
inline bool exact_root(const Int& n, unsigned long q, Int& out) {
  if (sgn(n) < 0) return false;
  int exact = mpz_root(out.get_mpz_t(), n.get_mpz_t(), q);
  return exact != 0;
}

inline Int binomial(unsigned long n, unsigned long k) {
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

inline Rat rat_from_string(const std::string& s) {
  Rat q;
  if (q.set_str(s, 10) != 0) throw Error("bad rational literal: " + s);
  q.canonicalize();
  return q;
}

}  // namespace fewnomial
