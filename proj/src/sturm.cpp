#include "kacpoly/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kacpoly/errors.hpp"

namespace kacpoly {

namespace {

using ZPoly = std::vector<mpz_class>;  // ascending powers

void trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

ZPoly derivative(const ZPoly& p) {
  ZPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
  trim(d);
  return d;
}

// Divides by the positive content; signs are preserved.
void reduce_content(ZPoly& p) {
  mpz_class g = 0;
  for (const auto& c : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) return;
  }
  if (g == 0 || g == 1) return;
  for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

// Pseudo-remainder scaled by a positive constant, so its sign pattern
// matches the true remainder of a by b.
ZPoly signed_prem(ZPoly a, const ZPoly& b) {
  const int db = degree(b);
  const mpz_class& lb = b.back();
  int steps = 0;
  while (degree(a) >= db && !a.empty()) {
    const int shift = degree(a) - db;
    const mpz_class la = a.back();
    for (auto& c : a) c *= lb;
    for (int i = 0; i <= db; ++i) a[static_cast<std::size_t>(i + shift)] -= la * b[static_cast<std::size_t>(i)];
    trim(a);
    ++steps;
  }
  if (lb < 0 && steps % 2 == 1) {
    for (auto& c : a) c = -c;
  }
  reduce_content(a);
  return a;
}

ZPoly primitive_positive(ZPoly p) {
  reduce_content(p);
  if (!p.empty() && p.back() < 0) {
    for (auto& c : p) c = -c;
  }
  return p;
}

ZPoly gcd(ZPoly a, ZPoly b) {
  a = primitive_positive(std::move(a));
  b = primitive_positive(std::move(b));
  if (degree(a) < degree(b)) std::swap(a, b);
  while (!b.empty()) {
    ZPoly r = signed_prem(a, b);
    a = std::move(b);
    b = primitive_positive(std::move(r));
  }
  return primitive_positive(std::move(a));
}

// a / b for b | a over Q with b primitive, so the quotient is integral.
ZPoly exact_div(ZPoly a, const ZPoly& b) {
  const int db = degree(b);
  if (degree(a) < db) return {};
  ZPoly q(static_cast<std::size_t>(degree(a) - db + 1));
  while (!a.empty() && degree(a) >= db) {
    const int shift = degree(a) - db;
    mpz_class coef;
    mpz_divexact(coef.get_mpz_t(), a.back().get_mpz_t(), b.back().get_mpz_t());
    q[static_cast<std::size_t>(shift)] = coef;
    for (int i = 0; i <= db; ++i) a[static_cast<std::size_t>(i + shift)] -= coef * b[static_cast<std::size_t>(i)];
    trim(a);
  }
  return q;
}

ZPoly subtract(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

// Yun's algorithm: f = prod_i f_i^i with each f_i square-free. b and c are
// always divided by the same polynomial so d = c - b' stays consistently
// scaled.
std::vector<std::pair<ZPoly, std::size_t>> squarefree_factors(const ZPoly& f) {
  std::vector<std::pair<ZPoly, std::size_t>> out;
  const ZPoly fp = derivative(f);
  if (fp.empty()) return out;  // constant
  const ZPoly a = gcd(f, fp);
  ZPoly b = exact_div(f, a);
  ZPoly c = exact_div(fp, a);
  std::size_t i = 1;
  while (degree(b) > 0) {
    const ZPoly d = subtract(c, derivative(b));
    const ZPoly ai = d.empty() ? primitive_positive(b) : gcd(b, d);
    if (degree(ai) > 0) out.emplace_back(ai, i);
    c = d.empty() ? ZPoly{} : exact_div(d, ai);
    b = exact_div(b, ai);
    ++i;
  }
  return out;
}

int sign_at(const ZPoly& p, const std::optional<mpq_class>& x, bool at_plus_infinity) {
  if (p.empty()) return 0;
  if (!x) {
    const int s = sgn(p.back());
    if (at_plus_infinity || degree(p) % 2 == 0) return s;
    return -s;
  }
  // sign(sum a_i num^i den^{d-i}); den > 0.
  const mpz_class& num = x->get_num();
  const mpz_class& den = x->get_den();
  mpz_class acc = 0;
  mpz_class den_pow = 1;
  // Horner in homogeneous form from the top: acc = acc*num + a_i*den^{d-i}.
  for (std::size_t k = p.size(); k-- > 0;) {
    acc = acc * num + p[k] * den_pow;
    den_pow *= den;
  }
  return sgn(acc);
}

std::vector<ZPoly> sturm_chain(const ZPoly& p) {
  std::vector<ZPoly> chain;
  chain.push_back(p);
  ZPoly d = derivative(p);
  reduce_content(d);
  if (d.empty()) return chain;
  chain.push_back(d);
  while (true) {
    ZPoly r = signed_prem(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  return chain;
}

int variations(const std::vector<ZPoly>& chain, const std::optional<mpq_class>& x, bool plus_inf) {
  int count = 0;
  int last = 0;
  for (const auto& s : chain) {
    const int v = sign_at(s, x, plus_inf);
    if (v == 0) continue;
    if (last != 0 && v != last) ++count;
    last = v;
  }
  return count;
}

// Distinct roots of square-free p in the interval.
std::size_t count_squarefree(const ZPoly& p, const std::vector<ZPoly>& chain,
                             const RationalInterval& iv) {
  const int va = variations(chain, iv.lo, false);
  const int vb = variations(chain, iv.hi, true);
  long n = va - vb;  // roots in (lo, hi]
  if (iv.hi && !iv.hi_closed && sign_at(p, iv.hi, true) == 0) --n;
  if (iv.lo && iv.lo_closed && sign_at(p, iv.lo, false) == 0) ++n;
  return n > 0 ? static_cast<std::size_t>(n) : 0;
}

ZPoly checked_input(std::span<const mpz_class> int_coeffs) {
  ZPoly p(int_coeffs.begin(), int_coeffs.end());
  trim(p);
  if (p.empty()) throw ZeroPolynomial("sturm_count: zero polynomial");
  if (static_cast<std::size_t>(degree(p)) > kSturmDegreeLimit) {
    throw DegreeTooLarge("sturm_count: degree " + std::to_string(degree(p)) + " exceeds " +
                         std::to_string(kSturmDegreeLimit));
  }
  return p;
}

bool empty_interval(const RationalInterval& iv) {
  if (!iv.lo || !iv.hi) return false;
  if (*iv.lo < *iv.hi) return false;
  return !(*iv.lo == *iv.hi && iv.lo_closed && iv.hi_closed);
}

mpq_class cauchy_bound(const ZPoly& p) {
  mpz_class mx = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    mpz_class a = abs(p[i]);
    if (a > mx) mx = a;
  }
  mpq_class b(mx, abs(p.back()));
  b.canonicalize();
  return b + 1;
}

}  // namespace

RationalInterval RationalInterval::from(const Interval& interval) {
  RationalInterval out;
  if (std::isfinite(interval.lo)) out.lo = mpq_class(interval.lo);
  if (std::isfinite(interval.hi)) out.hi = mpq_class(interval.hi);
  out.lo_closed = interval.lo_closed && out.lo.has_value();
  out.hi_closed = interval.hi_closed && out.hi.has_value();
  return out;
}

std::vector<mpz_class> exact_integer_coeffs(std::span<const double> coeffs) {
  // Each finite double is n / 2^k exactly; scale by the largest such 2^k.
  std::vector<mpq_class> exact;
  exact.reserve(coeffs.size());
  std::size_t shift = 0;
  for (const double c : coeffs) {
    if (!std::isfinite(c)) throw DomainError("non-finite coefficient");
    mpq_class q(c);
    q.canonicalize();
    shift = std::max(shift, mpz_sizeinbase(q.get_den_mpz_t(), 2) - 1);
    exact.push_back(std::move(q));
  }
  std::vector<mpz_class> out;
  out.reserve(coeffs.size());
  const mpz_class scale = mpz_class(1) << static_cast<mp_bitcnt_t>(shift);
  for (const auto& q : exact) {
    out.push_back(q.get_num() * (scale / q.get_den()));
  }
  return out;
}

std::size_t sturm_count(std::span<const mpz_class> int_coeffs, const RationalInterval& interval) {
  const ZPoly p = checked_input(int_coeffs);
  if (empty_interval(interval)) return 0;
  if (degree(p) == 0) return 0;
  std::size_t total = 0;
  for (const auto& [factor, mult] : squarefree_factors(p)) {
    total += mult * count_squarefree(factor, sturm_chain(factor), interval);
  }
  return total;
}

SturmRoots sturm_roots(std::span<const mpz_class> int_coeffs, const RationalInterval& interval) {
  const ZPoly p = checked_input(int_coeffs);
  SturmRoots out;
  if (empty_interval(interval) || degree(p) == 0) return out;
  std::vector<std::pair<double, std::size_t>> found;
  for (const auto& [factor, mult] : squarefree_factors(p)) {
    const auto chain = sturm_chain(factor);
    const mpq_class bound = cauchy_bound(factor);
    mpq_class lo = interval.lo ? *interval.lo : mpq_class(-bound);
    mpq_class hi = interval.hi ? *interval.hi : bound;
    if (lo < -bound) lo = -bound;
    if (hi > bound) hi = bound;
    // Roots exactly at closed endpoints are reported directly.
    if (interval.lo && interval.lo_closed && sign_at(factor, interval.lo, false) == 0) {
      found.emplace_back(interval.lo->get_d(), mult);
    }
    if (interval.hi && interval.hi_closed && sign_at(factor, interval.hi, true) == 0 &&
        !(interval.lo && *interval.lo == *interval.hi)) {
      found.emplace_back(interval.hi->get_d(), mult);
    }
    // Isolate roots in the open interval (lo, hi).
    struct Piece {
      mpq_class a, b;
    };
    std::vector<Piece> stack{{lo, hi}};
    auto open_count = [&](const mpq_class& a, const mpq_class& b) {
      RationalInterval r;
      r.lo = a;
      r.hi = b;
      return count_squarefree(factor, chain, r);
    };
    while (!stack.empty()) {
      Piece pc = stack.back();
      stack.pop_back();
      const std::size_t k = open_count(pc.a, pc.b);
      if (k == 0) continue;
      if (k == 1) {
        // Refine by exact sign bisection to double resolution.
        mpq_class a = pc.a, b = pc.b;
        int sa = sign_at(factor, a, false);
        for (int it = 0; it < 2000; ++it) {
          const double da = a.get_d(), db = b.get_d();
          if (std::nextafter(da, db) >= db) break;
          mpq_class mid = (a + b) / 2;
          const int sm = sign_at(factor, mid, false);
          if (sm == 0) {
            a = b = mid;
            break;
          }
          if (sa == 0 || sm == sa) {
            a = mid;
            sa = sm;
          } else {
            b = mid;
          }
        }
        mpq_class mid = (a + b) / 2;
        found.emplace_back(mid.get_d(), mult);
        continue;
      }
      mpq_class mid = (pc.a + pc.b) / 2;
      if (sign_at(factor, mid, false) == 0) {
        found.emplace_back(mid.get_d(), mult);
      }
      stack.push_back({pc.a, mid});
      stack.push_back({mid, pc.b});
    }
  }
  std::sort(found.begin(), found.end());
  for (const auto& [r, m] : found) {
    out.roots.push_back(r);
    out.multiplicity.push_back(m);
  }
  return out;
}

}  // namespace kacpoly
