#pragma once

// Exact arithmetic in the real cyclotomic field Q(2cos(pi/N)).

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coxhodge/errors.hpp"

namespace coxhodge {

using Integer = mpz_class;
using Rational = mpq_class;

/// Entry of a Coxeter matrix standing for m = infinity.
inline constexpr int kInfinity = 0;
using CoxeterMatrix = std::vector<std::vector<int>>;

namespace detail {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

using IntPoly = std::vector<Integer>;  // ascending coefficients
using RatPoly = std::vector<Rational>;

template <class P>
inline void trim(P& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Integer to_mpz(i128 v) {
  const bool neg = v < 0;
  u128 u = neg ? u128(0) - u128(v) : u128(v);
  Integer r(static_cast<unsigned long>(static_cast<uint64_t>(u >> 64)));
  r <<= 64;
  r += static_cast<unsigned long>(static_cast<uint64_t>(u));
  if (neg) r = -r;
  return r;
}

inline bool fits64(i128 v) {
  return v >= std::numeric_limits<int64_t>::min() &&
         v <= std::numeric_limits<int64_t>::max();
}

inline bool fits64(const Integer& v) { return v.fits_slong_p(); }

inline u128 abs128(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

inline u128 gcd128(u128 a, u128 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  if ((a >> 64) == 0 && (b >> 64) == 0)
    return std::gcd(static_cast<uint64_t>(a), static_cast<uint64_t>(b));
  int shift = 0;
  while (((a | b) & 1) == 0) {
    a >>= 1;
    b >>= 1;
    ++shift;
  }
  while ((a & 1) == 0) a >>= 1;
  while (b != 0) {
    while ((b & 1) == 0) b >>= 1;
    if (a > b) std::swap(a, b);
    b -= a;
  }
  return a << shift;
}

/// Exact quotient a / b for integer polynomials with b monic.
inline IntPoly divide_monic(IntPoly a, const IntPoly& b) {
  const size_t db = b.size() - 1;
  if (a.size() < b.size()) return {};
  IntPoly q(a.size() - db, 0);
  for (size_t k = a.size(); k-- > db;) {
    Integer t = a[k];
    q[k - db] = t;
    if (t != 0)
      for (size_t j = 0; j <= db; ++j) a[k - db + j] -= t * b[j];
  }
  trim(a);
  COXHODGE_CHECK(a.empty(), "inexact cyclotomic division");
  return q;
}

inline IntPoly cyclotomic(int n, std::map<int, IntPoly>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  IntPoly p(static_cast<size_t>(n) + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) p = divide_monic(p, cyclotomic(d, memo));
  memo[n] = p;
  return p;
}

inline Rational eval(const RatPoly& p, const Rational& x) {
  Rational r = 0;
  for (size_t k = p.size(); k-- > 0;) r = r * x + p[k];
  return r;
}

inline RatPoly to_rat(const IntPoly& p) {
  RatPoly r;
  for (const auto& c : p) r.emplace_back(c);
  return r;
}

inline RatPoly derivative(const RatPoly& p) {
  RatPoly r;
  for (size_t k = 1; k < p.size(); ++k) r.push_back(p[k] * static_cast<long>(k));
  return r;
}

/// Quotient and remainder in Q[x]; b nonzero.
inline std::pair<RatPoly, RatPoly> divmod(RatPoly a, const RatPoly& b) {
  trim(a);
  const size_t db = b.size() - 1;
  if (a.size() < b.size()) return {{}, a};
  RatPoly q(a.size() - db, 0);
  for (size_t k = a.size(); k-- > db;) {
    Rational t = a[k] / b[db];
    q[k - db] = t;
    if (t != 0)
      for (size_t j = 0; j <= db; ++j) a[k - db + j] -= t * b[j];
  }
  a.resize(db);
  trim(a);
  trim(q);
  return {q, a};
}

inline RatPoly sub(const RatPoly& a, const RatPoly& b) {
  RatPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

inline RatPoly mul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline int sgn(const Rational& q) { return sgn(q.get_num()); }

inline int sign_changes(const std::vector<RatPoly>& seq, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    int s = sgn(eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// Number of distinct real roots of a squarefree p in (lo, hi].
inline int sturm_count(const RatPoly& p, const Rational& lo, const Rational& hi) {
  std::vector<RatPoly> seq{p, derivative(p)};
  while (!seq.back().empty() && seq.back().size() > 1) {
    auto r = divmod(seq[seq.size() - 2], seq.back()).second;
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    seq.push_back(r);
  }
  return sign_changes(seq, lo) - sign_changes(seq, hi);
}

}  // namespace detail

/// The field Q(c) with c = 2cos(pi/N), embedded in R at the largest root of
/// the minimal polynomial of c.
class FieldContext {
 public:
  static std::shared_ptr<const FieldContext> for_conductor(int conductor) {
    if (conductor < 2) throw InvalidInput("conductor must be at least 2");
    return std::shared_ptr<const FieldContext>(new FieldContext(conductor));
  }

  int conductor() const { return conductor_; }
  int degree() const { return static_cast<int>(minpoly_.size()) - 1; }

  /// Ascending integer coefficients, monic.
  const std::vector<Integer>& minimal_polynomial() const { return minpoly_; }
  const Rational& enclosure_low() const { return lo_; }
  const Rational& enclosure_high() const { return hi_; }
  /// The generator to 256 bits.
  const mpf_class& generator_approx() const { return generator_; }

  /// Halves an enclosure [lo, hi] of the generator, keeping the root inside.
  void refine(Rational& lo, Rational& hi) const {
    Rational mid = (lo + hi) / 2;
    int s = detail::sgn(detail::eval(minpoly_q_, mid));
    if (s == 0) {
      lo = hi = mid;
      return;
    }
    if (s == sign_at_low_)
      lo = mid;
    else
      hi = mid;
  }

  bool small_minpoly() const { return small_ok_; }
  const std::vector<int64_t>& minpoly_small() const { return minpoly_small_; }
  const detail::RatPoly& minpoly_rational() const { return minpoly_q_; }

  std::string describe() const {
    std::ostringstream os;
    os << "Q(2cos(pi/" << conductor_ << ")), degree " << degree();
    return os.str();
  }

 private:
  explicit FieldContext(int conductor) : conductor_(conductor) {
    std::map<int, detail::IntPoly> memo;
    detail::IntPoly phi = detail::cyclotomic(2 * conductor, memo);
    const int d = static_cast<int>(phi.size() - 1) / 2;
    // x^{-d} Phi(x) = a_0 + sum_k a_k (x^k + x^{-k}); x^k + x^{-k} = D_k(x + 1/x).
    std::vector<detail::IntPoly> dk{{2}, {0, 1}};
    for (int k = 2; k <= d; ++k) {
      detail::IntPoly next(k + 1, 0);
      for (size_t i = 0; i < dk[k - 1].size(); ++i) next[i + 1] += dk[k - 1][i];
      for (size_t i = 0; i < dk[k - 2].size(); ++i) next[i] -= dk[k - 2][i];
      dk.push_back(next);
    }
    detail::IntPoly psi(d + 1, 0);
    psi[0] = phi[d];
    for (int k = 1; k <= d; ++k)
      for (size_t i = 0; i < dk[k].size(); ++i) psi[i] += phi[d + k] * dk[k][i];
    detail::trim(psi);
    COXHODGE_CHECK(psi.size() == static_cast<size_t>(d) + 1 && psi.back() == 1,
                   "minimal polynomial is not monic of the expected degree");
    minpoly_ = psi;
    minpoly_q_ = detail::to_rat(psi);
    small_ok_ = true;
    for (const auto& c : psi) {
      if (!detail::fits64(c) || abs(c) > (Integer(1) << 40)) small_ok_ = false;
      minpoly_small_.push_back(c.get_si());
    }

    const double approx = 2.0 * std::cos(M_PI / conductor);
    lo_ = Rational(approx) - Rational(1, 1 << 30);
    hi_ = Rational(approx) + Rational(1, 1 << 30);
    lo_.canonicalize();
    hi_.canonicalize();
    sign_at_low_ = detail::sgn(detail::eval(minpoly_q_, lo_));
    const int high_sign = detail::sgn(detail::eval(minpoly_q_, hi_));
    COXHODGE_CHECK(sign_at_low_ != 0 && high_sign != 0 && sign_at_low_ != high_sign,
                   "enclosure endpoints do not bracket the generator");
    COXHODGE_CHECK(detail::sturm_count(minpoly_q_, lo_, hi_) == 1,
                   "enclosure does not isolate a single root");
    COXHODGE_CHECK(detail::sturm_count(minpoly_q_, hi_, Rational(3)) == 0,
                   "enclosed root is not the largest real root");
    for (int i = 0; i < 40; ++i) refine(lo_, hi_);
    // Newton steps from the enclosure midpoint, for approx()
    generator_.set_prec(256);
    generator_ = Rational((lo_ + hi_) / 2);
    for (int it = 0; it < 8; ++it) {
      mpf_class f(0, 256), df(0, 256);
      for (size_t k = minpoly_.size(); k-- > 0;) {
        df = df * generator_ + f;
        f = f * generator_ + mpf_class(minpoly_[k], 256);
      }
      generator_ -= f / df;
    }
  }

  int conductor_;
  std::vector<Integer> minpoly_;
  detail::RatPoly minpoly_q_;
  std::vector<int64_t> minpoly_small_;
  bool small_ok_ = false;
  Rational lo_, hi_;
  mpf_class generator_;
  int sign_at_low_ = 0;
};

using FieldContextPtr = std::shared_ptr<const FieldContext>;

/// Element of Q(c) stored as (sum num_i c^i) / den, reduced modulo the
/// minimal polynomial and normalized so gcd(num, den) = 1 and den > 0.
/// Numerators live in int64 while they fit and in GMP integers otherwise.
///
/// The element keeps a raw pointer to its context; the context must outlive
/// it.  Rational elements may have no context at all.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(int v) : FieldElement(static_cast<long>(v)) {}
  FieldElement(long v) {
    if (v != 0) num_.push_back(v);
  }
  FieldElement(long long v) : FieldElement(static_cast<long>(v)) {}
  explicit FieldElement(const Rational& q) {
    Rational r = q;
    r.canonicalize();
    set_big({r.get_num()}, r.get_den());
  }
  FieldElement(long num, long den) : FieldElement(Rational(num, den)) {}

  FieldElement(const FieldElement& o)
      : ctx_(o.ctx_), den_(o.den_), num_(o.num_),
        big_(o.big_ ? std::make_unique<Big>(*o.big_) : nullptr) {}
  FieldElement(FieldElement&&) noexcept = default;
  FieldElement& operator=(const FieldElement& o) {
    if (this != &o) {
      ctx_ = o.ctx_;
      den_ = o.den_;
      num_ = o.num_;
      big_ = o.big_ ? std::make_unique<Big>(*o.big_) : nullptr;
    }
    return *this;
  }
  FieldElement& operator=(FieldElement&&) noexcept = default;

  /// The generator c = 2cos(pi/N).
  static FieldElement generator(const FieldContext* ctx) {
    if (ctx->degree() <= 1) {
      // c = 0 for N = 2
      FieldElement z;
      z.ctx_ = ctx;
      return z;
    }
    FieldElement g;
    g.ctx_ = ctx;
    g.num_ = {0, 1};
    return g;
  }

  /// sum coeffs[i] c^i, reduced modulo the minimal polynomial.
  static FieldElement from_coefficients(const FieldContext* ctx,
                                        const std::vector<Rational>& coeffs) {
    detail::RatPoly p(coeffs);
    detail::trim(p);
    if (p.size() > 1) {
      if (!ctx) throw InvalidInput("irrational coefficients need a field context");
      p = detail::divmod(p, ctx->minpoly_rational()).second;
    }
    Integer den = 1;
    for (auto& q : p) {
      q.canonicalize();
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    }
    std::vector<Integer> num;
    for (const auto& q : p) num.push_back(q.get_num() * (den / q.get_den()));
    FieldElement r;
    r.ctx_ = ctx;
    r.set_big(std::move(num), den);
    return r;
  }

  const FieldContext* context() const { return ctx_; }
  bool is_zero() const { return !big_ && num_.empty(); }
  bool is_one() const { return !big_ && num_.size() == 1 && num_[0] == 1 && den_ == 1; }
  /// Number of stored coefficients (degree in c plus one).
  size_t size() const { return big_ ? big_->num.size() : num_.size(); }
  bool is_rational() const { return size() <= 1; }
  bool is_small() const { return !big_; }

  Rational rational_value() const {
    if (!is_rational()) throw InvalidInput("element is not rational");
    return coefficient(0);
  }

  Rational coefficient(size_t i) const {
    if (i >= size()) return Rational(0);
    Rational q;
    if (big_)
      q = Rational(big_->num[i], big_->den);
    else
      q = Rational(Integer(static_cast<long>(num_[i])), Integer(static_cast<long>(den_)));
    q.canonicalize();
    return q;
  }

  /// Image under Z[c][1/den] -> F_p with c -> c_mod_p, for a prime p < 2^32
  /// not dividing the denominator.
  uint64_t residue(uint64_t p, uint64_t c_mod_p) const {
    auto red = [p](const Integer& z) { return static_cast<uint64_t>(mpz_fdiv_ui(z.get_mpz_t(), p)); };
    auto red64 = [p](int64_t z) {
      int64_t r = z % static_cast<int64_t>(p);
      return static_cast<uint64_t>(r < 0 ? r + static_cast<int64_t>(p) : r);
    };
    uint64_t v = 0, d;
    for (size_t k = size(); k-- > 0;) v = (v * c_mod_p + (big_ ? red(big_->num[k]) : red64(num_[k]))) % p;
    d = big_ ? red(big_->den) : red64(den_);
    if (d == 0) throw InvalidInput("prime divides a denominator");
    // d^(p-2)
    uint64_t inv = 1, b = d;
    for (uint64_t e = p - 2; e; e >>= 1, b = b * b % p)
      if (e & 1) inv = inv * b % p;
    return v * inv % p;
  }

  std::vector<Rational> coefficients() const {
    std::vector<Rational> r;
    for (size_t i = 0; i < size(); ++i) r.push_back(coefficient(i));
    return r;
  }

  FieldElement operator-() const {
    FieldElement r(*this);
    if (r.big_)
      for (auto& x : r.big_->num) x = -x;
    else if (std::any_of(r.num_.begin(), r.num_.end(),
                         [](int64_t v) { return v == std::numeric_limits<int64_t>::min(); }))
      r.promote_self_negate();
    else
      for (auto& x : r.num_) x = -x;
    return r;
  }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    if (a.is_zero()) return b.with_context(a.ctx_);
    if (b.is_zero()) return a.with_context(b.ctx_);
    FieldElement r;
    r.ctx_ = merge_context(a, b);
    if (!a.big_ && !b.big_ && add_small(a, b, 1, r)) return r;
    add_big(a, b, 1, r);
    return r;
  }

  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    if (b.is_zero()) return a.with_context(b.ctx_);
    if (a.is_zero()) return (-b).with_context(a.ctx_);
    FieldElement r;
    r.ctx_ = merge_context(a, b);
    if (!a.big_ && !b.big_ && add_small(a, b, -1, r)) return r;
    add_big(a, b, -1, r);
    return r;
  }

  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    FieldElement r;
    r.ctx_ = merge_context(a, b);
    if (a.is_zero() || b.is_zero()) return r;
    if (a.is_one()) return b.with_context(r.ctx_);
    if (b.is_one()) return a.with_context(r.ctx_);
    if (!a.big_ && !b.big_ && mul_small(a, b, r)) return r;
    mul_big(a, b, r);
    return r;
  }

  FieldElement inverse() const {
    if (is_zero()) throw InvalidInput("division by zero in field");
    if (is_rational()) {
      FieldElement r(1 / rational_value());
      r.ctx_ = ctx_;
      return r;
    }
    // Extended Euclid in Q[x] against the minimal polynomial.
    const auto& psi = ctx_->minpoly_rational();
    detail::RatPoly r0 = psi, r1 = coefficients();
    detail::RatPoly s0, s1{Rational(1)};
    while (!r1.empty()) {
      auto [q, rem] = detail::divmod(r0, r1);
      auto s2 = detail::sub(s0, detail::mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    COXHODGE_CHECK(r0.size() == 1, "minimal polynomial is reducible");
    for (auto& c : s0) c /= r0[0];
    return from_coefficients(ctx_, s0);
  }

  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    return a * b.inverse();
  }

  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  FieldElement& operator/=(const FieldElement& o) { return *this = *this / o; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    if (!a.big_ && !b.big_) return a.den_ == b.den_ && a.num_ == b.num_;
    if (a.big_ && b.big_) return a.big_->den == b.big_->den && a.big_->num == b.big_->num;
    return false;  // canonical: a value fitting in int64 is never stored big
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  size_t hash() const {
    size_t h = 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    if (big_) {
      mix(mpz_get_ui(big_->den.get_mpz_t()));
      for (const auto& x : big_->num) mix(mpz_get_ui(x.get_mpz_t()) ^ (sgn(x) < 0));
    } else {
      mix(static_cast<size_t>(den_));
      for (auto x : num_) mix(static_cast<size_t>(x));
    }
    return h;
  }

  /// Text such as "1/2*c^2 - c + 3" (descending powers of c).
  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t k = size(); k-- > 0;) {
      Rational q = coefficient(k);
      if (q == 0) continue;
      if (first) {
        if (q < 0) os << "-";
      } else {
        os << (q < 0 ? " - " : " + ");
      }
      Rational aq = abs(q);
      if (k == 0) {
        os << aq.get_str();
      } else {
        if (aq != 1) os << aq.get_str() << "*";
        os << "c";
        if (k > 1) os << "^" << k;
      }
      first = false;
    }
    return os.str();
  }

  /// Floating-point approximation, for display only.
  double approx() const {
    if (is_zero()) return 0.0;
    if (!ctx_) return coefficient(0).get_d();
    const mpf_class& c = ctx_->generator_approx();
    mpf_class v(0, 256);
    for (size_t k = size(); k-- > 0;) v = v * c + mpf_class(coefficient(k), 256);
    return v.get_d();
  }

 private:
  struct Big {
    std::vector<Integer> num;
    Integer den;
  };

  using i128 = detail::i128;

  FieldElement with_context(const FieldContext* ctx) const {
    FieldElement r(*this);
    if (!r.ctx_) r.ctx_ = ctx;
    return r;
  }

  static const FieldContext* merge_context(const FieldElement& a, const FieldElement& b) {
    if (!a.ctx_) return b.ctx_;
    if (!b.ctx_ || a.ctx_ == b.ctx_) return a.ctx_;
    if (a.is_rational()) return b.ctx_;
    if (b.is_rational()) return a.ctx_;
    if (a.ctx_->conductor() == b.ctx_->conductor()) return a.ctx_;
    throw InvalidInput("field elements from different fields");
  }

  void promote_self_negate() {
    std::vector<Integer> n;
    for (auto x : num_) n.push_back(-Integer(static_cast<long>(x)));
    set_big(std::move(n), Integer(static_cast<long>(den_)));
  }

  Big to_big() const {
    if (big_) return *big_;
    Big b;
    for (auto x : num_) b.num.emplace_back(static_cast<long>(x));
    b.den = static_cast<long>(den_);
    return b;
  }

  /// Normalizes and stores an arbitrary-precision value, demoting to int64 when
  /// it fits.
  void set_big(std::vector<Integer> num, Integer den) {
    detail::trim(num);
    if (den < 0) {
      den = -den;
      for (auto& x : num) x = -x;
    }
    if (num.empty()) {
      num_.clear();
      den_ = 1;
      big_.reset();
      return;
    }
    Integer g = den;
    for (const auto& x : num) {
      if (g == 1) break;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    }
    if (g != 1) {
      den /= g;
      for (auto& x : num) x /= g;
    }
    bool fits = detail::fits64(den);
    for (const auto& x : num) fits = fits && detail::fits64(x);
    if (fits) {
      big_.reset();
      den_ = den.get_si();
      num_.resize(num.size());
      for (size_t i = 0; i < num.size(); ++i) num_[i] = num[i].get_si();
    } else {
      num_.clear();
      den_ = 1;
      big_ = std::make_unique<Big>(Big{std::move(num), std::move(den)});
    }
  }

  void set_i128(std::vector<i128>& num, i128 den) {
    while (!num.empty() && num.back() == 0) num.pop_back();
    if (num.empty()) {
      num_.clear();
      den_ = 1;
      big_.reset();
      return;
    }
    if (den < 0) {
      if (den == std::numeric_limits<i128>::min()) return set_big_from(num, den);
      den = -den;
      for (auto& x : num) {
        if (x == std::numeric_limits<i128>::min()) return set_big_from(num, -den);
        x = -x;
      }
    }
    detail::u128 g = detail::u128(den);
    for (auto x : num) {
      if (g == 1) break;
      g = detail::gcd128(g, detail::abs128(x));
    }
    if (g != 1) {
      den /= i128(g);
      for (auto& x : num) x /= i128(g);
    }
    bool fits = detail::fits64(den);
    for (auto x : num) fits = fits && detail::fits64(x);
    if (!fits) return set_big_from(num, den);
    big_.reset();
    den_ = static_cast<int64_t>(den);
    num_.resize(num.size());
    for (size_t i = 0; i < num.size(); ++i) num_[i] = static_cast<int64_t>(num[i]);
  }

  void set_big_from(const std::vector<i128>& num, i128 den) {
    std::vector<Integer> n;
    for (auto x : num) n.push_back(detail::to_mpz(x));
    set_big(std::move(n), detail::to_mpz(den));
  }

  static bool add_small(const FieldElement& a, const FieldElement& b, int sgn_b,
                        FieldElement& r) {
    const size_t n = std::max(a.num_.size(), b.num_.size());
    if (a.den_ == b.den_) {
      std::vector<int64_t> out(n, 0);
      for (size_t i = 0; i < n; ++i) {
        int64_t x = i < a.num_.size() ? a.num_[i] : 0;
        int64_t y = i < b.num_.size() ? b.num_[i] : 0;
        bool ovf = sgn_b > 0 ? __builtin_add_overflow(x, y, &out[i])
                             : __builtin_sub_overflow(x, y, &out[i]);
        if (ovf) return false;
      }
      while (!out.empty() && out.back() == 0) out.pop_back();
      if (out.empty()) {
        r.num_.clear();
        r.den_ = 1;
        return true;
      }
      uint64_t g = static_cast<uint64_t>(a.den_);
      if (g != 1)
        for (auto x : out) {
          g = std::gcd(g, static_cast<uint64_t>(x < 0 ? -static_cast<i128>(x) : x));
          if (g == 1) break;
        }
      r.den_ = a.den_ / static_cast<int64_t>(g);
      if (g != 1)
        for (auto& x : out) x /= static_cast<int64_t>(g);
      r.num_ = std::move(out);
      return true;
    }
    std::vector<i128> out(n, 0);
    for (size_t i = 0; i < n; ++i) {
      i128 x = i < a.num_.size() ? i128(a.num_[i]) * b.den_ : 0;
      i128 y = i < b.num_.size() ? i128(b.num_[i]) * a.den_ : 0;
      out[i] = sgn_b > 0 ? x + y : x - y;
    }
    r.set_i128(out, i128(a.den_) * b.den_);
    return true;
  }

  static void add_big(const FieldElement& a, const FieldElement& b, int sgn_b, FieldElement& r) {
    Big x = a.to_big(), y = b.to_big();
    const size_t n = std::max(x.num.size(), y.num.size());
    std::vector<Integer> out(n, 0);
    for (size_t i = 0; i < x.num.size(); ++i) out[i] += x.num[i] * y.den;
    for (size_t i = 0; i < y.num.size(); ++i) {
      if (sgn_b > 0)
        out[i] += y.num[i] * x.den;
      else
        out[i] -= y.num[i] * x.den;
    }
    r.set_big(std::move(out), x.den * y.den);
  }

  static bool mul_small(const FieldElement& a, const FieldElement& b, FieldElement& r) {
    const i128 den = i128(a.den_) * b.den_;
    if (a.num_.size() == 1 || b.num_.size() == 1) {
      const auto& v = a.num_.size() == 1 ? b.num_ : a.num_;
      const i128 s = a.num_.size() == 1 ? a.num_[0] : b.num_[0];
      std::vector<i128> out(v.size());
      for (size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
      r.set_i128(out, den);
      return true;
    }
    const FieldContext* ctx = r.ctx_;
    if (!ctx || !ctx->small_minpoly()) return false;
    const size_t d = static_cast<size_t>(ctx->degree());
    std::vector<i128> acc(a.num_.size() + b.num_.size() - 1, 0);
    for (size_t i = 0; i < a.num_.size(); ++i) {
      if (a.num_[i] == 0) continue;
      for (size_t j = 0; j < b.num_.size(); ++j) {
        i128 p = i128(a.num_[i]) * b.num_[j];
        if (__builtin_add_overflow(acc[i + j], p, &acc[i + j])) return false;
      }
    }
    const auto& psi = ctx->minpoly_small();
    for (size_t k = acc.size(); k-- > d;) {
      const i128 t = acc[k];
      if (t == 0) continue;
      for (size_t j = 0; j < d; ++j) {
        if (psi[j] == 0) continue;
        i128 p;
        if (__builtin_mul_overflow(t, i128(psi[j]), &p)) return false;
        if (__builtin_sub_overflow(acc[k - d + j], p, &acc[k - d + j])) return false;
      }
      acc[k] = 0;
    }
    if (acc.size() > d) acc.resize(d);
    r.set_i128(acc, den);
    return true;
  }

  static void mul_big(const FieldElement& a, const FieldElement& b, FieldElement& r) {
    Big x = a.to_big(), y = b.to_big();
    std::vector<Integer> acc(x.num.size() + y.num.size() - 1, 0);
    for (size_t i = 0; i < x.num.size(); ++i)
      for (size_t j = 0; j < y.num.size(); ++j) acc[i + j] += x.num[i] * y.num[j];
    if (acc.size() > 1) {
      const FieldContext* ctx = r.ctx_;
      if (!ctx) throw InvalidInput("irrational product without field context");
      const auto& psi = ctx->minimal_polynomial();
      const size_t d = psi.size() - 1;
      for (size_t k = acc.size(); k-- > d;) {
        if (acc[k] == 0) continue;
        Integer t = acc[k];
        for (size_t j = 0; j < d; ++j) acc[k - d + j] -= t * psi[j];
        acc[k] = 0;
      }
      if (acc.size() > d) acc.resize(d);
    }
    r.set_big(std::move(acc), x.den * y.den);
  }

  const FieldContext* ctx_ = nullptr;
  int64_t den_ = 1;
  std::vector<int64_t> num_;
  std::unique_ptr<Big> big_;
};

inline std::ostream& operator<<(std::ostream& os, const FieldElement& x) {
  return os << x.to_string();
}

/// Sign under the fixed real embedding.  Exact: the zero test is structural, a
/// nonzero element is bracketed by interval evaluation on successively
/// narrower enclosures of the generator.
inline int sign(const FieldElement& x) {
  if (x.is_zero()) return 0;
  if (x.is_rational()) return detail::sgn(x.rational_value());
  const FieldContext* ctx = x.context();
  // Common denominator is positive, so the sign of the numerator polynomial
  // decides.  Coefficients split into positive and negative parts are monotone
  // on the positive enclosure.
  std::vector<Integer> pos, neg;
  {
    Integer den = 1;
    auto cs = x.coefficients();
    for (const auto& q : cs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    for (const auto& q : cs) {
      Integer v = q.get_num() * (den / q.get_den());
      pos.push_back(v > 0 ? v : Integer(0));
      neg.push_back(v < 0 ? Integer(-v) : Integer(0));
    }
  }
  auto horner = [](const std::vector<Integer>& p, const Rational& t) {
    Rational r = 0;
    for (size_t k = p.size(); k-- > 0;) r = r * t + p[k];
    return r;
  };
  Rational lo = ctx->enclosure_low(), hi = ctx->enclosure_high();
  COXHODGE_CHECK(lo > 0, "generator enclosure must be positive");
  for (int iter = 0; iter < 100000; ++iter) {
    if (horner(pos, lo) - horner(neg, hi) > 0) return 1;
    if (horner(pos, hi) - horner(neg, lo) < 0) return -1;
    for (int j = 0; j < 16; ++j) ctx->refine(lo, hi);
  }
  throw InternalError("sign refinement did not terminate");
}

inline FieldElement abs(const FieldElement& x) { return sign(x) < 0 ? -x : x; }

/// Field for a Coxeter matrix: conductor 2 lcm of the finite entries >= 3, or 2.
inline FieldContextPtr field_context(const CoxeterMatrix& m) {
  const size_t n = m.size();
  long l = 1;
  for (size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw InvalidInput("Coxeter matrix is not square");
    if (m[i][i] != 1) throw InvalidInput("Coxeter matrix diagonal must be 1");
    for (size_t j = 0; j < n; ++j) {
      if (m[i][j] != m[j][i]) throw InvalidInput("Coxeter matrix is not symmetric");
      if (i != j && m[i][j] != kInfinity && m[i][j] < 2)
        throw InvalidInput("off-diagonal Coxeter entries must be >= 2 or infinity");
      if (i != j && m[i][j] >= 3) l = std::lcm(l, static_cast<long>(m[i][j]));
    }
  }
  if (l > 100000) throw InvalidInput("Coxeter entries too large");
  return FieldContext::for_conductor(l == 1 ? 2 : static_cast<int>(2 * l));
}

/// cos(k pi / n) as an exact element; n must divide the conductor after
/// reducing k/n.
inline FieldElement cos_fraction(long k, long n, const FieldContext& ctx) {
  if (n <= 0) throw InvalidInput("cos_fraction: denominator must be positive");
  long g = std::gcd(k < 0 ? -k : k, n);
  k /= g;
  n /= g;
  const long big_n = ctx.conductor();
  if (big_n % n != 0)
    throw InvalidInput("cos_fraction: n = " + std::to_string(n) + " does not divide " +
                       std::to_string(big_n));
  long j = k * (big_n / n);
  j %= 2 * big_n;
  if (j < 0) j += 2 * big_n;
  if (j > big_n) j = 2 * big_n - j;
  // 2cos(j theta) = D_j(2cos theta) with D_0 = 2, D_1 = x, D_{i+1} = x D_i - D_{i-1}.
  const FieldElement c = FieldElement::generator(&ctx);
  FieldElement prev = 2, cur = c;
  if (j == 0) cur = prev;
  for (long i = 1; i < j; ++i) {
    FieldElement next = c * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  FieldElement half(1, 2);
  FieldElement r = cur * half;
  return r;
}

/// Specialized quantum number [n] at q = exp(i pi / m).
inline FieldElement qnum(long n, long m, const FieldContext& ctx) {
  if (m < 2) throw InvalidInput("qnum: m must be at least 2");
  if (n < 0) return -qnum(-n, m, ctx);
  if (n == 0) return FieldElement();
  const FieldElement two_cos = cos_fraction(1, m, ctx) * FieldElement(2);
  FieldElement prev = 0, cur = 1;
  for (long i = 1; i < n; ++i) {
    FieldElement next = two_cos * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Laurent polynomial in q with integer coefficients.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  static LaurentPolynomial monomial(int exponent, long coeff = 1) {
    LaurentPolynomial p;
    if (coeff != 0) p.terms_[exponent] = coeff;
    return p;
  }

  /// [n] = q^{-n+1} + q^{-n+3} + ... + q^{n-1}, and [-n] = -[n].
  static LaurentPolynomial quantum(int n) {
    if (n < 0) return -quantum(-n);
    LaurentPolynomial p;
    for (int k = 0; k < n; ++k) p.terms_[-n + 1 + 2 * k] += 1;
    return p;
  }

  const std::map<int, Integer>& terms() const { return terms_; }

  LaurentPolynomial operator-() const {
    LaurentPolynomial r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) {
    for (const auto& [e, c] : b.terms_) a.terms_[e] += c;
    a.clean();
    return a;
  }
  friend LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    return a + (-b);
  }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial r;
    for (const auto& [e1, c1] : a.terms_)
      for (const auto& [e2, c2] : b.terms_) r.terms_[e1 + e2] += c1 * c2;
    r.clean();
    return r;
  }
  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    return a.terms_ == b.terms_;
  }

  /// Value at q = exp(i pi / m) for a bar-invariant polynomial (coefficient of
  /// q^e equals that of q^{-e}), so the value is real.
  FieldElement evaluate_real(long m, const FieldContext& ctx) const {
    FieldElement r;
    for (const auto& [e, c] : terms_) {
      if (terms_.count(-e) == 0 || terms_.at(-e) != c)
        throw InvalidInput("Laurent polynomial is not bar-invariant");
      // real part of q^e is cos(e pi / m)
      r += FieldElement(Rational(c)) * cos_fraction(e, m, ctx);
    }
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << " + ";
      os << c.get_str() << "*q^" << e;
      first = false;
    }
    return os.str();
  }

 private:
  void clean() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = it->second == 0 ? terms_.erase(it) : std::next(it);
  }
  std::map<int, Integer> terms_;
};

}  // namespace coxhodge

template <>
struct std::hash<coxhodge::FieldElement> {
  size_t operator()(const coxhodge::FieldElement& x) const { return x.hash(); }
};
