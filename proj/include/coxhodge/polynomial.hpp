#pragma once

// Polynomials in the simple roots, W-action and divided differences.

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "coxhodge/coxeter.hpp"

namespace coxhodge {

/// Sparse polynomial in the variables a1..an (the simple roots).  Each
/// variable has degree 2; degree() below is the ordinary polynomial degree.
class Polynomial {
 public:
  using Exponent = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : n_(nvars) {}

  static Polynomial constant(int nvars, const FieldElement& c) {
    Polynomial p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }

  static Polynomial variable(int nvars, int i) {
    Polynomial p(nvars);
    Exponent e(nvars, 0);
    e.at(i) = 1;
    p.add_term(e, 1);
    return p;
  }

  /// sum_s coords[s] a_s.
  static Polynomial linear(const Vector& coords) {
    const int n = static_cast<int>(coords.size());
    Polynomial p(n);
    for (int s = 0; s < n; ++s) {
      Exponent e(n, 0);
      e[s] = 1;
      p.add_term(e, coords[s]);
    }
    return p;
  }

  int nvars() const { return n_; }
  const std::map<Exponent, FieldElement>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const FieldElement& c) {
    if (static_cast<int>(e.size()) != n_) throw InvalidInput("exponent length mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  FieldElement coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? FieldElement() : it->second;
  }

  static int total(const Exponent& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
  }

  /// Polynomial degree; -1 for zero.
  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, total(e));
    return d;
  }

  bool is_homogeneous() const {
    int d = -2;
    for (const auto& [e, c] : terms_) {
      if (d == -2) d = total(e);
      if (total(e) != d) return false;
    }
    return true;
  }

  Polynomial homogeneous_part(int d) const {
    Polynomial p(n_);
    for (const auto& [e, c] : terms_)
      if (total(e) == d) p.terms_.emplace(e, c);
    return p;
  }

  FieldElement constant_term() const { return coefficient(Exponent(n_, 0)); }

  /// Coordinates of a linear polynomial.  Throws NonLinear otherwise.
  Vector linear_coordinates() const {
    Vector v(n_);
    for (const auto& [e, c] : terms_) {
      if (total(e) != 1) throw NonLinear("polynomial is not homogeneous linear");
      for (int s = 0; s < n_; ++s)
        if (e[s]) v[s] = c;
    }
    return v;
  }

  Polynomial operator-() const {
    Polynomial p = *this;
    for (auto& [e, c] : p.terms_) c = -c;
    return p;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    a.unify(b);
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }

  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    a.unify(b);
    for (const auto& [e, c] : b.terms_) a.add_term(e, -c);
    return a;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r(std::max(a.n_, b.n_));
    if (a.n_ != b.n_ && !a.is_zero() && !b.is_zero())
      throw InvalidInput("polynomials over different variable sets");
    Exponent e(r.n_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (int i = 0; i < r.n_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  friend Polynomial operator*(const FieldElement& s, const Polynomial& a) {
    Polynomial r(a.n_);
    if (s.is_zero()) return r;
    for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, s * c);
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms_ == b.terms_ && (a.n_ == b.n_ || a.terms_.empty());
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial pow(unsigned k) const {
    Polynomial r = constant(n_, 1);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Image under a_t -> a_t - C[s][t] a_s (so a_s -> -a_s).
  Polynomial reflect(const CoxeterSystem& sys, int s) const {
    Polynomial r(n_);
    for (const auto& [e, c] : terms_) {
      std::map<Exponent, FieldElement> acc;
      Exponent base(n_, 0);
      base[s] = e[s];
      acc.emplace(base, (e[s] % 2) ? -c : c);
      for (int t = 0; t < n_; ++t) {
        if (t == s || e[t] == 0) continue;
        const FieldElement mc = -sys.cartan(s, t);
        std::map<Exponent, FieldElement> next;
        // (a_t + mc a_s)^k = sum_j binom(k, j) mc^j a_t^{k-j} a_s^j
        std::vector<FieldElement> coeff(e[t] + 1);
        FieldElement pw = 1;
        long binom = 1;
        for (int j = 0; j <= e[t]; ++j) {
          coeff[j] = FieldElement(binom) * pw;
          if (mc.is_zero()) break;
          pw *= mc;
          binom = binom * (e[t] - j) / (j + 1);
        }
        for (const auto& [ex, cx] : acc)
          for (int j = 0; j <= e[t]; ++j) {
            if (coeff[j].is_zero()) continue;
            Exponent ne = ex;
            ne[t] += e[t] - j;
            ne[s] += j;
            auto it = next.find(ne);
            if (it == next.end())
              next.emplace(ne, cx * coeff[j]);
            else
              it->second += cx * coeff[j];
          }
        acc = std::move(next);
      }
      for (const auto& [ex, cx] : acc) r.add_term(ex, cx);
    }
    return r;
  }

  /// Image under the element with matrix w: a_t -> sum_u w(u, t) a_u.
  Polynomial act(const Matrix& w) const {
    std::vector<Polynomial> images;
    for (int t = 0; t < n_; ++t) images.push_back(linear(w.column(t)));
    std::vector<std::vector<Polynomial>> powers(n_);
    Polynomial r(n_);
    for (const auto& [e, c] : terms_) {
      Polynomial m = constant(n_, c);
      for (int t = 0; t < n_; ++t) {
        if (e[t] == 0) continue;
        auto& pw = powers[t];
        if (pw.empty()) pw.push_back(constant(n_, 1));
        while (static_cast<int>(pw.size()) <= e[t]) pw.push_back(pw.back() * images[t]);
        m = m * pw[e[t]];
      }
      r += m;
    }
    return r;
  }

  /// Exact quotient by a_s; throws InternalError if some term lacks a_s.
  Polynomial divide_by_variable(int s) const {
    Polynomial r(n_);
    for (const auto& [e, c] : terms_) {
      COXHODGE_CHECK(e[s] >= 1, "inexact division by a simple root");
      Exponent ne = e;
      --ne[s];
      r.terms_.emplace(std::move(ne), c);
    }
    return r;
  }

  /// Text such as "a1^2*a2 - 1/2*c*a1".  Field coefficients are written out as
  /// separate c^j terms.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Exponent, FieldElement>> order(terms_.begin(), terms_.end());
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      int da = total(a.first), db = total(b.first);
      if (da != db) return da > db;
      return a.first > b.first;
    });
    std::string s;
    bool first = true;
    for (const auto& [e, c] : order) {
      for (size_t k = c.size(); k-- > 0;) {
        Rational q = c.coefficient(k);
        if (q == 0) continue;
        if (first)
          s += q < 0 ? "-" : "";
        else
          s += q < 0 ? " - " : " + ";
        first = false;
        Rational aq = abs(q);
        std::vector<std::string> factors;
        bool has_var = k > 0 || total(e) > 0;
        if (aq != 1 || !has_var) factors.push_back(aq.get_str());
        if (k == 1) factors.push_back("c");
        if (k > 1) factors.push_back("c^" + std::to_string(k));
        for (int i = 0; i < n_; ++i) {
          if (e[i] == 0) continue;
          std::string v = "a" + std::to_string(i + 1);
          if (e[i] > 1) v += "^" + std::to_string(e[i]);
          factors.push_back(v);
        }
        for (size_t f = 0; f < factors.size(); ++f) s += (f ? "*" : "") + factors[f];
      }
    }
    return s;
  }

  /// Parses the text format; variables must be a1..a<nvars>.
  static Polynomial parse(const std::string& text, int nvars, const FieldContext* ctx);

 private:
  void unify(const Polynomial& b) {
    if (n_ == b.n_) return;
    if (terms_.empty()) {
      n_ = b.n_;
      return;
    }
    if (!b.terms_.empty()) throw InvalidInput("polynomials over different variable sets");
  }

  int n_ = 0;
  std::map<Exponent, FieldElement> terms_;
};

namespace detail {

class PolyParser {
 public:
  PolyParser(const std::string& s, int n, const FieldContext* ctx) : s_(s), n_(n), ctx_(ctx) {}

  Polynomial run() {
    skip();
    if (pos_ == s_.size()) fail("empty polynomial");
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw InvalidInput("cannot parse polynomial '" + s_ + "': " + why + " at position " +
                       std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  Integer number() {
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return Integer(s_.substr(start, pos_ - start));
  }

  Polynomial expr() {
    Polynomial p = term();
    while (true) {
      if (eat('+'))
        p = p + term();
      else if (eat('-'))
        p = p - term();
      else
        return p;
    }
  }

  Polynomial term() {
    Polynomial p = factor();
    while (eat('*')) p = p * factor();
    return p;
  }

  Polynomial factor() {
    if (eat('-')) return -factor();
    Polynomial base = primary();
    if (eat('^')) {
      Integer k = number();
      if (k > 64) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(k.get_ui()));
    }
    return base;
  }

  Polynomial primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char ch = s_[pos_];
    if (eat('(')) {
      Polynomial p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      Integer num = number();
      Integer den = 1;
      if (eat('/')) {
        den = number();
        if (den == 0) fail("zero denominator");
      }
      return Polynomial::constant(n_, FieldElement(Rational(num, den)));
    }
    if (ch == 'c') {
      ++pos_;
      if (!ctx_) fail("generator c needs a field");
      FieldElement g = FieldElement::generator(ctx_);
      return Polynomial::constant(n_, g);
    }
    if (ch == 'a') {
      ++pos_;
      Integer idx = number();
      if (idx < 1 || idx > n_) fail("variable index out of range");
      return Polynomial::variable(n_, static_cast<int>(idx.get_si()) - 1);
    }
    fail("unexpected character");
  }

  const std::string& s_;
  int n_;
  const FieldContext* ctx_;
  size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial Polynomial::parse(const std::string& text, int nvars, const FieldContext* ctx) {
  return detail::PolyParser(text, nvars, ctx).run();
}

inline FieldElement parse_field_element(const std::string& text, const FieldContext* ctx) {
  Polynomial p = Polynomial::parse(text, 0, ctx);
  return p.constant_term();
}

/// s(f) for a simple reflection.
inline Polynomial act(const CoxeterSystem& sys, int s, const Polynomial& f) {
  return f.reflect(sys, s);
}

/// w(f) for an element given by its matrix.
inline Polynomial act(const Matrix& w, const Polynomial& f) { return f.act(w); }

/// (f - s f) / a_s.
inline Polynomial demazure(const CoxeterSystem& sys, int s, const Polynomial& f) {
  if (f.is_zero()) return f;
  return (f - f.reflect(sys, s)).divide_by_variable(s);
}

/// d_{s1} d_{s2} ... d_{sk} f (the last letter acts first).
inline Polynomial demazure_word(const CoxeterSystem& sys, const Word& word, const Polynomial& f) {
  sys.check_word(word);
  Polynomial g = f;
  for (auto it = word.rbegin(); it != word.rend(); ++it) g = demazure(sys, *it, g);
  return g;
}

}  // namespace coxhodge
