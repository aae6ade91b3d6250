#pragma once

// Hard Lefschetz and Hodge-Riemann checks on graded modules with a pairing.

#include <algorithm>
#include <array>
#include <chrono>
#include <memory>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "coxhodge/coxeter.hpp"
#include "coxhodge/graded_module.hpp"
#include "coxhodge/matrix.hpp"

namespace coxhodge {

/// A linear form lambda in simple-root coordinates with its coroot pairings.
struct AmpleWeight {
  Vector lambda;
  std::vector<FieldElement> pairings;  // <lambda, a_s^vee>
  bool ample = false;

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (const auto& x : lambda) out.push_back(x.to_string());
    return out;
  }
};

inline AmpleWeight make_weight(const CoxeterSystem& sys, Vector lambda) {
  if (static_cast<int>(lambda.size()) != sys.rank())
    throw InvalidInput("lambda needs " + std::to_string(sys.rank()) + " coordinates");
  AmpleWeight w;
  w.lambda = std::move(lambda);
  w.ample = true;
  for (int s = 0; s < sys.rank(); ++s) {
    Vector e(sys.rank());
    e[s] = 1;
    w.pairings.push_back(sys.pair(w.lambda, e));
    if (sign(w.pairings.back()) <= 0) w.ample = false;
  }
  return w;
}

/// rho: the weight pairing to 1 with every simple coroot.
inline AmpleWeight rho_weight(const CoxeterSystem& sys) {
  const int n = sys.rank();
  Matrix ones(n, 1);
  for (int s = 0; s < n; ++s) ones(s, 0) = 1;
  auto x = solve(sys.cartan(), ones);
  if (!x) throw InvalidInput("rho is undefined: the Cartan matrix is singular");
  return make_weight(sys, x->column(0));
}

/// The first `count` integer weights (gcd 1, ordered by largest entry, then
/// lexicographically) that the sign oracle certifies as ample.
inline std::vector<AmpleWeight> sample_ample_weights(const CoxeterSystem& sys, size_t count,
                                                     long max_entry = 64) {
  const int n = sys.rank();
  std::vector<AmpleWeight> out;
  for (long top = 1; top <= max_entry && out.size() < count; ++top) {
    std::vector<long> v(n, 1);
    while (true) {
      long mx = *std::max_element(v.begin(), v.end());
      long g = 0;
      for (long x : v) g = std::gcd(g, x);
      if (mx == top && g == 1) {
        Vector lam;
        for (long x : v) lam.emplace_back(x);
        AmpleWeight w = make_weight(sys, lam);
        if (w.ample) {
          out.push_back(std::move(w));
          if (out.size() == count) break;
        }
      }
      int j = n - 1;
      while (j >= 0 && v[j] == top) v[j--] = 1;
      if (j < 0) break;
      ++v[j];
    }
  }
  if (out.size() < count) throw InternalError("not enough ample sample weights found");
  return out;
}

struct Signature {
  size_t positive = 0, negative = 0, zero = 0;
  size_t total() const { return positive + negative + zero; }
  friend bool operator==(const Signature& a, const Signature& b) {
    return std::tie(a.positive, a.negative, a.zero) == std::tie(b.positive, b.negative, b.zero);
  }
};

/// Inertia of a symmetric matrix by congruence diagonalization.
inline Signature signature(Matrix a) {
  if (a.rows() != a.cols()) throw NotSymmetric("signature of a non-square matrix");
  if (!(a == a.transpose())) throw NotSymmetric("matrix is not symmetric");
  const size_t n = a.rows();
  Signature sig;
  auto swap_index = [&](size_t i, size_t j) {
    if (i == j) return;
    for (size_t c = 0; c < n; ++c) std::swap(a(i, c), a(j, c));
    for (size_t r = 0; r < n; ++r) std::swap(a(r, i), a(r, j));
  };
  for (size_t i = 0; i < n; ++i) {
    size_t best = n;
    for (size_t k = i; k < n; ++k)
      if (!a(k, k).is_zero() && (best == n || a(k, k).size() < a(best, best).size())) best = k;
    if (best == n) {
      // zero diagonal: pull an off-diagonal entry onto it
      size_t p = n, q = n;
      for (size_t r = i; r < n && p == n; ++r)
        for (size_t c = r + 1; c < n; ++c)
          if (!a(r, c).is_zero()) {
            p = r;
            q = c;
            break;
          }
      if (p == n) {
        sig.zero += n - i;
        return sig;
      }
      for (size_t c = 0; c < n; ++c) a(p, c) += a(q, c);
      for (size_t r = 0; r < n; ++r) a(r, p) += a(r, q);
      best = p;
    }
    swap_index(i, best);
    const FieldElement piv = a(i, i);
    const FieldElement inv = piv.inverse();
    for (size_t r = i + 1; r < n; ++r) {
      if (a(r, i).is_zero()) continue;
      FieldElement f = a(r, i) * inv;
      for (size_t c = i; c < n; ++c)
        if (!a(i, c).is_zero()) a(r, c) -= f * a(i, c);
    }
    for (size_t c = i + 1; c < n; ++c) a(i, c) = FieldElement();
    for (size_t r = i + 1; r < n; ++r) a(r, i) = FieldElement();
    if (sign(piv) > 0) ++sig.positive;
    else ++sig.negative;
  }
  return sig;
}

struct DegreeRecord {
  int i = 0;
  size_t dim = 0;
  size_t rank = 0;
  bool hl = false;
  size_t prim_dim = 0;
  Signature signature;       // Lefschetz form on all of M^i
  Signature prim_signature;  // restricted to P^i
  bool hr = false;
};

inline void check_degrees(const GradedModule& m, int ell) {
  if (m.total_dim() == 0) return;
  if (m.lowest_degree() < 0 || m.highest_degree() > 2 * ell || m.lowest_degree() % 2 != 0)
    throw DegreeMismatch("module degrees must lie in [0, " + std::to_string(2 * ell) + "] and be even");
}

/// lambda^(ell - i): M^i -> M^(2 ell - i), as a matrix (possibly with zero rows).
inline Matrix lefschetz_map(const GradedModule& m, const Vector& lambda, int ell, int i) {
  const size_t src = m.dim(i), dst = m.dim(2 * ell - i);
  if (src == 0) return Matrix(dst, 0);
  if (dst == 0) return Matrix(0, src);
  return m.linear_power(lambda, i, (2 * ell - 2 * i) / 2);
}

/// Per even degree i <= ell: rank of lambda^(ell - i) and whether it is bijective.
inline std::vector<DegreeRecord> hard_lefschetz(const GradedModule& m, const AmpleWeight& w, int ell) {
  check_degrees(m, ell);
  std::vector<DegreeRecord> out;
  for (int i = 0; i <= ell; i += 2) {
    DegreeRecord r;
    r.i = i;
    r.dim = m.dim(i);
    Matrix l = lefschetz_map(m, w.lambda, ell, i);
    r.rank = rank(l);
    r.hl = r.rank == r.dim && m.dim(2 * ell - i) == r.dim;
    out.push_back(r);
  }
  return out;
}

/// Basis (as columns) of P^i = ker lambda^(ell - i + 1) inside M^i.
inline Matrix primitive_subspace(const GradedModule& m, const AmpleWeight& w, int ell, int i) {
  const size_t d = m.dim(i);
  if (d == 0) return Matrix(0, 0);
  const int target = 2 * ell - i + 2;
  if (m.dim(target) == 0) return Matrix::identity(d);
  return nullspace(m.linear_power(w.lambda, i, ell - i + 1));
}

/// Gram matrix of (f, g) = <f, lambda^(ell - i) g> on M^i.
inline Matrix lefschetz_form(const GradedModule& m, const AmpleWeight& w, int ell, int i) {
  if (!m.has_form()) throw InvalidInput("module carries no pairing");
  if (m.form_top() != 2 * ell) throw DegreeMismatch("pairing top degree differs from 2 ell");
  const size_t d = m.dim(i);
  if (d == 0) return Matrix(0, 0);
  const size_t k = *m.piece_of_degree(i);
  return m.form_block(k) * lefschetz_map(m, w.lambda, ell, i);
}

/// P^i restricted Lefschetz form must be (-1)^(i/2)-definite.
inline std::vector<DegreeRecord> hodge_riemann(const GradedModule& m, const AmpleWeight& w, int ell) {
  std::vector<DegreeRecord> out = hard_lefschetz(m, w, ell);
  for (auto& r : out) {
    Matrix g = lefschetz_form(m, w, ell, r.i);
    r.signature = signature(g);
    Matrix p = primitive_subspace(m, w, ell, r.i);
    r.prim_dim = p.cols();
    if (r.prim_dim == 0) {
      r.prim_signature = {};
      r.hr = true;
      continue;
    }
    r.prim_signature = signature(p.transpose() * g * p);
    Signature want;
    if (r.i % 4 == 0) want.positive = r.prim_dim;
    else want.negative = r.prim_dim;
    r.hr = r.prim_signature == want;
  }
  return out;
}

struct LefschetzReport {
  std::string group;
  std::vector<int> word;  // 1-based
  std::string summand = "D_w";
  std::vector<std::string> lambda;
  bool ample = false;
  std::vector<DegreeRecord> degrees;
  bool pass = false;
  long long millis = 0;

  friend bool operator==(const LefschetzReport& a, const LefschetzReport& b) {
    if (std::tie(a.group, a.word, a.summand, a.lambda, a.ample, a.pass, a.millis) !=
            std::tie(b.group, b.word, b.summand, b.lambda, b.ample, b.pass, b.millis) ||
        a.degrees.size() != b.degrees.size())
      return false;
    for (size_t k = 0; k < a.degrees.size(); ++k) {
      const auto &x = a.degrees[k], &y = b.degrees[k];
      if (std::tie(x.i, x.dim, x.rank, x.hl, x.prim_dim, x.hr) !=
              std::tie(y.i, y.dim, y.rank, y.hl, y.prim_dim, y.hr) ||
          !(x.signature == y.signature))
        return false;
    }
    return true;
  }
};

/// Runs both checks on a module whose degrees lie in [0, 2 ell].
inline LefschetzReport check_module(const GradedModule& m, const AmpleWeight& w, int ell) {
  auto t0 = std::chrono::steady_clock::now();
  LefschetzReport rep;
  rep.lambda = w.strings();
  rep.ample = w.ample;
  rep.degrees = hodge_riemann(m, w, ell);
  rep.pass = std::all_of(rep.degrees.begin(), rep.degrees.end(),
                         [](const DegreeRecord& r) { return r.hl && r.hr; });
  rep.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                   .count();
  return rep;
}

inline nlohmann::json to_json(const LefschetzReport& r) {
  nlohmann::json j;
  j["group"] = r.group;
  j["word"] = r.word;
  j["summand"] = r.summand;
  j["lambda"] = r.lambda;
  j["ample"] = r.ample;
  j["degrees"] = nlohmann::json::array();
  for (const auto& d : r.degrees)
    j["degrees"].push_back({{"i", d.i},
                            {"dim", d.dim},
                            {"rank", d.rank},
                            {"hl", d.hl},
                            {"prim_dim", d.prim_dim},
                            {"signature", {d.signature.positive, d.signature.negative, d.signature.zero}},
                            {"hr", d.hr}});
  j["verdict"] = r.pass ? "pass" : "fail";
  j["millis"] = r.millis;
  return j;
}

inline LefschetzReport report_from_json(const nlohmann::json& j) {
  LefschetzReport r;
  try {
    r.group = j.at("group").get<std::string>();
    r.word = j.at("word").get<std::vector<int>>();
    r.summand = j.at("summand").get<std::string>();
    r.lambda = j.at("lambda").get<std::vector<std::string>>();
    r.ample = j.at("ample").get<bool>();
    for (const auto& d : j.at("degrees")) {
      DegreeRecord x;
      x.i = d.at("i").get<int>();
      x.dim = d.at("dim").get<size_t>();
      x.rank = d.at("rank").get<size_t>();
      x.hl = d.at("hl").get<bool>();
      x.prim_dim = d.at("prim_dim").get<size_t>();
      auto s = d.at("signature").get<std::vector<size_t>>();
      if (s.size() != 3) throw InvalidInput("signature needs three entries");
      x.signature = {s[0], s[1], s[2]};
      x.hr = d.at("hr").get<bool>();
      r.degrees.push_back(x);
    }
    const std::string v = j.at("verdict").get<std::string>();
    if (v != "pass" && v != "fail") throw InvalidInput("verdict must be pass or fail");
    r.pass = v == "pass";
    r.millis = j.at("millis").get<long long>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed report: ") + e.what());
  }
  return r;
}

// Dihedral computations in the Schubert basis, with entries linear in the
// formal pairings a1 = <lambda, a_1^vee>, a2 = <lambda, a_2^vee>.

struct LinearForm2 {
  FieldElement a1, a2;
  friend bool operator==(const LinearForm2& x, const LinearForm2& y) { return x.a1 == y.a1 && x.a2 == y.a2; }
  std::string to_string() const {
    return "(" + a1.to_string() + ")*a1 + (" + a2.to_string() + ")*a2";
  }
};

/// c11 a1^2 + c12 a1 a2 + c22 a2^2
struct QuadraticForm2 {
  FieldElement c11, c12, c22;
  friend bool operator==(const QuadraticForm2& x, const QuadraticForm2& y) {
    return x.c11 == y.c11 && x.c12 == y.c12 && x.c22 == y.c22;
  }
};

inline QuadraticForm2 multiply(const LinearForm2& x, const LinearForm2& y) {
  return {x.a1 * y.a1, x.a1 * y.a2 + x.a2 * y.a1, x.a2 * y.a2};
}

struct DihedralStep {
  int m = 0, i = 0;
  Word sources[2];  // length m - i, starting with s1 resp. s2
  Word targets[2];  // length m - i - 1, starting with s1 resp. s2
  std::array<std::array<LinearForm2, 2>, 2> entries;  // [target][source]
  QuadraticForm2 determinant;
  QuadraticForm2 expected;  // [i][i+1](a1^2 + a2^2) + [2][i][i+1] a1 a2
  bool identity_holds() const { return determinant == expected; }
};

inline Word alternating_word(int first, int length) {
  Word w;
  for (int k = 0; k < length; ++k) w.push_back((first + k) % 2);
  return w;
}

inline std::shared_ptr<const FiniteCoxeterGroup> dihedral_group(int m) {
  if (m < 2) throw InvalidInput("dihedral order m must be at least 2");
  return std::make_shared<FiniteCoxeterGroup>(CoxeterSystem::from_type("I2:" + std::to_string(m)));
}

/// Chevalley coefficients of lambda * Y_x as linear forms in (a1, a2).
inline std::vector<std::pair<size_t, LinearForm2>> formal_chevalley(const FiniteCoxeterGroup& g, size_t x) {
  std::vector<std::pair<size_t, LinearForm2>> out;
  for (const auto& c : g.lower_covers(x)) {
    const Vector& cr = g.positive_roots()[c.root].coroot;
    out.push_back({c.target, {cr[0], cr[1]}});
  }
  return out;
}

/// Multiplication H^(2i) -> H^(2i+2) by lambda in the Schubert basis of I2(m).
inline DihedralStep dihedral_closed_forms(const FiniteCoxeterGroup& g, int i) {
  if (g.rank() != 2) throw InvalidInput("dihedral_closed_forms needs a rank-2 group");
  const int m = static_cast<int>(g.order() / 2);
  if (i < 1 || i >= m - 1) throw InvalidInput("index i must satisfy 1 <= i < m - 1");
  DihedralStep st;
  st.m = m;
  st.i = i;
  size_t src[2], dst[2];
  for (int a = 0; a < 2; ++a) {
    st.sources[a] = alternating_word(a, m - i);
    st.targets[a] = alternating_word(a, m - i - 1);
    src[a] = g.index_of_word(st.sources[a]);
    dst[a] = g.index_of_word(st.targets[a]);
  }
  for (int c = 0; c < 2; ++c)
    for (const auto& [t, f] : formal_chevalley(g, src[c])) {
      int r = t == dst[0] ? 0 : t == dst[1] ? 1 : -1;
      COXHODGE_CHECK(r >= 0, "cover outside the next degree");
      st.entries[r][c] = f;
    }
  QuadraticForm2 p = multiply(st.entries[0][0], st.entries[1][1]);
  QuadraticForm2 q = multiply(st.entries[0][1], st.entries[1][0]);
  st.determinant = {p.c11 - q.c11, p.c12 - q.c12, p.c22 - q.c22};
  const CoxeterSystem& sys = g.system();
  auto ctx = sys.field_ptr();
  FieldElement qi = qnum(i, m, *ctx), qi1 = qnum(i + 1, m, *ctx), q2 = qnum(2, m, *ctx);
  st.expected = {qi * qi1, q2 * qi * qi1, qi * qi1};
  return st;
}

inline DihedralStep dihedral_closed_forms(int m, int i) {
  return dihedral_closed_forms(*dihedral_group(m), i);
}

/// For m = 2k + 1: the degree-2k step with its target rows swapped, to be
/// compared with [[a1, [k+1]a1 + [k]a2], [[k]a1 + [k+1]a2, a2]].
struct OddMiddle {
  std::array<std::array<LinearForm2, 2>, 2> matrix, expected;
  bool matches() const {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        if (!(matrix[r][c] == expected[r][c])) return false;
    return true;
  }
};

inline OddMiddle odd_middle_matrix(int m) {
  if (m < 3 || m % 2 == 0) throw InvalidInput("odd_middle_matrix needs odd m >= 3");
  const int k = (m - 1) / 2;
  auto g = dihedral_group(m);
  DihedralStep st = dihedral_closed_forms(*g, k);
  OddMiddle o;
  o.matrix = {st.entries[1], st.entries[0]};
  auto ctx = g->system().field_ptr();
  FieldElement qk = qnum(k, m, *ctx), qk1 = qnum(k + 1, m, *ctx);
  o.expected[0][0] = {FieldElement(1), FieldElement()};
  o.expected[0][1] = {qk1, qk};
  o.expected[1][0] = {qk, qk1};
  o.expected[1][1] = {FieldElement(), FieldElement(1)};
  return o;
}

}  // namespace coxhodge
