#pragma once

// Bott-Samelson modules R (x)_{R^{s1}} ... (x)_{R^{sm}} R (x)_R k, their
// intersection forms, and the indecomposable summands D_w.

#include <map>
#include <memory>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coxhodge/coxeter.hpp"
#include "coxhodge/decompose.hpp"
#include "coxhodge/polynomial.hpp"

namespace coxhodge {

/// The one-dimensional module in degree 0 on which every a_s acts by zero,
/// with the pairing <1, 1> = 1.
inline GradedModule trivial_module(int ngens) {
  GradedModule m(ngens, 0, {1});
  m.set_labels({""});
  m.set_form(0, {Matrix::identity(1)});
  return m;
}

/// R (x)_{R^s} N for a graded R-module N.
///
/// In degree d the basis is 1 (x) N^d followed by a_s (x) N^{d-2}.  Writing
/// a_t = a + b a_s with a in R^s and b = C[s][t] / 2, the action of a_t is
///   1 (x) n    ->  1 (x) (a n) + a_s (x) (b n)
///   a_s (x) n  ->  1 (x) (b a_s^2 n) + a_s (x) (a n).
/// A pairing on N of top degree T induces the pairing
/// <1 (x) n, a_s (x) n'> = <n, n'> of top degree T + 2.
inline GradedModule theta(const CoxeterSystem& sys, const GradedModule& n, int s) {
  if (s < 0 || s >= sys.rank()) throw InvalidInput("generator index out of range");
  const int ng = sys.rank();
  const size_t P = n.pieces();
  std::vector<size_t> dims(P + 1, 0);
  for (size_t k = 0; k <= P; ++k)
    dims[k] = (k < P ? n.piece_dim(k) : 0) + (k >= 1 ? n.piece_dim(k - 1) : 0);
  GradedModule m(ng, n.lowest_degree(), dims);

  auto act = [&](int t, size_t k) -> const Matrix& { return n.action(t, k); };
  // a_s^2 on N, from piece k to piece k + 2.
  std::vector<Matrix> sq;
  for (size_t k = 0; k + 2 < P; ++k) sq.push_back(act(s, k + 1) * act(s, k));
  for (int t = 0; t < ng; ++t) {
    const FieldElement b = sys.cartan(s, t) * FieldElement(1, 2);
    // a = a_t - b a_s on N, per piece.
    std::vector<Matrix> la;
    for (size_t k = 0; k + 1 < P; ++k)
      la.push_back(t == s ? Matrix(n.piece_dim(k + 1), n.piece_dim(k))
                          : act(t, k) - b * act(s, k));
    for (size_t k = 0; k < P; ++k) {
      // piece k of M -> piece k + 1 of M
      const size_t top_src = n.piece_dim(k);                      // 1 (x) N^k
      const size_t bot_src = k >= 1 ? n.piece_dim(k - 1) : 0;     // a_s (x) N^{k-1}
      const size_t top_dst = k + 1 < P ? n.piece_dim(k + 1) : 0;  // 1 (x) N^{k+1}
      const size_t bot_dst = n.piece_dim(k);                      // a_s (x) N^k
      Matrix blk(top_dst + bot_dst, top_src + bot_src);
      if (top_dst && top_src) blk.set_block(0, 0, la[k]);
      if (!b.is_zero()) {
        for (size_t i = 0; i < bot_dst; ++i) blk(top_dst + i, i) = b;
        if (top_dst && bot_src && k + 1 < P) blk.set_block(0, top_src, b * sq[k - 1]);
      }
      if (bot_dst && bot_src) blk.set_block(top_dst, top_src, la[k - 1]);
      m.set_action(t, k, std::move(blk));
    }
  }
  std::vector<std::string> labels;
  for (size_t k = 0; k <= P; ++k) {
    if (k < P)
      for (size_t i = 0; i < n.piece_dim(k); ++i) labels.push_back("0" + n.labels()[n.offset(k) + i]);
    if (k >= 1)
      for (size_t i = 0; i < n.piece_dim(k - 1); ++i)
        labels.push_back("1" + n.labels()[n.offset(k - 1) + i]);
  }
  m.set_labels(std::move(labels));
  if (n.has_form()) {
    const int top = n.form_top() + 2;
    std::vector<Matrix> g;
    for (size_t k = 0; k <= P; ++k) {
      const int d = m.degree_of_piece(k);
      const int e = top - d;  // complementary degree in M
      Matrix blk(dims[k], m.dim(e));
      // rows: [N^d ; N^{d-2}], cols: [N^e ; N^{e-2}]
      const size_t rows_top = n.dim(d), cols_top = n.dim(e);
      if (rows_top && n.dim(e - 2)) {
        auto kd = n.piece_of_degree(d);
        blk.set_block(0, cols_top, n.form_block(*kd));
      }
      if (n.dim(d - 2) && cols_top) {
        auto kd = n.piece_of_degree(d - 2);
        blk.set_block(rows_top, 0, n.form_block(*kd));
      }
      g.push_back(std::move(blk));
    }
    m.set_form(top, std::move(g));
  }
  return m;
}

/// Bott-Samelson module of a word, with its intersection form.  Basis vectors
/// are labelled by the 0/1 string epsilon of a_{s1}^e1 (x) ... (x) a_{sm}^em (x) 1.
inline GradedModule bs_module(const CoxeterSystem& sys, const Word& word) {
  sys.check_word(word);
  GradedModule m = trivial_module(sys.rank());
  for (auto it = word.rbegin(); it != word.rend(); ++it) m = theta(sys, m, *it);
  return m;
}

/// Full Gram matrix of a module's pairing in the global basis order.
inline Matrix gram_matrix(const GradedModule& m) {
  if (!m.has_form()) throw InvalidInput("module carries no pairing");
  Matrix g(m.total_dim(), m.total_dim());
  for (size_t k = 0; k < m.pieces(); ++k) {
    auto j = m.piece_of_degree(m.form_top() - m.degree_of_piece(k));
    if (!j) continue;
    g.set_block(m.offset(k), m.offset(*j), m.form_block(k));
  }
  return g;
}

/// Intersection form of bs_module(word): the Gram matrix in the global basis.
inline Matrix intersection_form(const GradedModule& bs) { return gram_matrix(bs); }

/// Index of each epsilon label in a module's global basis.
inline std::map<std::string, size_t> label_index(const GradedModule& m) {
  std::map<std::string, size_t> idx;
  for (size_t i = 0; i < m.labels().size(); ++i) idx[m.labels()[i]] = i;
  return idx;
}

/// Rewrites a pure tensor p1 (x) ... (x) pm (x) 1 in the epsilon basis by
/// splitting each slot as p = (p + s p)/2 + a_s * (d_s p)/2 and pushing the
/// invariant factor to the right.  Independent of the block recursion used by
/// bs_module; the result maps epsilon labels to coefficients.
inline std::map<std::string, FieldElement> normalize_tensor(const CoxeterSystem& sys,
                                                            const Word& word,
                                                            const std::vector<Polynomial>& slots) {
  if (slots.size() != word.size()) throw InvalidInput("one polynomial per tensor slot expected");
  std::map<std::string, FieldElement> out;
  const FieldElement half(1, 2);
  std::function<void(size_t, const Polynomial&, std::string)> rec =
      [&](size_t i, const Polynomial& carry, std::string eps) {
        if (carry.is_zero()) return;
        if (i == word.size()) {
          FieldElement c = carry.constant_term();
          if (!c.is_zero()) out[eps] += c;
          return;
        }
        const int s = word[i];
        Polynomial a = half * (carry + carry.reflect(sys, s));
        Polynomial b = half * demazure(sys, s, carry);
        if (i + 1 < word.size()) {
          rec(i + 1, a * slots[i + 1], eps + "0");
          rec(i + 1, b * slots[i + 1], eps + "1");
        } else {
          rec(i + 1, a, eps + "0");
          rec(i + 1, b, eps + "1");
        }
      };
  if (!word.empty()) {
    rec(0, slots[0], "");
  } else {
    out[""] = FieldElement(1);
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

/// Slot polynomials a_{s_i}^{eps_i} of a basis vector.
inline std::vector<Polynomial> basis_slots(const CoxeterSystem& sys, const Word& word,
                                           const std::string& eps) {
  std::vector<Polynomial> slots;
  for (size_t i = 0; i < word.size(); ++i)
    slots.push_back(eps[i] == '1' ? Polynomial::variable(sys.rank(), word[i])
                                  : Polynomial::constant(sys.rank(), 1));
  return slots;
}

namespace detail {

/// The map R (x)_{R^s} f induced by f: src -> dst, in the bases of theta().
inline GradedMap theta_lift(const GradedMap& f, const GradedModule& src, const GradedModule& dst) {
  GradedMap r;
  r.shift = f.shift;
  for (int d = src.lowest_degree(); d <= src.highest_degree() + 2; d += 2) {
    Matrix top = f.at(d, src, dst), bot = f.at(d - 2, src, dst);
    Matrix blk(top.rows() + bot.rows(), top.cols() + bot.cols());
    blk.set_block(0, 0, top);
    blk.set_block(top.rows(), top.cols(), bot);
    r.blocks[d] = std::move(blk);
  }
  return r;
}

}  // namespace detail

/// Decomposition of bs_module(word) computed letter by letter: each summand
/// of the suffix module is tensored with the next letter and decomposed again.
/// Inclusions and projections are composed into coordinates of the full
/// Bott-Samelson module.
inline Decomposition decompose_bott_samelson(const CoxeterSystem& sys, const Word& word) {
  sys.check_word(word);
  Decomposition dec;
  {
    Summand base;
    base.module = trivial_module(sys.rank());
    base.inclusion = GradedMap::identity(base.module);
    base.projection = GradedMap::identity(base.module);
    dec.summands.push_back(std::move(base));
  }
  GradedModule ambient = trivial_module(sys.rank());
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const int s = *it;
    GradedModule next_ambient = theta(sys, ambient, s);
    Decomposition next;
    for (const auto& sm : dec.summands) {
      GradedModule t = theta(sys, sm.module, s);
      GradedMap ti = detail::theta_lift(sm.inclusion, sm.module, ambient);
      GradedMap tp = detail::theta_lift(sm.projection, ambient, sm.module);
      Decomposition inner = decompose(t);
      for (auto& piece : inner.summands) {
        Summand out;
        out.module = std::move(piece.module);
        out.shift = sm.shift + piece.shift;
        out.inclusion = compose(ti, piece.inclusion);
        out.projection = compose(piece.projection, tp);
        next.summands.push_back(std::move(out));
      }
    }
    dec = std::move(next);
    ambient = std::move(next_ambient);
  }
  std::stable_sort(dec.summands.begin(), dec.summands.end(), [](const Summand& a, const Summand& b) {
    if (a.shift != b.shift) return a.shift < b.shift;
    return a.module.total_dim() > b.module.total_dim();
  });
  return dec;
}

/// D_w for a reduced word, with the intersection form restricted along its
/// inclusion into the Bott-Samelson module.
struct SoergelModule {
  Word word;
  GradedModule module;   // carries the restricted pairing, top degree 2 l(w)
  GradedMap inclusion;   // into bs_module(word)
  GradedMap projection;  // from bs_module(word)
};

/// Builds D_w as a chain: D_{s y} is the summand of R (x)_{R^s} D_y containing
/// the degree-0 line.
inline SoergelModule soergel_module(const CoxeterSystem& sys, const Word& word) {
  sys.check_word(word);
  if (!sys.is_reduced(word)) throw NotReduced("word " + word_string(word) + " is not reduced");
  SoergelModule out;
  out.word = word;
  out.module = trivial_module(sys.rank());
  out.inclusion = GradedMap::identity(out.module);
  out.projection = GradedMap::identity(out.module);
  GradedModule ambient = trivial_module(sys.rank());
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const int s = *it;
    GradedModule t = theta(sys, out.module, s);
    GradedModule next_ambient = theta(sys, ambient, s);
    GradedMap ti = detail::theta_lift(out.inclusion, out.module, ambient);
    GradedMap tp = detail::theta_lift(out.projection, ambient, out.module);
    Summand piece = bottom_summand(t);
    COXHODGE_CHECK(piece.shift == 0, "bottom summand must start in degree 0");
    out.inclusion = compose(ti, piece.inclusion);
    out.projection = compose(piece.projection, tp);
    out.module = std::move(piece.module);
    ambient = std::move(next_ambient);
  }
  return out;
}

inline std::string shift_suffix(int shift) {
  return shift == 0 ? "" : "(" + std::to_string(-shift) + ")";
}

/// Names summands D_z(-k) by comparing with D_z for reduced words of the
/// matching length: graded dimensions first, then isomorphic().
class SoergelCatalog {
 public:
  explicit SoergelCatalog(SystemPtr sys, size_t bound = 100000) : sys_(std::move(sys)), bound_(bound) {}

  /// "D_{121}" for the element with lex-minimal reduced word 121, "D_{id}"
  /// for the identity; nullopt when nothing matches.
  std::optional<std::string> identify(const GradedModule& m) {
    if (m.total_dim() == 0) return std::nullopt;
    if (m.lowest_degree() != 0 || m.piece_dim(0) != 1) return std::nullopt;
    const int len = m.highest_degree() / 2;
    for (const auto& w : words_of_length(len)) {
      const SoergelModule& d = get(w);
      if (!same_graded_dimension(d.module, m)) continue;
      if (isomorphic(d.module, m)) return "D_{" + (w.empty() ? std::string("id") : word_string(w)) + "}";
    }
    return std::nullopt;
  }

  const SoergelModule& get(const Word& w) {
    auto it = cache_.find(w);
    if (it == cache_.end()) it = cache_.emplace(w, soergel_module(*sys_, w)).first;
    return it->second;
  }

  void label(Decomposition& dec) {
    for (auto& s : dec.summands) {
      auto name = identify(s.module);
      s.label = (name ? *name : std::string("?")) + shift_suffix(s.shift);
    }
  }

 private:
  const std::vector<Word>& words_of_length(int len) {
    if (!levels_ || static_cast<int>(levels_by_length_.size()) <= len) {
      ElementList e = elements_up_to_length(*sys_, len, bound_);
      levels_by_length_.assign(len + 1, {});
      for (auto& w : e.words)
        if (static_cast<int>(w.size()) <= len) levels_by_length_[w.size()].push_back(w);
      levels_ = true;
    }
    return levels_by_length_[len];
  }

  SystemPtr sys_;
  size_t bound_;
  bool levels_ = false;
  std::vector<std::vector<Word>> levels_by_length_;
  std::map<Word, SoergelModule> cache_;
};

inline std::string describe(const Decomposition& dec) {
  std::string s;
  for (size_t i = 0; i < dec.summands.size(); ++i) {
    if (i) s += " ⊕ ";
    s += dec.summands[i].label.empty() ? "?" : dec.summands[i].label;
  }
  return s;
}

}  // namespace coxhodge
