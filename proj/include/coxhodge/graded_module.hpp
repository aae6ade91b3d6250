#pragma once

// Finite-dimensional graded modules over R with commuting degree-2 actions,
// degree-0 maps between them, and intertwiner spaces.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coxhodge/matrix.hpp"

namespace coxhodge {

/// Graded vector space in even degrees lowest, lowest+2, ... with one action
/// matrix per generator and degree step.  Piece k sits in degree
/// lowest + 2k; action(s, k) maps piece k to piece k+1.
class GradedModule {
 public:
  GradedModule() = default;
  GradedModule(int ngens, int lowest, std::vector<size_t> dims)
      : ngens_(ngens), lowest_(lowest), dims_(std::move(dims)) {
    if (lowest_ % 2 != 0) throw DegreeMismatch("graded modules live in even degrees");
    actions_.assign(ngens_, std::vector<Matrix>());
    for (int s = 0; s < ngens_; ++s)
      for (size_t k = 0; k + 1 < dims_.size(); ++k) actions_[s].emplace_back(dims_[k + 1], dims_[k]);
    offsets_.assign(dims_.size() + 1, 0);
    for (size_t k = 0; k < dims_.size(); ++k) offsets_[k + 1] = offsets_[k] + dims_[k];
    labels_.resize(offsets_.back());
  }

  int ngens() const { return ngens_; }
  size_t pieces() const { return dims_.size(); }
  int lowest_degree() const { return lowest_; }
  int highest_degree() const { return lowest_ + 2 * (static_cast<int>(dims_.size()) - 1); }
  int degree_of_piece(size_t k) const { return lowest_ + 2 * static_cast<int>(k); }
  const std::vector<size_t>& piece_dims() const { return dims_; }
  size_t piece_dim(size_t k) const { return dims_.at(k); }
  size_t total_dim() const { return offsets_.empty() ? 0 : offsets_.back(); }
  size_t offset(size_t k) const { return offsets_.at(k); }

  std::optional<size_t> piece_of_degree(int d) const {
    if (d < lowest_ || (d - lowest_) % 2 != 0) return std::nullopt;
    size_t k = static_cast<size_t>((d - lowest_) / 2);
    if (k >= dims_.size()) return std::nullopt;
    return k;
  }

  size_t dim(int d) const {
    auto k = piece_of_degree(d);
    return k ? dims_[*k] : 0;
  }

  const Matrix& action(int s, size_t k) const { return actions_.at(s).at(k); }
  void set_action(int s, size_t k, Matrix m) {
    if (m.rows() != dims_.at(k + 1) || m.cols() != dims_.at(k))
      throw InvalidInput("action block has wrong shape");
    actions_.at(s).at(k) = std::move(m);
  }

  /// Action of the degree-2 element sum_s lambda[s] a_s on piece k.
  Matrix linear_action(const Vector& lambda, size_t k) const {
    Matrix r(dims_.at(k + 1), dims_.at(k));
    for (int s = 0; s < ngens_; ++s)
      if (!lambda.at(s).is_zero()) r = r + lambda[s] * actions_[s][k];
    return r;
  }

  /// Map from degree d to degree d + 2e given by multiplication by lambda^e.
  Matrix linear_power(const Vector& lambda, int d, int e) const {
    auto k = piece_of_degree(d);
    if (!k) throw DegreeMismatch("degree not present in module");
    Matrix r = Matrix::identity(dims_[*k]);
    for (int j = 0; j < e; ++j) {
      if (*k + j + 1 >= dims_.size()) return Matrix(0, dims_[*k]);
      r = linear_action(lambda, *k + j) * r;
    }
    return r;
  }

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> l) {
    if (l.size() != total_dim()) throw InvalidInput("label count mismatch");
    labels_ = std::move(l);
  }

  /// Symmetric pairing of degree d with degree top - d.
  bool has_form() const { return has_form_; }
  int form_top() const { return form_top_; }
  /// Gram block between piece k and the complementary degree (rows: piece k).
  const Matrix& form_block(size_t k) const { return form_.at(k); }
  void set_form(int top, std::vector<Matrix> blocks) {
    if (blocks.size() != dims_.size()) throw InvalidInput("form block count mismatch");
    for (size_t k = 0; k < dims_.size(); ++k)
      if (blocks[k].rows() != dims_[k] || blocks[k].cols() != dim(top - degree_of_piece(k)))
        throw InvalidInput("form block has wrong shape");
    has_form_ = true;
    form_top_ = top;
    form_ = std::move(blocks);
  }
  void clear_form() {
    has_form_ = false;
    form_.clear();
  }

  bool actions_commute() const {
    for (int s = 0; s < ngens_; ++s)
      for (int t = s + 1; t < ngens_; ++t)
        for (size_t k = 0; k + 2 < dims_.size(); ++k)
          if (actions_[t][k + 1] * actions_[s][k] != actions_[s][k + 1] * actions_[t][k])
            return false;
    return true;
  }

  bool form_symmetric() const {
    if (!has_form_) return true;
    for (size_t k = 0; k < dims_.size(); ++k) {
      auto j = piece_of_degree(form_top_ - degree_of_piece(k));
      if (!j) continue;
      if (form_[k] != form_[*j].transpose()) return false;
    }
    return true;
  }

  /// Copy with every degree raised by `by` (M(-by) in the usual shift notation).
  GradedModule shifted(int by) const {
    GradedModule m = *this;
    m.lowest_ += by;
    if (m.has_form_) m.form_top_ += 2 * by;
    return m;
  }

  /// Drops zero pieces at both ends.
  GradedModule trimmed() const {
    size_t a = 0, b = dims_.size();
    while (a < b && dims_[a] == 0) ++a;
    while (b > a && dims_[b - 1] == 0) --b;
    if (a == 0 && b == dims_.size()) return *this;
    GradedModule m(ngens_, lowest_ + 2 * static_cast<int>(a),
                   std::vector<size_t>(dims_.begin() + a, dims_.begin() + b));
    for (int s = 0; s < ngens_; ++s)
      for (size_t k = a; k + 1 < b; ++k) m.actions_[s][k - a] = actions_[s][k];
    m.labels_.assign(labels_.begin() + offsets_[a], labels_.begin() + offsets_[b]);
    if (has_form_) {
      m.has_form_ = true;
      m.form_top_ = form_top_;
      m.form_.assign(form_.begin() + a, form_.begin() + b);
    }
    return m;
  }

  /// Poincare polynomial as a map degree -> dimension (nonzero entries only).
  std::map<int, size_t> graded_dimension() const {
    std::map<int, size_t> g;
    for (size_t k = 0; k < dims_.size(); ++k)
      if (dims_[k]) g[degree_of_piece(k)] = dims_[k];
    return g;
  }

 private:
  int ngens_ = 0;
  int lowest_ = 0;
  std::vector<size_t> dims_;
  std::vector<size_t> offsets_{0};
  std::vector<std::vector<Matrix>> actions_;
  std::vector<std::string> labels_;
  bool has_form_ = false;
  int form_top_ = 0;
  std::vector<Matrix> form_;
};

inline bool same_graded_dimension(const GradedModule& a, const GradedModule& b) {
  return a.graded_dimension() == b.graded_dimension();
}

/// Linear map raising degrees by `shift`, given blockwise by source degree.
/// Missing blocks are zero.
struct GradedMap {
  int shift = 0;
  std::map<int, Matrix> blocks;

  static GradedMap identity(const GradedModule& m) {
    GradedMap g;
    for (size_t k = 0; k < m.pieces(); ++k)
      g.blocks[m.degree_of_piece(k)] = Matrix::identity(m.piece_dim(k));
    return g;
  }

  /// Block at source degree d, as a (dim target) x (dim source) matrix.
  Matrix at(int d, const GradedModule& src, const GradedModule& dst) const {
    auto it = blocks.find(d);
    if (it != blocks.end()) return it->second;
    return Matrix(dst.dim(d + shift), src.dim(d));
  }

  bool is_zero() const {
    for (const auto& [d, m] : blocks)
      if (!m.is_zero()) return false;
    return true;
  }
};

/// g after f.
inline GradedMap compose(const GradedMap& g, const GradedMap& f) {
  GradedMap r;
  r.shift = f.shift + g.shift;
  for (const auto& [d, fm] : f.blocks) {
    auto it = g.blocks.find(d + f.shift);
    if (it == g.blocks.end()) continue;
    if (it->second.cols() != fm.rows()) throw InvalidInput("compose: dimension mismatch");
    r.blocks[d] = it->second * fm;
  }
  return r;
}

inline GradedMap combine(const std::vector<GradedMap>& maps, const std::vector<FieldElement>& c) {
  GradedMap r;
  if (!maps.empty()) r.shift = maps[0].shift;
  for (size_t i = 0; i < maps.size(); ++i) {
    if (c[i].is_zero()) continue;
    for (const auto& [d, m] : maps[i].blocks) {
      auto it = r.blocks.find(d);
      if (it == r.blocks.end())
        r.blocks[d] = c[i] * m;
      else
        it->second = it->second + c[i] * m;
    }
  }
  return r;
}

inline GradedMap operator-(const GradedMap& a, const GradedMap& b) {
  return combine({a, b}, {FieldElement(1), FieldElement(-1)});
}

inline bool maps_equal(const GradedMap& a, const GradedMap& b, const GradedModule& src,
                       const GradedModule& dst) {
  for (size_t k = 0; k < src.pieces(); ++k) {
    int d = src.degree_of_piece(k);
    if (a.at(d, src, dst) != b.at(d, src, dst)) return false;
  }
  return true;
}

/// Whether f: M -> N commutes with every generator action.
inline bool intertwines(const GradedMap& f, const GradedModule& m, const GradedModule& n) {
  for (int s = 0; s < m.ngens(); ++s)
    for (size_t k = 0; k < m.pieces(); ++k) {
      const int d = m.degree_of_piece(k);
      const size_t rows = n.dim(d + f.shift + 2), cols = m.piece_dim(k);
      Matrix lhs = k + 1 < m.pieces() ? f.at(d + 2, m, n) * m.action(s, k) : Matrix(rows, cols);
      auto kn = n.piece_of_degree(d + f.shift);
      Matrix rhs = (kn && *kn + 1 < n.pieces()) ? n.action(s, *kn) * f.at(d, m, n)
                                                : Matrix(rows, cols);
      if (lhs != rhs) return false;
    }
  return true;
}

inline FieldElement trace(const GradedMap& f) {
  FieldElement t;
  for (const auto& [d, m] : f.blocks)
    for (size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
  return t;
}

/// Basis of the space of degree-0 module maps M -> N.
///
/// Each piece of M gets a basis made of images a_s b of earlier basis vectors
/// where possible and of standard vectors otherwise ("generators").  A map is
/// determined by the images of the generators, which are the unknowns; every
/// product a_s b that was not itself chosen as a basis vector gives a linear
/// constraint.
inline std::vector<GradedMap> hom0(const GradedModule& m, const GradedModule& n) {
  const int ng = m.ngens();
  const size_t K = m.pieces();
  struct Piece {
    Matrix basis, basis_inv;
    std::vector<std::pair<int, size_t>> source;  // (s, index in previous piece); s = -1 for generators
    std::vector<Matrix> images;                   // F: dim N(d) x U
  };
  std::vector<Piece> pc(K);
  size_t unknowns = 0;
  std::vector<std::pair<size_t, size_t>> gen_slots;  // (piece, column) per generator
  for (size_t k = 0; k < K; ++k) {
    const size_t dim = m.piece_dim(k);
    SpanBuilder span(dim);
    std::vector<Vector> cols;
    if (k > 0)
      for (size_t i = 0; i < pc[k - 1].source.size() && span.size() < dim; ++i)
        for (int s = 0; s < ng && span.size() < dim; ++s) {
          Vector v = m.action(s, k - 1) * pc[k - 1].basis.column(i);
          if (span.add(v)) {
            cols.push_back(v);
            pc[k].source.push_back({s, i});
          }
        }
    for (size_t j = 0; j < dim && span.size() < dim; ++j) {
      Vector e(dim);
      e[j] = 1;
      if (span.add(e)) {
        cols.push_back(e);
        pc[k].source.push_back({-1, unknowns});
        gen_slots.push_back({k, cols.size() - 1});
        unknowns += n.dim(m.degree_of_piece(k));
      }
    }
    pc[k].basis = Matrix::from_columns(dim, cols);
    pc[k].basis_inv = dim ? *inverse(pc[k].basis) : Matrix();
  }
  if (unknowns == 0) return {};
  auto n_action = [&](int s, int d) -> Matrix {
    auto kn = n.piece_of_degree(d);
    if (kn && *kn + 1 < n.pieces()) return n.action(s, *kn);
    return Matrix(n.dim(d + 2), n.dim(d));
  };
  for (size_t k = 0; k < K; ++k) {
    const int d = m.degree_of_piece(k);
    const size_t nd = n.dim(d);
    for (const auto& [s, i] : pc[k].source) {
      if (s < 0) {
        Matrix f(nd, unknowns);
        for (size_t r = 0; r < nd; ++r) f(r, i + r) = 1;
        pc[k].images.push_back(std::move(f));
      } else {
        pc[k].images.push_back(n_action(s, d - 2) * pc[k - 1].images[i]);
      }
    }
  }
  std::vector<Vector> rows;
  for (size_t k = 1; k <= K; ++k) {
    const int d = m.degree_of_piece(k);
    const size_t nd = n.dim(d);
    std::vector<std::vector<bool>> used(ng, std::vector<bool>(pc[k - 1].source.size(), false));
    if (k < K)
      for (const auto& [s, i] : pc[k].source)
        if (s >= 0) used[s][i] = true;
    for (int s = 0; s < ng; ++s)
      for (size_t i = 0; i < pc[k - 1].source.size(); ++i) {
        if (used[s][i]) continue;
        Matrix c = -(n_action(s, d - 2) * pc[k - 1].images[i]);
        if (k < K) {
          Vector kappa = pc[k].basis_inv * (m.action(s, k - 1) * pc[k - 1].basis.column(i));
          for (size_t j = 0; j < kappa.size(); ++j)
            if (!kappa[j].is_zero()) c = c + kappa[j] * pc[k].images[j];
        }
        for (size_t r = 0; r < nd; ++r) {
          Vector row = c.row(r);
          bool nz = false;
          for (const auto& x : row) nz = nz || !x.is_zero();
          if (nz) rows.push_back(std::move(row));
        }
      }
  }
  Matrix cons(rows.size(), unknowns);
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t j = 0; j < unknowns; ++j) cons(r, j) = rows[r][j];
  Matrix sol = nullspace(cons);
  std::vector<GradedMap> out;
  for (size_t b = 0; b < sol.cols(); ++b) {
    Vector u = sol.column(b);
    GradedMap f;
    for (size_t k = 0; k < K; ++k) {
      const int d = m.degree_of_piece(k);
      const size_t nd = n.dim(d), md = m.piece_dim(k);
      if (nd == 0 || md == 0) continue;
      Matrix in_basis(nd, md);
      for (size_t j = 0; j < md; ++j) {
        Vector v = pc[k].images[j] * u;
        for (size_t r = 0; r < nd; ++r) in_basis(r, j) = v[r];
      }
      f.blocks[d] = in_basis * pc[k].basis_inv;
    }
    out.push_back(std::move(f));
  }
  return out;
}

inline bool invertible(const GradedMap& f, const GradedModule& m, const GradedModule& n) {
  for (size_t k = 0; k < m.pieces(); ++k) {
    const int d = m.degree_of_piece(k);
    if (m.piece_dim(k) != n.dim(d)) return false;
    if (m.piece_dim(k) == 0) continue;
    if (rank(f.at(d, m, n)) != m.piece_dim(k)) return false;
  }
  return true;
}

/// An invertible degree-0 intertwiner M -> N, if one exists.  Random integer
/// combinations of an intertwiner basis are tried first (fixed seed), then a
/// deterministic sequence of basis elements and partial sums.
inline std::optional<GradedMap> find_isomorphism(const GradedModule& m, const GradedModule& n) {
  if (!same_graded_dimension(m, n)) return std::nullopt;
  if (m.total_dim() == 0) return GradedMap{};
  std::vector<GradedMap> basis = hom0(m, n);
  if (basis.empty()) return std::nullopt;
  std::mt19937 rng(20240601u);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<FieldElement> c;
    for (size_t i = 0; i < basis.size(); ++i) c.emplace_back(coef(rng));
    GradedMap f = combine(basis, c);
    if (invertible(f, m, n)) return f;
  }
  for (size_t i = 0; i < basis.size(); ++i)
    if (invertible(basis[i], m, n)) return basis[i];
  std::vector<FieldElement> c(basis.size(), FieldElement());
  for (size_t i = 0; i < basis.size(); ++i) {
    c[i] = FieldElement(static_cast<long>(i + 1));
    GradedMap f = combine(basis, c);
    if (invertible(f, m, n)) return f;
  }
  return std::nullopt;
}

inline bool isomorphic(const GradedModule& m, const GradedModule& n) {
  return find_isomorphism(m, n).has_value();
}

}  // namespace coxhodge
