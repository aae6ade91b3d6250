#pragma once

// Krull-Schmidt decomposition of graded modules through their degree-0
// endomorphism algebras.

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "coxhodge/graded_module.hpp"

namespace coxhodge {

/// Basis of End^0(M), the degree-0 module endomorphisms.
inline std::vector<GradedMap> graded_end0(const GradedModule& m) { return hom0(m, m); }

/// Dimension of End^0(M) modulo its radical.  The radical is the kernel of
/// the trace form (x, y) -> Tr_M(xy), which in characteristic 0 is a nil ideal
/// containing every nilpotent ideal.
inline size_t semisimple_dimension(const std::vector<GradedMap>& basis) {
  const size_t n = basis.size();
  Matrix t(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      t(i, j) = trace(compose(basis[i], basis[j]));
      t(j, i) = t(i, j);
    }
  return rank(t);
}

/// Basis of the radical of End^0(M), as coefficient vectors over `basis`.
inline Matrix radical_coordinates(const std::vector<GradedMap>& basis) {
  const size_t n = basis.size();
  Matrix t(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      t(i, j) = trace(compose(basis[i], basis[j]));
      t(j, i) = t(i, j);
    }
  return nullspace(t);
}

/// A summand of some ambient module, with the maps realizing it.  Degrees of
/// `module` are the ambient degrees minus `shift`.
struct Summand {
  GradedModule module;
  int shift = 0;
  GradedMap inclusion;   // module -> ambient
  GradedMap projection;  // ambient -> module
  std::string label;
};

struct Decomposition {
  std::vector<Summand> summands;
};

namespace detail {

struct Part {
  GradedModule module;  // same degrees as the ambient module
  GradedMap inclusion, projection;
};

inline Matrix block_power(const Matrix& y) {
  Matrix p = y;
  size_t e = 1;
  while (e < y.rows()) {
    p = p * p;
    e *= 2;
  }
  return p;
}

inline Part restrict_to(const GradedModule& m, const std::vector<Matrix>& sub,
                        const std::vector<Matrix>& proj) {
  std::vector<size_t> dims;
  for (const auto& b : sub) dims.push_back(b.cols());
  Part part;
  part.module = GradedModule(m.ngens(), m.lowest_degree(), dims);
  for (int s = 0; s < m.ngens(); ++s)
    for (size_t k = 0; k + 1 < m.pieces(); ++k) {
      Matrix image = m.action(s, k) * sub[k];
      Matrix a = proj[k + 1] * image;
      COXHODGE_CHECK(sub[k + 1] * a == image, "Fitting component is not a submodule");
      part.module.set_action(s, k, std::move(a));
    }
  if (m.has_form()) {
    std::vector<Matrix> g;
    for (size_t k = 0; k < m.pieces(); ++k) {
      auto j = m.piece_of_degree(m.form_top() - m.degree_of_piece(k));
      g.push_back(j ? sub[k].transpose() * m.form_block(k) * sub[*j]
                    : Matrix(dims[k], 0));
    }
    part.module.set_form(m.form_top(), std::move(g));
  }
  for (size_t k = 0; k < m.pieces(); ++k) {
    const int d = m.degree_of_piece(k);
    part.inclusion.blocks[d] = sub[k];
    part.projection.blocks[d] = proj[k];
  }
  return part;
}

/// Fitting decomposition M = ker y^N + im y^N for a degree-0 endomorphism y.
/// Empty when y is invertible or nilpotent (no splitting).
inline std::optional<std::pair<Part, Part>> fitting_split(const GradedModule& m,
                                                          const GradedMap& y) {
  std::vector<Matrix> ker, img;
  bool any_kernel = false, any_image = false;
  for (size_t k = 0; k < m.pieces(); ++k) {
    const size_t dim = m.piece_dim(k);
    if (dim == 0) {
      ker.emplace_back(0, 0);
      img.emplace_back(0, 0);
      continue;
    }
    Matrix p = block_power(y.at(m.degree_of_piece(k), m, m));
    ker.push_back(nullspace(p));
    img.push_back(column_space(p));
    any_kernel = any_kernel || ker.back().cols() > 0;
    any_image = any_image || img.back().cols() > 0;
  }
  if (!any_kernel || !any_image) return std::nullopt;
  std::vector<Matrix> pk, pi;
  for (size_t k = 0; k < m.pieces(); ++k) {
    const size_t dim = m.piece_dim(k);
    if (dim == 0) {
      pk.emplace_back(0, 0);
      pi.emplace_back(0, 0);
      continue;
    }
    auto inv = inverse(Matrix::hstack(ker[k], img[k]));
    COXHODGE_CHECK(inv.has_value(), "Fitting components are not complementary");
    pk.push_back(inv->block(0, 0, ker[k].cols(), dim));
    pi.push_back(inv->block(ker[k].cols(), 0, img[k].cols(), dim));
  }
  return std::make_pair(restrict_to(m, ker, pk), restrict_to(m, img, pi));
}

inline GradedMap scalar_map(const GradedModule& m, const FieldElement& c) {
  GradedMap g;
  for (size_t k = 0; k < m.pieces(); ++k)
    g.blocks[m.degree_of_piece(k)] = c * Matrix::identity(m.piece_dim(k));
  return g;
}

/// Searches End^0(M) for an element that is neither invertible nor nilpotent
/// and splits M along it.
inline std::optional<std::pair<Part, Part>> find_split(const GradedModule& m,
                                                       const std::vector<GradedMap>& basis) {
  auto attempt = [&](const GradedMap& y) { return fitting_split(m, y); };
  // Elements minus their scalar on a one-dimensional piece.
  for (size_t k = 0; k < m.pieces(); ++k) {
    if (m.piece_dim(k) != 1) continue;
    const int d = m.degree_of_piece(k);
    for (const auto& b : basis) {
      FieldElement c = b.at(d, m, m)(0, 0);
      if (auto r = attempt(b - scalar_map(m, c))) return r;
    }
  }
  for (const auto& b : basis)
    if (auto r = attempt(b)) return r;
  // Preimages of matrix units on a single piece.
  for (size_t k = 0; k < m.pieces(); ++k) {
    const size_t dim = m.piece_dim(k);
    if (dim < 2) continue;
    const int d = m.degree_of_piece(k);
    Matrix a(dim * dim, basis.size());
    for (size_t i = 0; i < basis.size(); ++i) {
      Matrix bk = basis[i].at(d, m, m);
      for (size_t r = 0; r < dim; ++r)
        for (size_t c = 0; c < dim; ++c) a(r * dim + c, i) = bk(r, c);
    }
    for (size_t j = 0; j < dim; ++j) {
      Matrix target(dim * dim, 1);
      target(j * dim + j, 0) = 1;
      if (auto x = solve(a, target))
        if (auto r = attempt(combine(basis, x->column(0)))) return r;
    }
    // Elements mapping the whole piece into the kernel or image of a basis
    // element.
    for (const auto& b : basis) {
      Matrix bk = b.at(d, m, m);
      for (const Matrix& w : {nullspace(bk), column_space(bk)}) {
        if (w.cols() == 0 || w.cols() == dim) continue;
        Matrix q = nullspace(w.transpose()).transpose();  // rows annihilate span(w)
        Matrix cons(q.rows() * dim, basis.size());
        for (size_t i = 0; i < basis.size(); ++i) {
          Matrix qb = q * basis[i].at(d, m, m);
          for (size_t r = 0; r < qb.rows(); ++r)
            for (size_t c = 0; c < dim; ++c) cons(r * dim + c, i) = qb(r, c);
        }
        Matrix sol = nullspace(cons);
        for (size_t j = 0; j < sol.cols(); ++j)
          if (auto r = attempt(combine(basis, sol.column(j)))) return r;
      }
    }
  }
  std::mt19937 rng(7u);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FieldElement> c;
    for (size_t i = 0; i < basis.size(); ++i) c.emplace_back(coef(rng));
    GradedMap x = combine(basis, c);
    for (size_t k = 0; k < m.pieces(); ++k) {
      if (m.piece_dim(k) != 1) continue;
      FieldElement v = x.at(m.degree_of_piece(k), m, m)(0, 0);
      if (auto r = attempt(x - scalar_map(m, v))) return r;
    }
  }
  return std::nullopt;
}

inline Summand normalize(Part p) {
  Summand s;
  GradedModule t = p.module.trimmed();
  const int low = t.total_dim() ? t.lowest_degree() : 0;
  s.shift = low;
  s.module = t.shifted(-low);
  for (auto& [d, b] : p.inclusion.blocks)
    if (b.cols() > 0) s.inclusion.blocks[d - low] = b;
  s.inclusion.shift = low;
  for (auto& [d, b] : p.projection.blocks)
    if (b.rows() > 0) s.projection.blocks[d] = b;
  s.projection.shift = -low;
  return s;
}

}  // namespace detail

/// Whether End^0(M) is local, so that M is indecomposable.
inline bool is_indecomposable(const GradedModule& m) {
  if (m.total_dim() == 0) return false;
  return semisimple_dimension(graded_end0(m)) == 1;
}

/// Complete decomposition into indecomposable summands.  Summand modules are
/// normalized to start in degree 0; `shift` records where they sit.
inline Decomposition decompose(const GradedModule& m) {
  Decomposition out;
  std::vector<detail::Part> queue;
  queue.push_back({m, GradedMap::identity(m), GradedMap::identity(m)});
  while (!queue.empty()) {
    detail::Part part = std::move(queue.back());
    queue.pop_back();
    if (part.module.total_dim() == 0) continue;
    std::vector<GradedMap> basis = graded_end0(part.module);
    if (semisimple_dimension(basis) == 1) {
      out.summands.push_back(detail::normalize(std::move(part)));
      continue;
    }
    auto split = detail::find_split(part.module, basis);
    if (!split) throw InternalError("no splitting element found in a non-local endomorphism algebra");
    for (detail::Part* piece : {&split->second, &split->first}) {
      detail::Part next;
      next.module = std::move(piece->module);
      next.inclusion = compose(part.inclusion, piece->inclusion);
      next.projection = compose(piece->projection, part.projection);
      queue.push_back(std::move(next));
    }
  }
  std::sort(out.summands.begin(), out.summands.end(), [](const Summand& a, const Summand& b) {
    if (a.shift != b.shift) return a.shift < b.shift;
    return a.module.total_dim() > b.module.total_dim();
  });
  return out;
}

/// The indecomposable summand containing the (one-dimensional) lowest piece.
/// Only the part containing that piece is split further.
inline Summand bottom_summand(const GradedModule& m) {
  if (m.pieces() == 0 || m.piece_dim(0) != 1)
    throw InvalidInput("bottom_summand needs a one-dimensional lowest piece");
  const int low = m.lowest_degree();
  detail::Part part{m, GradedMap::identity(m), GradedMap::identity(m)};
  while (true) {
    std::vector<GradedMap> basis = graded_end0(part.module);
    if (semisimple_dimension(basis) == 1) break;
    auto split = detail::find_split(part.module, basis);
    if (!split) throw InternalError("no splitting element found in a non-local endomorphism algebra");
    detail::Part* keep = split->first.module.dim(low) ? &split->first : &split->second;
    detail::Part next;
    next.module = std::move(keep->module);
    next.inclusion = compose(part.inclusion, keep->inclusion);
    next.projection = compose(keep->projection, part.projection);
    part = std::move(next);
  }
  return detail::normalize(std::move(part));
}

/// e = inclusion o projection for a summand, as an endomorphism of the ambient.
inline GradedMap idempotent(const Summand& s) { return compose(s.inclusion, s.projection); }

/// Checks that the summands give orthogonal idempotents summing to the
/// identity and that all maps are module maps.
inline bool verify_decomposition(const GradedModule& m, const Decomposition& dec) {
  size_t total = 0;
  GradedMap sum;
  std::vector<GradedMap> es;
  for (const auto& s : dec.summands) {
    total += s.module.total_dim();
    if (!intertwines(s.inclusion, s.module, m)) return false;
    if (!intertwines(s.projection, m, s.module)) return false;
    if (!maps_equal(compose(s.projection, s.inclusion), GradedMap::identity(s.module), s.module,
                    s.module))
      return false;
    es.push_back(idempotent(s));
  }
  if (total != m.total_dim()) return false;
  for (size_t i = 0; i < es.size(); ++i)
    for (size_t j = 0; j < es.size(); ++j) {
      GradedMap p = compose(es[i], es[j]);
      if (i == j ? !maps_equal(p, es[i], m, m) : !p.is_zero()) return false;
    }
  std::vector<FieldElement> ones(es.size(), FieldElement(1));
  return maps_equal(combine(es, ones), GradedMap::identity(m), m, m);
}

}  // namespace coxhodge
