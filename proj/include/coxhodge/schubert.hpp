#pragma once

// Schubert calculus in the coinvariant algebra of a finite Coxeter group.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "coxhodge/coxeter.hpp"
#include "coxhodge/graded_module.hpp"
#include "coxhodge/polynomial.hpp"

namespace coxhodge {

/// Classes Y_x = d_x(pi) / |W| with pi the product of the positive roots, and
/// the pairing <f, g> = constant term of d_{w0}(f g).  With these constants
/// <Y_x, Y_z> = 1 exactly when z = x w0.
class SchubertCalculus {
 public:
  explicit SchubertCalculus(std::shared_ptr<const FiniteCoxeterGroup> group)
      : g_(std::move(group)) {
    const int n = g_->rank();
    pi_ = Polynomial::constant(n, 1);
    for (const auto& r : g_->positive_roots()) pi_ = pi_ * Polynomial::linear(r.coords);
    const FieldElement inv_order = FieldElement(Rational(1, static_cast<long>(g_->order())));
    for (size_t x = 0; x < g_->order(); ++x)
      classes_.push_back(inv_order * demazure_word(g_->system(), g_->word(x), pi_));
    const int top = g_->length(g_->longest());
    by_piece_.assign(top + 1, {});
    pos_.resize(g_->order());
    for (size_t x = 0; x < g_->order(); ++x) {
      size_t k = static_cast<size_t>(top - g_->length(x));
      pos_[x] = {k, by_piece_[k].size()};
      by_piece_[k].push_back(x);
    }
  }

  const FiniteCoxeterGroup& group() const { return *g_; }
  const CoxeterSystem& system() const { return g_->system(); }
  const Polynomial& pi() const { return pi_; }
  /// Y_x; degree 2(l(w0) - l(x)).
  const Polynomial& Y(size_t x) const { return classes_.at(x); }
  int degree(size_t x) const { return 2 * (g_->length(g_->longest()) - g_->length(x)); }

  FieldElement pairing(const Polynomial& f, const Polynomial& g) const {
    const int top = g_->length(g_->longest());
    const Word& w0 = g_->word(g_->longest());
    FieldElement r;
    for (int i = 0; i <= top; ++i) {
      Polynomial fi = f.homogeneous_part(i);
      if (fi.is_zero()) continue;
      Polynomial gj = g.homogeneous_part(top - i);
      if (gj.is_zero()) continue;
      r += demazure_word(system(), w0, fi * gj).constant_term();
    }
    return r;
  }

  /// Coefficients c_x with f = sum c_x Y_x in the coinvariant algebra.
  std::vector<FieldElement> expand(const Polynomial& f) const {
    std::vector<FieldElement> c(g_->order());
    for (size_t x = 0; x < g_->order(); ++x) {
      Polynomial fx = f.homogeneous_part(degree(x) / 2);
      if (fx.is_zero()) continue;
      c[x] = pairing(fx, Y(g_->multiply(x, g_->longest())));
    }
    return c;
  }

  /// lambda Y_x = sum over lower covers t x of <lambda, a_t^vee> Y_{tx}.
  std::vector<std::pair<size_t, FieldElement>> chevalley(const Polynomial& lambda, size_t x) const {
    if (lambda.is_zero()) return {};
    Vector coords = lambda.linear_coordinates();
    return chevalley(coords, x);
  }

  std::vector<std::pair<size_t, FieldElement>> chevalley(const Vector& lambda, size_t x) const {
    std::vector<std::pair<size_t, FieldElement>> out;
    for (const auto& c : g_->lower_covers(x)) {
      FieldElement v = system().pair(lambda, g_->positive_roots()[c.root].coroot);
      if (!v.is_zero()) out.emplace_back(c.target, v);
    }
    return out;
  }

  /// Position of Y_x in the graded basis of coinvariant_model().
  std::pair<size_t, size_t> model_position(size_t x) const {
    return pos_.at(x);
  }

  /// The coinvariant algebra as a graded module on the Schubert basis, with
  /// actions from the Chevalley formula and the pairing <Y_x, Y_{x w0}> = 1.
  GradedModule coinvariant_model() const {
    const int top = g_->length(g_->longest());
    std::vector<size_t> dims;
    for (const auto& p : by_piece_) dims.push_back(p.size());
    GradedModule m(g_->rank(), 0, dims);
    for (int s = 0; s < g_->rank(); ++s) {
      Vector e(g_->rank());
      e[s] = 1;
      for (size_t k = 0; k + 1 < dims.size(); ++k) {
        Matrix a(dims[k + 1], dims[k]);
        for (size_t j = 0; j < dims[k]; ++j)
          for (const auto& [tx, v] : chevalley(e, by_piece_[k][j])) a(pos_[tx].second, j) = v;
        m.set_action(s, k, std::move(a));
      }
    }
    std::vector<std::string> labels;
    for (const auto& p : by_piece_)
      for (size_t x : p) labels.push_back("Y_{" + (g_->length(x) ? word_string(g_->word(x)) : "id") + "}");
    m.set_labels(std::move(labels));
    std::vector<Matrix> form;
    for (size_t k = 0; k < dims.size(); ++k) {
      const size_t kc = static_cast<size_t>(top) - k;
      Matrix b(dims[k], dims[kc]);
      for (size_t j = 0; j < dims[k]; ++j) {
        size_t z = g_->multiply(by_piece_[k][j], g_->longest());
        b(j, pos_[z].second) = 1;
      }
      form.push_back(std::move(b));
    }
    m.set_form(2 * top, std::move(form));
    return m;
  }

 private:
  std::shared_ptr<const FiniteCoxeterGroup> g_;
  Polynomial pi_;
  std::vector<Polynomial> classes_;
  std::vector<std::vector<size_t>> by_piece_;
  std::vector<std::pair<size_t, size_t>> pos_;
};

}  // namespace coxhodge
