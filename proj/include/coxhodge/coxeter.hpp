#pragma once

// Coxeter systems, the geometric representation, and finite enumeration.

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coxhodge/matrix.hpp"

namespace coxhodge {

/// Word in the generators, 0-based.
using Word = std::vector<int>;

inline std::string word_string(const Word& w, bool one_based = true) {
  std::string s;
  for (int x : w) s += std::to_string(x + (one_based ? 1 : 0));
  return s;
}

/// Geometric representation of a Coxeter system.  Roots and coroots are both
/// written in simple coordinates; since the Cartan matrix is symmetric here,
/// one matrix per element describes the action on both.
class CoxeterSystem {
 public:
  explicit CoxeterSystem(CoxeterMatrix m, std::string name = "")
      : m_(std::move(m)), name_(std::move(name)), ctx_(field_context(m_)) {
    const size_t n = m_.size();
    if (n == 0) throw InvalidInput("Coxeter matrix must be nonempty");
    gram_ = Matrix(n, n);
    cartan_ = Matrix(n, n);
    for (size_t s = 0; s < n; ++s)
      for (size_t t = 0; t < n; ++t) {
        FieldElement b;
        if (s == t)
          b = 1;
        else if (m_[s][t] == kInfinity)
          b = -1;
        else
          b = -cos_fraction(1, m_[s][t], *ctx_);
        gram_(s, t) = b;
        cartan_(s, t) = FieldElement(2) * b;
      }
    for (size_t s = 0; s < n; ++s) {
      Matrix g = Matrix::identity(n);
      for (size_t t = 0; t < n; ++t) g(s, t) -= cartan_(s, t);
      gens_.push_back(g);
    }
    const Matrix id = Matrix::identity(n);
    for (size_t s = 0; s < n; ++s) {
      COXHODGE_CHECK(gens_[s] * gens_[s] == id, "generator matrix is not an involution");
      for (size_t t = s + 1; t < n; ++t) {
        if (m_[s][t] == kInfinity) continue;
        Matrix st = gens_[s] * gens_[t];
        COXHODGE_CHECK(power(st, static_cast<unsigned>(m_[s][t])) == id,
                       "braid relation fails on generator matrices");
      }
    }
  }

  /// Named type: A<n>, B<n>, D<n>, E6-8, F4, G2, H3, H4, I2:<m> (m may be inf).
  static CoxeterMatrix matrix_for_type(const std::string& desc);

  static std::shared_ptr<const CoxeterSystem> from_type(const std::string& desc) {
    return std::make_shared<const CoxeterSystem>(matrix_for_type(desc), desc);
  }

  const CoxeterMatrix& coxeter_matrix() const { return m_; }
  int rank() const { return static_cast<int>(m_.size()); }
  const std::string& name() const { return name_; }
  const FieldContext& field() const { return *ctx_; }
  const FieldContext* field_ptr() const { return ctx_.get(); }

  /// B[s][t] = -cos(pi/m_st).
  const Matrix& gram() const { return gram_; }
  /// C[s][t] = <alpha_t, alpha_s^vee>.
  const Matrix& cartan() const { return cartan_; }
  const FieldElement& cartan(int s, int t) const { return cartan_(s, t); }
  /// Matrix of the simple reflection s.
  const Matrix& generator(int s) const { return gens_.at(static_cast<size_t>(s)); }

  void check_word(const Word& w) const {
    for (int s : w)
      if (s < 0 || s >= rank())
        throw InvalidInput("generator index " + std::to_string(s + 1) + " out of range");
  }

  Matrix word_matrix(const Word& w) const {
    check_word(w);
    Matrix r = Matrix::identity(m_.size());
    for (int s : w) r = r * gens_[s];
    return r;
  }

  /// <lambda, beta^vee> for lambda, beta^vee in simple coordinates.
  FieldElement pair(const Vector& lambda, const Vector& coroot) const {
    FieldElement r;
    for (int u = 0; u < rank(); ++u) {
      if (coroot[u].is_zero()) continue;
      for (int t = 0; t < rank(); ++t)
        if (!lambda[t].is_zero()) r += coroot[u] * cartan_(u, t) * lambda[t];
    }
    return r;
  }

  static bool is_positive(const Vector& v) {
    bool some = false;
    for (const auto& x : v) {
      int s = sign(x);
      if (s < 0) return false;
      some = some || s > 0;
    }
    return some;
  }

  /// Reduced iff each prefix w sends the next simple root to a positive root.
  bool is_reduced(const Word& w) const {
    check_word(w);
    Matrix prefix = Matrix::identity(m_.size());
    for (int s : w) {
      if (!is_positive(prefix.column(s))) return false;
      prefix = prefix * gens_[s];
    }
    return true;
  }

 private:
  CoxeterMatrix m_;
  std::string name_;
  FieldContextPtr ctx_;
  Matrix gram_, cartan_;
  std::vector<Matrix> gens_;
};

using SystemPtr = std::shared_ptr<const CoxeterSystem>;

inline CoxeterMatrix CoxeterSystem::matrix_for_type(const std::string& desc_in) {
  std::string desc;
  for (char ch : desc_in)
    if (!std::isspace(static_cast<unsigned char>(ch))) desc += ch;
  auto blank = [](int n) {
    CoxeterMatrix m(n, std::vector<int>(n, 2));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
  };
  auto link = [](CoxeterMatrix& m, int a, int b, int v) { m[a][b] = m[b][a] = v; };
  auto bad = [&]() { return InvalidInput("unknown group type '" + desc_in + "'"); };
  if (desc.empty()) throw bad();
  const char family = static_cast<char>(std::toupper(static_cast<unsigned char>(desc[0])));
  if (family == 'I') {
    auto colon = desc.find(':');
    if (desc.size() < 4 || desc[1] != '2' || colon != 2) throw bad();
    std::string ms = desc.substr(3);
    int mv;
    if (ms == "inf" || ms == "infinity")
      mv = kInfinity;
    else {
      if (ms.empty() || !std::all_of(ms.begin(), ms.end(), ::isdigit) || ms.size() > 6) throw bad();
      mv = std::stoi(ms);
      if (mv < 2) throw InvalidInput("I2:<m> needs m >= 2");
    }
    CoxeterMatrix m = blank(2);
    link(m, 0, 1, mv);
    return m;
  }
  std::string rest = desc.substr(1);
  if (rest.empty() || !std::all_of(rest.begin(), rest.end(), ::isdigit) || rest.size() > 3) throw bad();
  const int n = std::stoi(rest);
  CoxeterMatrix m;
  switch (family) {
    case 'A':
      if (n < 1) throw bad();
      m = blank(n);
      for (int i = 0; i + 1 < n; ++i) link(m, i, i + 1, 3);
      return m;
    case 'B':
    case 'C':
      if (n < 2) throw bad();
      m = blank(n);
      for (int i = 0; i + 1 < n; ++i) link(m, i, i + 1, 3);
      link(m, n - 2, n - 1, 4);
      return m;
    case 'D':
      if (n < 4) throw bad();
      m = blank(n);
      for (int i = 0; i + 2 < n; ++i) link(m, i, i + 1, 3);
      link(m, n - 3, n - 1, 3);
      return m;
    case 'E':
      if (n < 6 || n > 8) throw bad();
      m = blank(n);
      link(m, 0, 2, 3);
      link(m, 1, 3, 3);
      for (int i = 2; i + 1 < n; ++i) link(m, i, i + 1, 3);
      return m;
    case 'F':
      if (n != 4) throw bad();
      m = blank(4);
      link(m, 0, 1, 3);
      link(m, 1, 2, 4);
      link(m, 2, 3, 3);
      return m;
    case 'G':
      if (n != 2) throw bad();
      m = blank(2);
      link(m, 0, 1, 6);
      return m;
    case 'H':
      if (n != 3 && n != 4) throw bad();
      m = blank(n);
      link(m, 0, 1, 5);
      for (int i = 1; i + 1 < n; ++i) link(m, i, i + 1, 3);
      return m;
    default:
      throw bad();
  }
}

struct MatrixHash {
  size_t operator()(const Matrix& m) const { return m.hash(); }
};

/// Positive root with its reflection and coroot (simple coordinates).
struct Root {
  Vector coords;
  size_t reflection = 0;  // element index
  Vector coroot;
};

struct Cover {
  size_t root = 0;    // index into positive_roots()
  size_t target = 0;  // element index of t x
};

/// Elements of W up to a length, found breadth-first, each with its
/// lexicographically smallest reduced word.  Stops early once a level is
/// empty.  Throws GroupInfinite when more than `bound` elements appear.
struct ElementList {
  std::vector<Matrix> elements;
  std::vector<Word> words;
  bool complete = false;  // the whole group was reached
};

inline ElementList elements_up_to_length(const CoxeterSystem& sys, int max_length,
                                         size_t bound) {
  ElementList out;
  std::unordered_map<Matrix, size_t, MatrixHash> seen;
  out.elements.push_back(Matrix::identity(sys.rank()));
  out.words.push_back({});
  seen.emplace(out.elements[0], 0);
  size_t level_begin = 0, level_end = 1;
  for (int len = 1; max_length < 0 || len <= max_length; ++len) {
    std::unordered_map<Matrix, Word, MatrixHash> fresh;
    for (size_t u = level_begin; u < level_end; ++u)
      for (int s = 0; s < sys.rank(); ++s) {
        Matrix v = sys.generator(s) * out.elements[u];
        if (seen.count(v)) continue;
        Word cand{s};
        cand.insert(cand.end(), out.words[u].begin(), out.words[u].end());
        auto it = fresh.find(v);
        if (it == fresh.end())
          fresh.emplace(std::move(v), std::move(cand));
        else if (cand < it->second)
          it->second = std::move(cand);
      }
    if (fresh.empty()) {
      out.complete = true;
      break;
    }
    if (out.elements.size() + fresh.size() > bound)
      throw GroupInfinite("enumeration exceeded bound of " + std::to_string(bound) +
                          " elements (group infinite or bound too small)");
    std::vector<std::pair<Word, Matrix>> level;
    for (auto& [m, w] : fresh) level.emplace_back(w, m);
    std::sort(level.begin(), level.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    level_begin = out.elements.size();
    for (auto& [w, m] : level) {
      seen.emplace(m, out.elements.size());
      out.elements.push_back(std::move(m));
      out.words.push_back(std::move(w));
    }
    level_end = out.elements.size();
  }
  return out;
}

/// A finite Coxeter group with its elements sorted by (length, word), roots,
/// reflections, and multiplication tables.  Immutable after construction.
class FiniteCoxeterGroup {
 public:
  explicit FiniteCoxeterGroup(SystemPtr sys, size_t bound = 100000) : sys_(std::move(sys)) {
    ElementList all = elements_up_to_length(*sys_, -1, bound);
    elements_ = std::move(all.elements);
    words_ = std::move(all.words);
    for (size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
    const int n = sys_->rank();
    left_.assign(n, std::vector<size_t>(elements_.size()));
    right_.assign(n, std::vector<size_t>(elements_.size()));
    for (int s = 0; s < n; ++s)
      for (size_t i = 0; i < elements_.size(); ++i) {
        left_[s][i] = index_.at(sys_->generator(s) * elements_[i]);
        right_[s][i] = index_.at(elements_[i] * sys_->generator(s));
      }
    inverse_.resize(elements_.size());
    for (size_t i = 0; i < elements_.size(); ++i) {
      size_t j = 0;
      for (auto it = words_[i].rbegin(); it != words_[i].rend(); ++it) j = right_[*it][j];
      inverse_[i] = j;
    }
    longest_ = elements_.size() - 1;
    build_roots();
  }

  const CoxeterSystem& system() const { return *sys_; }
  SystemPtr system_ptr() const { return sys_; }
  int rank() const { return sys_->rank(); }
  size_t order() const { return elements_.size(); }
  const Matrix& element(size_t i) const { return elements_.at(i); }
  const Word& word(size_t i) const { return words_.at(i); }
  int length(size_t i) const { return static_cast<int>(words_.at(i).size()); }
  size_t identity() const { return 0; }
  size_t longest() const { return longest_; }
  size_t inverse(size_t i) const { return inverse_.at(i); }
  size_t left_multiply(int s, size_t i) const { return left_.at(s).at(i); }
  size_t right_multiply(size_t i, int s) const { return right_.at(s).at(i); }

  size_t multiply(size_t a, size_t b) const {
    size_t r = b;
    const Word& w = words_.at(a);
    for (auto it = w.rbegin(); it != w.rend(); ++it) r = left_[*it][r];
    return r;
  }

  std::optional<size_t> find(const Matrix& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  size_t index_of_word(const Word& w) const {
    sys_->check_word(w);
    size_t r = 0;
    for (int s : w) r = right_[s][r];
    return r;
  }

  /// Number of positive roots sent to negative roots.
  int length_from_matrix(size_t i) const {
    int count = 0;
    for (const auto& r : roots_)
      if (!CoxeterSystem::is_positive(elements_[i] * r.coords)) ++count;
    return count;
  }

  const std::vector<Root>& positive_roots() const { return roots_; }

  /// Reflections t with l(tx) = l(x) - 1.
  std::vector<Cover> lower_covers(size_t x) const {
    std::vector<Cover> out;
    for (size_t r = 0; r < roots_.size(); ++r) {
      size_t tx = multiply(roots_[r].reflection, x);
      if (length(tx) + 1 == length(x)) out.push_back({r, tx});
    }
    return out;
  }

  /// All reduced words of element i, in lexicographic order.
  std::vector<Word> reduced_words(size_t i) const {
    std::vector<Word> out;
    if (length(i) == 0) return {Word{}};
    for (int s = 0; s < rank(); ++s) {
      size_t j = left_multiply(s, i);
      if (length(j) + 1 != length(i)) continue;
      for (auto& tail : reduced_words(j)) {
        Word w{s};
        w.insert(w.end(), tail.begin(), tail.end());
        out.push_back(std::move(w));
      }
    }
    return out;
  }

 private:
  void build_roots() {
    std::map<std::vector<std::string>, size_t> seen;
    std::vector<std::pair<size_t, Root>> found;
    for (size_t w = 0; w < elements_.size(); ++w)
      for (int s = 0; s < rank(); ++s) {
        Vector v = elements_[w].column(s);
        if (!CoxeterSystem::is_positive(v)) continue;
        std::vector<std::string> key;
        for (const auto& x : v) key.push_back(x.to_string());
        if (seen.count(key)) continue;
        size_t t = multiply(right_[s][w], inverse_[w]);
        seen.emplace(key, t);
        found.push_back({t, Root{v, t, v}});
      }
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [t, r] : found) roots_.push_back(std::move(r));
    COXHODGE_CHECK(roots_.size() == static_cast<size_t>(length(longest_)),
                   "number of positive roots differs from the length of w0");
  }

  SystemPtr sys_;
  std::vector<Matrix> elements_;
  std::vector<Word> words_;
  std::unordered_map<Matrix, size_t, MatrixHash> index_;
  std::vector<std::vector<size_t>> left_, right_;
  std::vector<size_t> inverse_;
  size_t longest_ = 0;
  std::vector<Root> roots_;
};

/// Positive roots s_{i1}...s_{i(k-1)}(a_{ik}) along a reduced word of w0.
inline std::vector<size_t> root_sequence(const FiniteCoxeterGroup& g) {
  const CoxeterSystem& sys = g.system();
  const Word& w0 = g.word(g.longest());
  std::vector<size_t> out;
  Matrix prefix = Matrix::identity(sys.rank());
  for (int s : w0) {
    Vector beta = prefix.column(s);
    size_t k = 0;
    while (k < g.positive_roots().size() && !(g.positive_roots()[k].coords == beta)) ++k;
    COXHODGE_CHECK(k < g.positive_roots().size(), "inversion root not found");
    out.push_back(k);
    prefix = prefix * sys.generator(s);
  }
  return out;
}

}  // namespace coxhodge
