#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "coxhodge/coxeter.hpp"

using namespace coxhodge;

namespace {

std::shared_ptr<const FiniteCoxeterGroup> group(const std::string& type) {
  return std::make_shared<const FiniteCoxeterGroup>(CoxeterSystem::from_type(type));
}

Vector vec(std::initializer_list<FieldElement> xs) { return Vector(xs); }

}  // namespace

TEST(CoxeterSystem, CartanMatrices) {
  auto i5 = CoxeterSystem::from_type("I2:5");
  FieldElement phi = qnum(2, 5, i5->field());
  EXPECT_EQ(i5->cartan(0, 0), FieldElement(2));
  EXPECT_EQ(i5->cartan(0, 1), -phi);
  EXPECT_EQ(i5->cartan(1, 0), -phi);
  auto a2 = CoxeterSystem::from_type("A2");
  EXPECT_EQ(a2->cartan(0, 1), FieldElement(-1));
  EXPECT_TRUE(a2->cartan(0, 1).is_rational());
  auto inf = CoxeterSystem::from_type("I2:inf");
  EXPECT_EQ(inf->cartan(0, 1), FieldElement(-2));
  for (auto t : {"A3", "B3", "H3", "F4", "D4"}) {
    auto s = CoxeterSystem::from_type(t);
    for (int i = 0; i < s->rank(); ++i) {
      EXPECT_EQ(s->gram()(i, i), FieldElement(1));
      for (int j = 0; j < s->rank(); ++j) EXPECT_EQ(s->gram()(i, j), s->gram()(j, i));
    }
  }
}

TEST(CoxeterSystem, GramMatchesCosines) {
  auto h4 = CoxeterSystem::from_type("H4");
  auto m = CoxeterSystem::matrix_for_type("H4");
  for (int s = 0; s < 4; ++s)
    for (int t = 0; t < 4; ++t) EXPECT_NEAR(h4->gram()(s, t).approx(), -std::cos(M_PI / m[s][t]), 1e-12);
}

TEST(CoxeterSystem, CommutingGeneratorsWhenAllEntriesAreTwo) {
  CoxeterSystem sys({{1, 2, 2}, {2, 1, 2}, {2, 2, 1}});
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 3; ++t) {
      EXPECT_EQ(sys.generator(s) * sys.generator(t), sys.generator(t) * sys.generator(s));
      if (s != t) EXPECT_TRUE(sys.gram()(s, t).is_zero());
    }
}

TEST(CoxeterSystem, InvolutionsAndBraidRelations) {
  for (auto t : {"A4", "B3", "H3", "I2:7", "G2", "E6"}) {
    auto sys = CoxeterSystem::from_type(t);
    auto m = CoxeterSystem::matrix_for_type(t);
    const Matrix id = Matrix::identity(sys->rank());
    for (int s = 0; s < sys->rank(); ++s) {
      EXPECT_EQ(sys->generator(s) * sys->generator(s), id);
      for (int u = s + 1; u < sys->rank(); ++u)
        EXPECT_EQ(power(sys->generator(s) * sys->generator(u), m[s][u]), id) << t;
    }
  }
}

TEST(CoxeterSystem, RejectsBadDescriptors) {
  for (auto t : {"", "X3", "A0", "B1", "D3", "E9", "F3", "H5", "I2:1", "I2:x", "I3:5", "A3x"})
    EXPECT_THROW(CoxeterSystem::from_type(t), InvalidInput) << t;
}

TEST(Enumeration, GroupOrders) {
  std::vector<std::pair<std::string, size_t>> cases = {
      {"A1", 2}, {"A2", 6}, {"A3", 24}, {"B2", 8}, {"B3", 48}, {"G2", 12},
      {"H3", 120}, {"I2:5", 10}, {"I2:12", 24}, {"D4", 192}, {"F4", 1152}};
  for (auto& [t, n] : cases) {
    auto g = group(t);
    EXPECT_EQ(g->order(), n) << t;
    EXPECT_EQ(static_cast<size_t>(g->length(g->longest())), g->positive_roots().size()) << t;
  }
  auto i5 = group("I2:5");
  EXPECT_EQ(i5->length(i5->longest()), 5);
  EXPECT_EQ(i5->word(i5->longest()), (Word{0, 1, 0, 1, 0}));
}

TEST(Enumeration, InfiniteGroupsHitTheBound) {
  EXPECT_THROW(FiniteCoxeterGroup(CoxeterSystem::from_type("I2:inf"), 50), GroupInfinite);
  auto affine = std::make_shared<const CoxeterSystem>(CoxeterMatrix{{1, 3, 3}, {3, 1, 3}, {3, 3, 1}});
  EXPECT_THROW(FiniteCoxeterGroup(affine, 1000), GroupInfinite);
  ElementList part = elements_up_to_length(*affine, 3, 1000);
  EXPECT_FALSE(part.complete);
  // affine A2: 1, 3, 6, 9 elements of lengths 0..3
  EXPECT_EQ(part.elements.size(), 19u);
}

TEST(Enumeration, LengthsAgreeWithInversions) {
  for (auto t : {"A3", "B3", "H3"}) {
    auto g = group(t);
    for (size_t x = 0; x < g->order(); ++x) {
      EXPECT_EQ(g->length(x), g->length_from_matrix(x));
      EXPECT_EQ(g->element(x), g->system().word_matrix(g->word(x)));
      EXPECT_TRUE(g->system().is_reduced(g->word(x)));
    }
  }
}

TEST(Enumeration, ReducedWords) {
  auto a2 = group("A2");
  EXPECT_EQ(a2->reduced_words(a2->longest()), (std::vector<Word>{{0, 1, 0}, {1, 0, 1}}));
  auto a3 = group("A3");
  EXPECT_EQ(a3->reduced_words(a3->longest()).size(), 16u);
  EXPECT_FALSE(a2->system().is_reduced({0, 0}));
  EXPECT_FALSE(a2->system().is_reduced({0, 1, 0, 1}));
  EXPECT_TRUE(a2->system().is_reduced({}));
}

TEST(Enumeration, MultiplicationTables) {
  auto g = group("B3");
  for (size_t x = 0; x < g->order(); x += 5)
    for (size_t y = 0; y < g->order(); y += 7) {
      EXPECT_EQ(g->element(g->multiply(x, y)), g->element(x) * g->element(y));
      EXPECT_EQ(g->multiply(x, g->inverse(x)), g->identity());
    }
  EXPECT_EQ(g->longest(), g->inverse(g->longest()));
}

TEST(Roots, CountsAndReflections) {
  for (auto t : {"A3", "B3", "H3", "I2:7"}) {
    auto g = group(t);
    std::set<size_t> refl;
    for (const auto& r : g->positive_roots()) {
      EXPECT_TRUE(CoxeterSystem::is_positive(r.coords));
      // t(a_t) = -a_t
      Vector img = g->element(r.reflection) * r.coords;
      for (size_t i = 0; i < img.size(); ++i) EXPECT_EQ(img[i], -r.coords[i]);
      EXPECT_EQ(g->multiply(r.reflection, r.reflection), g->identity());
      refl.insert(r.reflection);
    }
    EXPECT_EQ(refl.size(), g->positive_roots().size());
  }
  EXPECT_EQ(group("I2:5")->positive_roots().size(), 5u);
  EXPECT_EQ(group("H3")->positive_roots().size(), 15u);
}

TEST(Roots, DihedralClosedForm) {
  for (int m = 2; m <= 12; ++m) {
    auto g = group("I2:" + std::to_string(m));
    const auto& ctx = g->system().field();
    std::set<std::vector<std::string>> got, want;
    for (const auto& r : g->positive_roots()) got.insert({r.coords[0].to_string(), r.coords[1].to_string()});
    for (int i = 1; i <= m; ++i) want.insert({qnum(i, m, ctx).to_string(), qnum(i - 1, m, ctx).to_string()});
    EXPECT_EQ(got, want) << m;
  }
}

TEST(Roots, FigureOrderForFive) {
  auto g = group("I2:5");
  FieldElement phi = qnum(2, 5, g->system().field());
  std::vector<Vector> want = {vec({1, 0}), vec({phi, 1}), vec({phi, phi}), vec({1, phi}), vec({0, 1})};
  auto seq = root_sequence(*g);
  ASSERT_EQ(seq.size(), 5u);
  for (size_t k = 0; k < 5; ++k) EXPECT_EQ(g->positive_roots()[seq[k]].coords, want[k]);
}

TEST(BruhatCovers, DihedralLongestElement) {
  auto g = group("I2:5");
  auto covers = g->lower_covers(g->longest());
  ASSERT_EQ(covers.size(), 2u);
  std::set<Word> tgt;
  for (auto& c : covers) tgt.insert(g->word(c.target));
  EXPECT_EQ(tgt, (std::set<Word>{{0, 1, 0, 1}, {1, 0, 1, 0}}));
  EXPECT_TRUE(g->lower_covers(g->identity()).empty());
}

TEST(BruhatCovers, CountsInA3) {
  auto g = group("A3");
  size_t edges = 0;
  for (size_t x = 0; x < g->order(); ++x) {
    for (auto& c : g->lower_covers(x)) EXPECT_EQ(g->length(c.target) + 1, g->length(x));
    edges += g->lower_covers(x).size();
  }
  // Hasse diagram of the Bruhat order on S_4
  EXPECT_EQ(edges, 58u);
}

TEST(CoxeterSystem, WordValidation) {
  auto a2 = CoxeterSystem::from_type("A2");
  EXPECT_THROW(a2->check_word({0, 2}), InvalidInput);
  EXPECT_THROW(a2->check_word({-1}), InvalidInput);
  EXPECT_EQ(word_string({0, 1, 0}), "121");
  EXPECT_EQ(word_string({0, 1}, false), "01");
}
