#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "coxhodge/coxeter.hpp"
#include "coxhodge/field.hpp"

using namespace coxhodge;

namespace {

long totient(long n) {
  long r = 0;
  for (long k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++r;
  return r;
}

double eval_minpoly(const FieldContext& ctx, double x) {
  double r = 0;
  const auto& p = ctx.minimal_polynomial();
  for (size_t i = p.size(); i-- > 0;) r = r * x + p[i].get_d();
  return r;
}

FieldElement random_element(const FieldContext* ctx, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  std::vector<Rational> c;
  for (int i = 0; i < ctx->degree(); ++i) c.emplace_back(num(rng), den(rng));
  for (auto& x : c) x.canonicalize();
  return FieldElement::from_coefficients(ctx, c);
}

}  // namespace

TEST(FieldContext, ConductorFromMatrix) {
  EXPECT_EQ(field_context(CoxeterSystem::matrix_for_type("A2"))->conductor(), 6);
  auto i5 = field_context(CoxeterSystem::matrix_for_type("I2:5"));
  EXPECT_EQ(i5->conductor(), 10);
  EXPECT_EQ(i5->degree(), 4);
  EXPECT_EQ(field_context(CoxeterSystem::matrix_for_type("I2:2"))->conductor(), 2);
  EXPECT_EQ(field_context(CoxeterSystem::matrix_for_type("I2:inf"))->conductor(), 2);
  EXPECT_EQ(field_context(CoxeterSystem::matrix_for_type("I2:inf"))->degree(), 1);
  EXPECT_EQ(field_context(CoxeterSystem::matrix_for_type("H4"))->conductor(), 30);
}

TEST(FieldContext, RejectsBadMatrices) {
  EXPECT_THROW(field_context({{1, 3}, {4, 1}}), InvalidInput);
  EXPECT_THROW(field_context({{2, 3}, {3, 1}}), InvalidInput);
  EXPECT_THROW(field_context({{1, 1}, {1, 1}}), InvalidInput);
  EXPECT_THROW(field_context({{1, 3, 2}, {3, 1}}), InvalidInput);
}

TEST(FieldContext, MinimalPolynomialDegreeAndRoot) {
  for (int n : {2, 3, 4, 5, 6, 8, 10, 12, 14, 30, 58, 60}) {
    auto ctx = FieldContext::for_conductor(n);
    // degree of Q(cos(pi/N)) is phi(2N)/2
    EXPECT_EQ(ctx->degree(), n == 2 ? 1 : totient(2 * n) / 2) << n;
    const double c = 2 * std::cos(M_PI / n);
    EXPECT_NEAR(eval_minpoly(*ctx, c), 0.0, 1e-6) << n;
    EXPECT_EQ(ctx->minimal_polynomial().back(), 1);
  }
}

TEST(FieldContext, EnclosureIsolatesTheLargestRoot) {
  for (int n : {5, 7, 10, 12, 30}) {
    auto ctx = FieldContext::for_conductor(n);
    const double lo = ctx->enclosure_low().get_d(), hi = ctx->enclosure_high().get_d();
    EXPECT_LT(hi - lo, 1e-9);
    EXPECT_TRUE(ctx->enclosure_low() < ctx->enclosure_high());
    int inside = 0;
    for (int k = 1; k < n; k += 2) {
      if (std::gcd(k, 2 * n) != 1) continue;
      double r = 2 * std::cos(k * M_PI / n);
      if (r >= lo - 1e-12 && r <= hi + 1e-12) ++inside;
      if (k == 1) EXPECT_NEAR(r, (lo + hi) / 2, 1e-12) << n;
    }
    EXPECT_EQ(inside, 1) << n;
  }
}

TEST(CosFraction, Examples) {
  auto ctx = field_context(CoxeterSystem::matrix_for_type("I2:5"));
  EXPECT_TRUE(cos_fraction(1, 2, *ctx).is_zero());
  FieldElement phi = FieldElement(2) * cos_fraction(1, 5, *ctx);
  EXPECT_EQ(phi * phi, phi + FieldElement(1));
  EXPECT_NEAR(phi.approx(), (1 + std::sqrt(5.0)) / 2, 1e-12);
  auto c6 = FieldContext::for_conductor(6);
  FieldElement r3 = FieldElement(2) * cos_fraction(1, 6, *c6);
  EXPECT_EQ(r3 * r3, FieldElement(3));
  EXPECT_EQ(cos_fraction(1, 3, *c6), FieldElement(Rational(1, 2)));
  EXPECT_TRUE(cos_fraction(1, 3, *c6).is_rational());
  EXPECT_THROW(cos_fraction(1, 7, *ctx), InvalidInput);
  EXPECT_THROW(cos_fraction(1, 0, *ctx), InvalidInput);
}

TEST(CosFraction, MatchesFloatingPoint) {
  auto ctx = FieldContext::for_conductor(60);
  for (int n : {1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60})
    for (int k = -7; k <= 13; ++k) EXPECT_NEAR(cos_fraction(k, n, *ctx).approx(), std::cos(k * M_PI / n), 1e-9);
}

TEST(QNumber, Examples) {
  for (int m = 2; m <= 12; ++m) {
    auto ctx = FieldContext::for_conductor(m == 2 ? 2 : 2 * m);
    EXPECT_TRUE(qnum(1, m, *ctx).is_one());
    EXPECT_TRUE(qnum(m, m, *ctx).is_zero());
    EXPECT_EQ(sign(qnum(m + 1, m, *ctx)), -1);
    EXPECT_EQ(qnum(-3, m, *ctx), -qnum(3, m, *ctx));
  }
  auto c10 = FieldContext::for_conductor(10);
  EXPECT_EQ(qnum(2, 5, *c10), qnum(3, 5, *c10));
}

TEST(QNumber, SymbolicIdentities) {
  using L = LaurentPolynomial;
  for (int n = -20; n <= 20; ++n) EXPECT_EQ(L::quantum(2) * L::quantum(n), L::quantum(n + 1) + L::quantum(n - 1));
  for (int n = 1; n <= 20; ++n) {
    L odd, even;
    for (int k = 1; k <= 2 * n - 1; k += 2) odd = odd + L::quantum(k);
    for (int k = 2; k <= 2 * n; k += 2) even = even + L::quantum(k);
    EXPECT_EQ(L::quantum(n) * L::quantum(n), odd);
    EXPECT_EQ(L::quantum(n) * L::quantum(n + 1), even);
  }
}

TEST(QNumber, SpecializationMatchesRecurrence) {
  for (int m = 2; m <= 30; ++m) {
    auto ctx = FieldContext::for_conductor(m == 2 ? 2 : 2 * m);
    for (int n = -3; n <= 2 * m; ++n)
      EXPECT_EQ(LaurentPolynomial::quantum(n).evaluate_real(m, *ctx), qnum(n, m, *ctx)) << m << " " << n;
  }
}

TEST(QNumber, PositivityAndSymmetry) {
  for (int m = 2; m <= 30; ++m) {
    auto ctx = FieldContext::for_conductor(m == 2 ? 2 : 2 * m);
    for (int i = 0; i <= m; ++i) EXPECT_EQ(qnum(i, m, *ctx), qnum(m - i, m, *ctx));
    for (int i = 1; i < m; ++i) EXPECT_EQ(sign(qnum(i, m, *ctx)), 1) << m << " " << i;
    for (int i = 1; i <= m; ++i) {
      FieldElement a = qnum(i, m, *ctx), b = qnum(i + 1, m, *ctx);
      EXPECT_EQ(a * a + b * b - FieldElement(1), qnum(2, m, *ctx) * a * b);
      EXPECT_EQ(qnum(i + m, m, *ctx), -a);
    }
  }
}

TEST(FieldElement, RingAxiomsAndInverses) {
  std::mt19937 rng(20240611);
  for (int n : {5, 7, 12, 30}) {
    auto ctx = FieldContext::for_conductor(n);
    for (int k = 0; k < 250; ++k) {
      FieldElement a = random_element(ctx.get(), rng), b = random_element(ctx.get(), rng),
                   c = random_element(ctx.get(), rng);
      EXPECT_EQ((a + b) + c, a + (b + c));
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      if (!a.is_zero()) {
        EXPECT_TRUE((a * a.inverse()).is_one());
        EXPECT_EQ((b / a) * a, b);
      }
    }
  }
}

TEST(FieldElement, LargeCoefficientsStayExact) {
  auto ctx = FieldContext::for_conductor(14);
  FieldElement x = FieldElement::generator(ctx.get()) + FieldElement(Rational(1, 3));
  FieldElement p = x;
  for (int i = 0; i < 6; ++i) p = p * p;  // x^64, coefficients far beyond 64 bits
  FieldElement q = x.inverse();
  for (int i = 0; i < 6; ++i) q = q * q;
  EXPECT_TRUE((p * q).is_one());
  EXPECT_NEAR(std::log(p.approx()), 64 * std::log(x.approx()), 1e-6);
  EXPECT_EQ(sign(p - FieldElement(1)), 1);
}

TEST(FieldElement, ToStringAndHash) {
  auto ctx = FieldContext::for_conductor(10);
  FieldElement c = FieldElement::generator(ctx.get());
  EXPECT_EQ((c * c - FieldElement(2)).to_string(), "c^2 - 2");
  EXPECT_EQ(FieldElement(Rational(-3, 4)).to_string(), "-3/4");
  EXPECT_EQ(FieldElement().to_string(), "0");
  EXPECT_EQ((c + FieldElement(1)).hash(), (FieldElement(1) + c).hash());
}

TEST(Sign, TotalAndConsistent) {
  EXPECT_EQ(sign(FieldElement()), 0);
  std::mt19937 rng(7);
  for (int n : {5, 8, 30}) {
    auto ctx = FieldContext::for_conductor(n);
    for (int k = 0; k < 200; ++k) {
      FieldElement x = random_element(ctx.get(), rng);
      if (x.is_zero()) continue;
      EXPECT_EQ(sign(x) * sign(-x), -1);
      EXPECT_EQ(sign(x * x), 1);
      double v = x.approx();
      if (std::abs(v) > 1e-9) EXPECT_EQ(sign(x), v > 0 ? 1 : -1);
    }
  }
}

TEST(Sign, NearlyCancellingValues) {
  // phi^20 - L20 is tiny: phi^n + (-1/phi)^n = Lucas(n)
  auto ctx = FieldContext::for_conductor(10);
  FieldElement phi = qnum(2, 5, *ctx);
  FieldElement p = FieldElement(1);
  for (int i = 0; i < 20; ++i) p = p * phi;
  EXPECT_EQ(sign(p - FieldElement(15127)), -1);
  EXPECT_EQ(sign(p - FieldElement(Rational(151269999, 10000))), 1);
}
