#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "tautrel/classes.hpp"
#include "tautrel/errors.hpp"
#include "tautrel/reduction.hpp"

using namespace tautrel;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_factors(const Rewrite& r, bool kernel) {
  int k = 0;
  for (const auto& t : r.terms)
    for (const auto& f : t.factors) k += std::holds_alternative<KernelPairing>(f.req) == kernel;
  return k;
}

}  // namespace

TEST(Kappa, KappaZeroIsEulerCharacteristic) {
  ReductionEngine eng;
  for (int g = 0; g <= 1; ++g)
    for (int n = 1; n <= 3; ++n)
      for (int m = 1; m <= 2; ++m) {
        if (2 * g - 2 + n + m <= 0) continue;
        for (int b0 = 0; b0 <= 1; ++b0) {
          XiPairing plain{g, n, m, std::vector<int>(n, 0), std::vector<int>(m, 0), {}};
          plain.b[0] = b0;
          XiPairing with = plain;
          with.kappa = {0};
          MultiPoly lhs = eng.evaluate(with, Evaluation::Direct);
          MultiPoly rhs = eng.evaluate(plain, Evaluation::Direct);
          rhs *= Rational(2 * g - 2 + n + m);
          EXPECT_EQ(lhs, rhs) << g << n << m << b0;
        }
      }
}

TEST(Kappa, EmptyIsIdentityAndDegreePreserved) {
  ReductionEngine eng;
  XiPairing p{1, 2, 1, {0, 0}, {0}, {1}};
  Rewrite r = eng.kappa_reduce(p);
  ASSERT_EQ(r.terms.size(), 1u);
  const auto& q = std::get<XiPairing>(r.terms[0].factors[0].req);
  EXPECT_EQ(q.n, 3);
  EXPECT_EQ(q.c.back(), 2);
  EXPECT_EQ(q.degree(), p.degree());
  EXPECT_EQ(eng.degree_checks().violated, 0);
}

TEST(PsiRule, SmallInstanceAgreesWithDirect) {
  ReductionEngine eng;
  XiPairing p{0, 2, 1, {1, 0}, {0}, {}};
  EXPECT_EQ(eng.evaluate(eng.regular_psi_reduce(p, 0), Evaluation::Direct), eng.evaluate(p, Evaluation::Direct));
  EXPECT_THROW(eng.regular_psi_reduce(p, 2), std::invalid_argument);
  EXPECT_THROW(eng.regular_psi_reduce(p, -1), std::invalid_argument);
  EXPECT_THROW(eng.regular_psi_reduce(p, 1), std::invalid_argument);  // no psi at leg 2
}

TEST(PsiRule, AllOrdersAgree) {
  ReductionEngine eng;
  int nonzero = 0;
  for (int g = 0; g <= 1; ++g)
    for (int n = 1; n <= 3; ++n)
      for (int m = 1; m <= 2; ++m) {
        if (2 * g - 2 + n + m <= 0) continue;
        for (int mask = 1; mask < (1 << n); ++mask) {
          XiPairing p{g, n, m, std::vector<int>(n, 0), std::vector<int>(m, 0), {}};
          for (int j = 0; j < n; ++j) p.c[j] = mask >> j & 1;
          MultiPoly d = eng.evaluate(p, Evaluation::Direct);
          EXPECT_EQ(eng.evaluate(p, Evaluation::PsiAscending), d) << p.key();
          EXPECT_EQ(eng.evaluate(p, Evaluation::PsiDescending), d) << p.key();
          nonzero += !d.is_zero();
        }
      }
  EXPECT_GT(nonzero, 5);
  EXPECT_EQ(eng.degree_checks().violated, 0);
  EXPECT_GT(eng.degree_checks().checked, 0);
}

TEST(Pullback, NonSeparating) {
  ReductionEngine eng;
  auto t = TestClass::parse("nonsep g=1 n=1 m=1 exps=0,0,0,0 kappa=");
  Rewrite r = eng.pullback_nonseparating(t);
  EXPECT_EQ(r.rule, "rho1");
  const auto& q = std::get<XiPairing>(r.terms.at(0).factors.at(0).req);
  EXPECT_EQ(q.g, 0);
  EXPECT_EQ(q.n, 1);
  EXPECT_EQ(q.m, 3);
  EXPECT_EQ(q.degree(), t.xi_degree());
  EXPECT_THROW(eng.pullback_separating_mixed(t), InvalidSplit);
  EXPECT_THROW(eng.pullback_separating_onesided(t), InvalidSplit);
}

TEST(Pullback, SeparatingMixed) {
  ReductionEngine eng;
  auto t = TestClass::parse("sep g=0 n=2 m=2 g1=0 side=0,1,0,1 exps1=0,0,0 exps2=0,0,0 kappa1= kappa2=");
  Rewrite r = eng.pullback_separating_mixed(t);
  EXPECT_EQ(r.rule, "rho2");
  ASSERT_EQ(r.terms.size(), 1u);
  ASSERT_EQ(r.terms[0].factors.size(), 2u);
  int total = 0;
  for (const auto& f : r.terms[0].factors) total += std::get<XiPairing>(f.req).degree();
  EXPECT_EQ(total, t.xi_degree());
  EXPECT_THROW(eng.pullback_separating_onesided(t), InvalidSplit);
  EXPECT_THROW(eng.pullback_nonseparating(t), InvalidSplit);
}

TEST(Pullback, SeparatingOneSided) {
  ReductionEngine eng;
  // two regular legs bubble off on a genus-0 component
  auto t = TestClass::parse("sep g=0 n=3 m=1 g1=0 side=1,1,0,0 exps1=0,0,0 exps2=0,0,0 kappa1= kappa2=");
  Rewrite r = eng.pullback_separating_onesided(t);
  EXPECT_EQ(r.rule, "rho3");
  EXPECT_EQ(r.terms.size(), 2u);
  EXPECT_EQ(count_factors(r, true), 1);
  EXPECT_THROW(eng.pullback_separating_mixed(t), InvalidSplit);
  EXPECT_EQ(eng.pullback(t).rule, "rho3");
  EXPECT_FALSE(r.sexp().empty());
  EXPECT_EQ(r.sexp().front(), '(');
}

TEST(Pullback, NotABoundaryClass) {
  ReductionEngine eng;
  auto t = TestClass::parse("psi g=0 n=2 m=2 exps=0,0,0,1 kappa=");
  EXPECT_THROW(eng.pullback(t), std::invalid_argument);
}

TEST(TestClasses, ParseAndEncode) {
  for (const std::string line : {"psi g=0 n=2 m=2 exps=0,0,0,1 kappa=0",
                                 "sep g=0 n=2 m=2 g1=0 side=0,1,1,0 exps1=0,0,0 exps2=0,0,0 kappa1= kappa2=0",
                                 "nonsep g=1 n=1 m=1 exps=0,0,0,0 kappa=1"}) {
    auto t = TestClass::parse(line);
    EXPECT_EQ(t.encode(), line);
  }
  EXPECT_THROW(TestClass::parse("blob g=0"), ParseError);
  EXPECT_THROW(TestClass::parse("psi g=0 n=2 m=2 exps=0,x kappa="), ParseError);
  auto t = TestClass::parse("psi g=1 n=1 m=1 exps=1,0 kappa=0");
  EXPECT_EQ(t.class_degree(), 1);
  EXPECT_EQ(t.xi_degree(), 1);
}

TEST(Corpus, FileIsTheGeneratedCorpus) {
  const std::string text = read_file(std::string(TAUTREL_DATA_DIR) + "/reduction_corpus.txt");
  ASSERT_FALSE(text.empty());
  auto gen = generate_corpus(1, 3, 2);
  EXPECT_EQ(render_corpus(gen), text);
  auto parsed = parse_corpus(text);
  ASSERT_EQ(parsed.size(), gen.size());
  for (size_t i = 0; i < gen.size(); i += 53) EXPECT_EQ(parsed[i].encode(), gen[i].encode());
}

TEST(Corpus, SampleIsConfluent) {
  ReductionEngine eng;
  auto corpus = generate_corpus(1, 3, 2);
  int multi = 0;
  for (size_t i = 0; i < corpus.size(); i += 211) {
    auto e = check_confluence(eng, corpus[i]);
    EXPECT_TRUE(e.agree) << corpus[i].encode();
    multi += e.values.size() >= 2;
  }
  EXPECT_GT(multi, 100);
  EXPECT_EQ(eng.degree_checks().violated, 0);
}

TEST(Boundary, PsiAsDivisorsInGenusZero) {
  ReductionEngine eng;
  auto t = TestClass::parse("psi g=0 n=2 m=2 exps=1,0,0,0 kappa=");
  auto first = eng.psi_to_boundary(t, false);
  auto last = eng.psi_to_boundary(t, true);
  EXPECT_FALSE(first.empty());
  EXPECT_FALSE(last.empty());
  MultiPoly direct = eng.evaluate(t, Route::Direct);
  EXPECT_EQ(eng.evaluate(t, Route::BoundaryFirst), direct);
  EXPECT_EQ(eng.evaluate(t, Route::BoundaryLast), direct);
}
