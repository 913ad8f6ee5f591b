#include "nearsq/arith.hpp"

#include <gtest/gtest.h>

#include <random>

#include "nearsq/error.hpp"
#include "oracles.hpp"

namespace nearsq {
namespace {

using testing::NaiveDivisors;
using testing::NaiveFactor;

std::vector<std::pair<Int, unsigned>> Flatten(const Factorization& f) {
  std::vector<std::pair<Int, unsigned>> out;
  for (const auto& [p, e] : f.primes()) out.emplace_back(p, e);
  return out;
}

TEST(Isqrt, Examples) {
  EXPECT_EQ(Isqrt(0).root, 0);
  EXPECT_TRUE(Isqrt(0).exact);
  EXPECT_EQ(Isqrt(9216).root, 96);
  EXPECT_TRUE(Isqrt(9216).exact);
  EXPECT_EQ(Isqrt(3601).root, 60);
  EXPECT_FALSE(Isqrt(3601).exact);
}

TEST(Isqrt, BracketsEveryValueUpToAMillion) {
  for (long n = 0; n <= 1'000'000; ++n) {
    const auto [root, exact] = Isqrt(n);
    ASSERT_LE(root * root, n);
    ASSERT_GT((root + 1) * (root + 1), n);
    ASSERT_EQ(exact, root * root == n);
  }
}

TEST(Isqrt, Large) {
  const Int big = Int("123456789012345678901234567890");
  const auto r = Isqrt(big * big);
  EXPECT_EQ(r.root, big);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(Isqrt(big * big - 1).root, big - 1);
  EXPECT_THROW(Isqrt(-1), Error);
}

TEST(Factorize, Examples) {
  EXPECT_TRUE(Factorize(1).primes().empty());
  using V = std::vector<std::pair<Int, unsigned>>;
  EXPECT_EQ(Flatten(Factorize(9216)), (V{{2, 10}, {3, 2}}));
  EXPECT_EQ(Flatten(Factorize(3600)), (V{{2, 4}, {3, 2}, {5, 2}}));
  EXPECT_THROW(Factorize(0), Error);
}

TEST(Factorize, MatchesTrialDivisionUpTo1e5) {
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    const auto f = Factorize(n);
    const auto naive = NaiveFactor(n);
    ASSERT_EQ(f.primes().size(), naive.size()) << n;
    for (std::size_t i = 0; i < naive.size(); ++i) {
      ASSERT_EQ(f.primes()[i].prime, naive[i].first) << n;
      ASSERT_EQ(f.primes()[i].exponent, naive[i].second) << n;
    }
    ASSERT_EQ(f.value(), n);
  }
}

TEST(Factorize, LargeSemiprimesAndPrimes) {
  // Both factors exceed the trial-division table, forcing rho.
  const Int p = Int("2305843009213693951");  // 2^61 − 1
  const Int q = 1'000'000'007;
  const auto f = Factorize(p * q * q * 12);
  using V = std::vector<std::pair<Int, unsigned>>;
  EXPECT_EQ(Flatten(f), (V{{2, 2}, {3, 1}, {q, 2}, {p, 1}}));

  // 64-bit composite with two large factors.
  const Int a = 4'294'967'291, b = 4'294'967'279;
  EXPECT_EQ(Flatten(Factorize(a * b)), (V{{b, 1}, {a, 1}}));

  const Int prime = Int("170141183460469231731687303715884105727");  // 2^127−1
  EXPECT_EQ(Flatten(Factorize(prime)), (V{{prime, 1}}));
}

TEST(Factorize, Deterministic) {
  const Int n = Int("2305843009213693951") * 1'000'000'009;
  EXPECT_EQ(Factorize(n), Factorize(n));
}

TEST(Factorize, BudgetExceeded) {
  // (2^89 − 1)(2^107 − 1): a 59-digit composite with no small factor.
  Int m89, m107;
  mpz_ui_pow_ui(m89.get_mpz_t(), 2, 89);
  mpz_ui_pow_ui(m107.get_mpz_t(), 2, 107);
  const Int n = (m89 - 1) * (m107 - 1);
  try {
    Factorize(n);
    FAIL() << "expected SizeBudgetExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSizeBudgetExceeded);
  }
  FactorBudget tight;
  tight.max_digits = 10;
  const Int semiprime = Int(4'294'967'291) * 4'294'967'279;
  EXPECT_THROW(Factorize(semiprime, tight), Error);
}

TEST(IsPrime, AgreesWithTrialDivision) {
  for (std::uint64_t n = 0; n < 20'000; ++n) {
    const auto naive = NaiveFactor(n);
    const bool prime = n >= 2 && naive.size() == 1 && naive[0].second == 1;
    ASSERT_EQ(IsPrime(n), prime) << n;
  }
  // Strong pseudoprimes to several small bases.
  EXPECT_FALSE(IsPrime64(3215031751ULL));
  EXPECT_FALSE(IsPrime64(3825123056546413051ULL));
  EXPECT_TRUE(IsPrime64(18446744073709551557ULL));
}

TEST(SquarefreeSplit, Examples) {
  auto check = [](long n, long kernel, long t) {
    const auto s = SquarefreeSplitOf(Int(n));
    EXPECT_EQ(s.kernel, kernel) << n;
    EXPECT_EQ(s.t, t) << n;
  };
  check(1, 1, 1);
  check(90, 10, 3);
  check(32, 2, 4);
}

TEST(SquarefreeSplit, KernelIsSquarefreeAndSquareIsMaximal) {
  for (long n = 1; n <= 100'000; ++n) {
    const auto [kernel, t] = SquarefreeSplitOf(Int(n));
    ASSERT_EQ(kernel * t * t, n);
    for (const auto& [p, e] : NaiveFactor(kernel.get_ui())) ASSERT_EQ(e, 1u);
  }
}

TEST(DivisorsInRange, Examples) {
  using V = std::vector<Int>;
  EXPECT_EQ(DivisorsInRange(Factorize(1), 1, 1), (V{1}));
  EXPECT_EQ(DivisorsInRange(Factorize(9216), 48, 144),
            (V{48, 64, 72, 96, 128, 144}));
  EXPECT_EQ(DivisorsInRange(Factorize(3600), 37, 83),
            (V{40, 45, 48, 50, 60, 72, 75, 80}));
  EXPECT_TRUE(DivisorsInRange(Factorize(3600), 61, 71).empty());
  EXPECT_TRUE(DivisorsInRange(Factorize(3600), 10, 5).empty());
}

TEST(DivisorsInRange, FullRangeMatchesNaiveUpTo1e5) {
  for (std::uint64_t n = 1; n <= 100'000; n += (n < 5000 ? 1 : 7)) {
    const auto got = DivisorsInRange(Factorize(n), 1, n);
    const auto want = NaiveDivisors(n);
    ASSERT_EQ(got.size(), want.size()) << n;
    for (std::size_t i = 0; i < want.size(); ++i) ASSERT_EQ(got[i], want[i]);
  }
}

TEST(DivisorsInRange, RandomSubrangesMatchFilteredNaive) {
  std::mt19937_64 rng(20261017);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint64_t n = 1 + rng() % 200'000;
    const std::uint64_t a = 1 + rng() % n, b = 1 + rng() % n;
    const std::uint64_t lo = std::min(a, b), hi = std::max(a, b);
    std::vector<Int> want;
    for (std::uint64_t q : NaiveDivisors(n)) {
      if (q >= lo && q <= hi) want.push_back(q);
    }
    ASSERT_EQ(DivisorsInRange(Factorize(n), lo, hi), want) << n;
  }
}

TEST(DivisorsInRange, NarrowWindowOnHugeDivisorCount) {
  // 2^40 · 3^30 · 5^20: 41·31·21 = 26691 divisors, a window holding few.
  Int n;
  mpz_ui_pow_ui(n.get_mpz_t(), 2, 40);
  Int p3, p5;
  mpz_ui_pow_ui(p3.get_mpz_t(), 3, 30);
  mpz_ui_pow_ui(p5.get_mpz_t(), 5, 20);
  n *= p3 * p5;
  const Factorization f = Factorize(n);
  const Int root = Isqrt(n).root;
  const auto got = DivisorsInRange(f, root - root / 1000, root + root / 1000);
  for (const Int& q : got) {
    EXPECT_EQ(n % q, 0);
  }
  const auto all = DivisorsInRange(f, 1, n);
  EXPECT_EQ(all.size(), 26691u);
  std::size_t expected = 0;
  for (const Int& q : all) {
    if (q >= root - root / 1000 && q <= root + root / 1000) ++expected;
  }
  EXPECT_EQ(got.size(), expected);
}

TEST(FactorizationMake, ValidatesInput) {
  EXPECT_NO_THROW(Factorization::Make(12, {{3, 1}, {2, 2}}));
  EXPECT_EQ(Factorization::Make(12, {{3, 1}, {2, 1}, {2, 1}}),
            Factorize(12));
  EXPECT_THROW(Factorization::Make(12, {{4, 1}, {3, 1}}), Error);
  EXPECT_THROW(Factorization::Make(13, {{2, 2}, {3, 1}}), Error);
  EXPECT_THROW(Factorization::Make(0, {}), Error);
}

TEST(FactorizationAlgebra, PowerAndProduct) {
  const auto f = Factorize(60);
  EXPECT_EQ(f.Power(2), Factorize(3600));
  EXPECT_EQ(f * Factorize(35), Factorize(2100));
  EXPECT_EQ(f.Power(0), Factorize(1));
}

TEST(SmallestPrimeSieve, MatchesFactorize) {
  const SmallestPrimeSieve sieve(50'000);
  for (std::uint32_t n = 1; n <= 50'000; ++n) {
    ASSERT_EQ(sieve.Factor(n), Factorize(n)) << n;
  }
  EXPECT_THROW(sieve.Factor(50'001), Error);
  EXPECT_THROW(sieve.Factor(0), Error);
}

TEST(Rational, ParseAndCanonicalize) {
  EXPECT_EQ(Rational::Parse("3").ToString(), "3/1");
  EXPECT_EQ(Rational::Parse("10/4").ToString(), "5/2");
  EXPECT_EQ(Rational::Parse("10/4"), Rational(5, 2));
  EXPECT_THROW(Rational::Parse("1.5"), Error);
  EXPECT_THROW(Rational::Parse("3/0"), Error);
  EXPECT_THROW(Rational::Parse("-3"), Error);
  EXPECT_THROW(Rational::Parse(""), Error);
}

}  // namespace
}  // namespace nearsq
