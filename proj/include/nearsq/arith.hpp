#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nearsq/rational.hpp"

namespace nearsq {

struct PrimePower {
  Int prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime-exponent multiset of a positive integer. Construction through
// Make() validates the product and primality of every entry.
class Factorization {
 public:
  Factorization() : value_(1) {}

  // Sorts and merges equal primes, then checks primality and the product.
  static Factorization Make(const Int& value, std::vector<PrimePower> primes);

  const Int& value() const { return value_; }
  const std::vector<PrimePower>& primes() const { return primes_; }

  // Factorization of value^k.
  Factorization Power(unsigned k) const;
  // Factorization of a·b from factorizations of a and b.
  friend Factorization operator*(const Factorization& a,
                                 const Factorization& b);

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  Factorization(Int value, std::vector<PrimePower> primes)
      : value_(std::move(value)), primes_(std::move(primes)) {}

  Int value_;
  std::vector<PrimePower> primes_;
};

struct IsqrtResult {
  Int root;
  bool exact = false;
};

struct FactorBudget {
  // Residual cofactors with more decimal digits than this are rejected.
  unsigned max_digits = 40;
  // Brent-rho iterations tried per seed on residuals above 64 bits.
  std::uint64_t rho_iterations = 1u << 22;
};

IsqrtResult Isqrt(const Int& n);
bool IsPerfectSquare(const Int& n);

// Deterministic for n < 2^64; above that a fixed-base BPSW-style test.
bool IsPrime(const Int& n);
bool IsPrime64(std::uint64_t n);

Factorization Factorize(const Int& n, const FactorBudget& budget = {});

struct SquarefreeSplit {
  Int kernel;
  Int t;
};

// n = kernel·t² with kernel squarefree and t² the largest square divisor.
SquarefreeSplit SquarefreeSplitOf(const Int& n,
                                  const FactorBudget& budget = {});
SquarefreeSplit SquarefreeSplitOf(const Factorization& f);

// Divisors q of f.value() with lo ≤ q ≤ hi, ascending. Depth-first over
// prime powers; a branch is cut once its partial product exceeds hi or can
// no longer reach lo with every remaining prime power.
std::vector<Int> DivisorsInRange(const Factorization& f, const Int& lo,
                                 const Int& hi);

// Smallest-prime-factor table for bulk factorization of 1..limit.
class SmallestPrimeSieve {
 public:
  explicit SmallestPrimeSieve(std::uint32_t limit);

  std::uint32_t limit() const { return limit_; }
  Factorization Factor(std::uint32_t n) const;

 private:
  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
};

}  // namespace nearsq
