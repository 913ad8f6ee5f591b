#include "nearsq/arith.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "nearsq/error.hpp"

namespace nearsq {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kSizeBudgetExceeded: return "SizeBudgetExceeded";
    case Errc::kNotADivisor: return "NotADivisor";
    case Errc::kOutOfRange: return "OutOfRange";
    case Errc::kEmptyParametrization: return "EmptyParametrization";
    case Errc::kKernelMismatch: return "KernelMismatch";
    case Errc::kNoFeasibleDecomposition: return "NoFeasibleDecomposition";
    case Errc::kProductMismatch: return "ProductMismatch";
    case Errc::kDegenerateIndex: return "DegenerateIndex";
    case Errc::kArityError: return "ArityError";
    case Errc::kMixedN: return "MixedN";
    case Errc::kDomainError: return "DomainError";
    case Errc::kCheckpointCorrupt: return "CheckpointCorrupt";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kInternal: return "InternalError";
  }
  return "Unknown";
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kTrialLimit = 1'000'000;

const std::vector<std::uint32_t>& TrialPrimes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<std::uint32_t> out;
    out.reserve(80'000);
    for (u64 i = 2; i <= kTrialLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(static_cast<std::uint32_t>(i));
      for (u64 j = i * i; j <= kTrialLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

bool FitsU64(const Int& n) {
  return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

u64 ToU64(const Int& n) {
  u64 out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

Int FromU64(u64 v) {
  Int out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

u64 MulMod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 PowMod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = MulMod(result, base, m);
    base = MulMod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 Gcd64(u64 a, u64 b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

// Brent's cycle finding with batched gcds. Returns 0 or n on failure.
u64 BrentRho64(u64 n, u64 increment) {
  if (n % 2 == 0) return 2;
  u64 y = 2, x = 2, q = 1, ys = 2, g = 1;
  const u64 batch = 128;
  auto step = [&](u64 v) { return (MulMod(v, v, n) + increment) % n; };
  for (u64 r = 1; g == 1; r <<= 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = step(y);
    for (u64 k = 0; k < r && g == 1; k += batch) {
      ys = y;
      for (u64 i = 0; i < std::min(batch, r - k); ++i) {
        y = step(y);
        q = MulMod(q, x > y ? x - y : y - x, n);
      }
      g = Gcd64(q, n);
    }
  }
  if (g == n) {
    do {
      ys = step(ys);
      g = Gcd64(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

Int BrentRhoBig(const Int& n, unsigned long increment, u64 max_iterations) {
  Int y = 2, x = 2, q = 1, ys = 2, g = 1, diff;
  const u64 batch = 128;
  u64 spent = 0;
  auto step = [&](Int& v) {
    v = v * v + increment;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  for (u64 r = 1; g == 1; r <<= 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) step(y);
    for (u64 k = 0; k < r && g == 1; k += batch) {
      ys = y;
      for (u64 i = 0; i < std::min(batch, r - k); ++i) {
        step(y);
        diff = abs(x - y);
        q = q * diff;
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      spent += batch;
    }
    if (spent > max_iterations) return 0;
  }
  if (g == n) {
    do {
      step(ys);
      diff = abs(x - ys);
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g;
}

void SplitComposite(const Int& m, const FactorBudget& budget,
                    std::map<Int, unsigned>& out) {
  if (m == 1) return;
  if (IsPrime(m)) {
    ++out[m];
    return;
  }
  if (mpz_sizeinbase(m.get_mpz_t(), 10) > budget.max_digits) {
    throw Error(Errc::kSizeBudgetExceeded,
                "composite cofactor " + m.get_str() + " exceeds " +
                    std::to_string(budget.max_digits) + " digits");
  }
  Int divisor = 0;
  for (unsigned long increment = 1; increment < 64; ++increment) {
    if (FitsU64(m)) {
      divisor = FromU64(BrentRho64(ToU64(m), increment));
    } else {
      divisor = BrentRhoBig(m, increment, budget.rho_iterations);
    }
    if (divisor > 1 && divisor < m) break;
  }
  if (!(divisor > 1 && divisor < m)) {
    throw Error(Errc::kSizeBudgetExceeded,
                "could not split " + m.get_str() + " within the rho budget");
  }
  SplitComposite(divisor, budget, out);
  SplitComposite(m / divisor, budget, out);
}

}  // namespace

Factorization Factorization::Make(const Int& value,
                                  std::vector<PrimePower> primes) {
  if (value < 1) {
    throw Error(Errc::kInvalidArgument, "factorization of non-positive value");
  }
  std::map<Int, unsigned> merged;
  for (const auto& [p, e] : primes) {
    if (e == 0) continue;
    if (!IsPrime(p)) {
      throw Error(Errc::kInvalidArgument, p.get_str() + " is not prime");
    }
    merged[p] += e;
  }
  Int product = 1;
  std::vector<PrimePower> sorted;
  for (const auto& [p, e] : merged) {
    Int power;
    mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), e);
    product *= power;
    sorted.push_back({p, e});
  }
  if (product != value) {
    throw Error(Errc::kInvalidArgument, "prime powers multiply to " +
                                            product.get_str() + ", not " +
                                            value.get_str());
  }
  return Factorization(value, std::move(sorted));
}

Factorization Factorization::Power(unsigned k) const {
  Int value;
  mpz_pow_ui(value.get_mpz_t(), value_.get_mpz_t(), k);
  std::vector<PrimePower> primes;
  if (k > 0) {
    primes = primes_;
    for (auto& pp : primes) pp.exponent *= k;
  }
  return Factorization(std::move(value), std::move(primes));
}

Factorization operator*(const Factorization& a, const Factorization& b) {
  std::vector<PrimePower> out;
  auto ia = a.primes_.begin(), ib = b.primes_.begin();
  while (ia != a.primes_.end() || ib != b.primes_.end()) {
    if (ib == b.primes_.end() || (ia != a.primes_.end() && ia->prime < ib->prime)) {
      out.push_back(*ia++);
    } else if (ia == a.primes_.end() || ib->prime < ia->prime) {
      out.push_back(*ib++);
    } else {
      out.push_back({ia->prime, ia->exponent + ib->exponent});
      ++ia;
      ++ib;
    }
  }
  return Factorization(a.value_ * b.value_, std::move(out));
}

IsqrtResult Isqrt(const Int& n) {
  if (n < 0) throw Error(Errc::kInvalidArgument, "isqrt of negative value");
  IsqrtResult out;
  Int rem;
  mpz_sqrtrem(out.root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
  out.exact = rem == 0;
  return out;
}

bool IsPerfectSquare(const Int& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool IsPrime64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Jaeschke/Sinclair base set, deterministic below 2^64.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL,
                1795265022ULL}) {
    a %= n;
    if (a == 0) continue;
    u64 x = PowMod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s && composite; ++i) {
      x = MulMod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

bool IsPrime(const Int& n) {
  if (n < 2) return false;
  if (FitsU64(n)) return IsPrime64(ToU64(n));
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

Factorization Factorize(const Int& n, const FactorBudget& budget) {
  if (n < 1) throw Error(Errc::kInvalidArgument, "factorize needs n >= 1");
  std::map<Int, unsigned> found;
  Int m = n;
  bool exhausted = true;  // m has no prime factor below the trial limit
  if (FitsU64(m)) {
    u64 v = ToU64(m);
    for (std::uint32_t p : TrialPrimes()) {
      if (static_cast<u128>(p) * p > v) {
        exhausted = false;
        break;
      }
      if (v % p != 0) continue;
      unsigned e = 0;
      do {
        v /= p;
        ++e;
      } while (v % p == 0);
      found[Int(p)] = e;
    }
    if (!exhausted && v > 1) {
      ++found[FromU64(v)];
      v = 1;
    }
    m = FromU64(v);
  } else {
    for (std::uint32_t p : TrialPrimes()) {
      if (Int(p) * p > m) {
        exhausted = false;
        break;
      }
      if (mpz_divisible_ui_p(m.get_mpz_t(), p) == 0) continue;
      unsigned e = 0;
      do {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++e;
      } while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0);
      found[Int(p)] = e;
    }
    if (!exhausted && m > 1) {
      ++found[m];
      m = 1;
    }
  }
  if (m > 1) SplitComposite(m, budget, found);

  std::vector<PrimePower> primes;
  primes.reserve(found.size());
  for (const auto& [p, e] : found) primes.push_back({p, e});
  return Factorization::Make(n, std::move(primes));
}

SquarefreeSplit SquarefreeSplitOf(const Factorization& f) {
  SquarefreeSplit out{1, 1};
  for (const auto& [p, e] : f.primes()) {
    if (e % 2 == 1) out.kernel *= p;
    Int power;
    mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), e / 2);
    out.t *= power;
  }
  return out;
}

SquarefreeSplit SquarefreeSplitOf(const Int& n, const FactorBudget& budget) {
  return SquarefreeSplitOf(Factorize(n, budget));
}

std::vector<Int> DivisorsInRange(const Factorization& f, const Int& lo,
                                 const Int& hi) {
  std::vector<Int> out;
  if (hi < 1 || lo > hi || lo > f.value()) return out;
  const auto& primes = f.primes();
  const std::size_t k = primes.size();

  // reach[i] = largest multiplier obtainable from primes i..k-1.
  std::vector<Int> reach(k + 1, Int(1));
  for (std::size_t i = k; i-- > 0;) {
    Int power;
    mpz_pow_ui(power.get_mpz_t(), primes[i].prime.get_mpz_t(),
               primes[i].exponent);
    reach[i] = reach[i + 1] * power;
  }

  auto visit = [&](auto&& self, std::size_t i, const Int& partial) -> void {
    if (partial * reach[i] < lo) return;
    if (i == k) {
      out.push_back(partial);  // partial ≤ hi is maintained by the caller
      return;
    }
    Int current = partial;
    for (unsigned e = 0; e <= primes[i].exponent; ++e) {
      if (current > hi) break;
      self(self, i + 1, current);
      current *= primes[i].prime;
    }
  };
  visit(visit, 0, Int(1));
  std::sort(out.begin(), out.end());
  return out;
}

SmallestPrimeSieve::SmallestPrimeSieve(std::uint32_t limit)
    : limit_(limit), spf_(static_cast<std::size_t>(limit) + 1, 0) {
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t next = static_cast<std::uint64_t>(p) * i;
      if (p > spf_[i] || next > limit) break;
      spf_[next] = p;
    }
  }
}

Factorization SmallestPrimeSieve::Factor(std::uint32_t n) const {
  if (n < 1 || n > limit_) {
    throw Error(Errc::kOutOfRange, "sieve lookup outside [1, limit]");
  }
  std::vector<PrimePower> primes;
  const Int value = n;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    primes.push_back({Int(p), e});
  }
  return Factorization::Make(value, std::move(primes));
}

}  // namespace nearsq
