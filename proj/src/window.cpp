#include "nearsq/window.hpp"

#include <algorithm>

#include "nearsq/error.hpp"

namespace nearsq {

WindowParams WindowParams::Make(const Int& N, const Rational& c) {
  if (N < 2) throw Error(Errc::kInvalidArgument, "window needs N >= 2");
  if (c.value() < 1) throw Error(Errc::kInvalidArgument, "window needs c >= 1");
  return WindowParams{N, c};
}

bool InWindow(const Int& q, const Int& N, const Rational& c) {
  const Int delta = q - N;
  const Int s = c.den(), p = c.num();
  return s * s * delta * delta <= p * p * N;
}

Int WindowRadius(const Int& N, const Rational& c) {
  const Int p = c.num(), s = c.den();
  Int bound = p * p * N;
  mpz_fdiv_q(bound.get_mpz_t(), bound.get_mpz_t(), Int(s * s).get_mpz_t());
  return Isqrt(bound).root;
}

bool MeetsRestrictGate(const Int& N, const Rational& c) {
  const Int p = c.num(), s = c.den();
  return N * s * s >= 4 * p * p;
}

bool PairWitness::IdentitiesHold() const {
  if (d < 1 || e <= d || l != e - d || d >= N) return false;
  return (N - d) * (N + e) == N * N && e * d == (e - d) * N &&
         l * (N - d) == d * d;
}

PairWitness MakePairWitness(const Int& N, const Int& q) {
  if (q < 1 || q >= N) {
    throw Error(Errc::kOutOfRange,
                "pair witness needs 1 <= q < N, got q = " + q.get_str());
  }
  const Int square = N * N;
  if (mpz_divisible_p(square.get_mpz_t(), q.get_mpz_t()) == 0) {
    throw Error(Errc::kNotADivisor, q.get_str() + " does not divide " +
                                        square.get_str());
  }
  PairWitness w;
  w.N = N;
  w.d = N - q;
  w.e = square / q - N;
  w.l = w.e - w.d;
  if (!w.IdentitiesHold()) {
    throw Error(Errc::kInternal, "pair witness identities failed for N = " +
                                     N.get_str() + ", q = " + q.get_str());
  }
  return w;
}

bool CheckRestrict(const PairWitness& w, const Rational& c) {
  const Int p = c.num(), s = c.den();
  return w.l * s * s <= 2 * p * p;
}

WindowCensus ComputeWindowCensus(const WindowParams& params,
                                 const std::optional<Factorization>& factors) {
  const Int& N = params.N;
  if (factors && factors->value() != N) {
    throw Error(Errc::kInvalidArgument,
                "supplied factorization is of " + factors->value().get_str() +
                    ", not N = " + N.get_str());
  }
  const Factorization square =
      (factors ? *factors : Factorize(N)).Power(2);

  const Int radius = WindowRadius(N, params.c);
  const Int lo = std::max(Int(1), Int(N - radius));
  const Int hi = N + radius;

  WindowCensus census;
  census.params = params;
  for (auto& q : DivisorsInRange(square, lo, hi)) {
    if (!InWindow(q, N, params.c)) {
      throw Error(Errc::kInternal, "radius bound admitted " + q.get_str());
    }
    census.divisors.push_back(std::move(q));
  }

  const Int n = square.value();
  for (const Int& q : census.divisors) {
    if (q == N) continue;
    const Int cofactor = n / q;
    const bool partner_inside = InWindow(cofactor, N, params.c);
    if (q < N) {
      if (partner_inside) {
        census.pairs.push_back(MakePairWitness(N, q));
      } else {
        census.unpaired_low.push_back(q);
      }
    } else if (!partner_inside) {
      census.unpaired_high.push_back(q);
    }
  }
  // Divisors are ascending, so q = N − d descending gives ascending d.
  std::reverse(census.pairs.begin(), census.pairs.end());
  return census;
}

}  // namespace nearsq
