#pragma once

#include <optional>
#include <vector>

#include "nearsq/arith.hpp"
#include "nearsq/rational.hpp"

namespace nearsq {

// n = N² and the window [N − c√N, N + c√N].
struct WindowParams {
  Int N;
  Rational c;

  // Throws kInvalidArgument unless N ≥ 2 and c ≥ 1.
  static WindowParams Make(const Int& N, const Rational& c);
};

// True iff |q − N| ≤ c√N, decided as s²(q − N)² ≤ p²N for c = p/s.
bool InWindow(const Int& q, const Int& N, const Rational& c);

// Largest k with k ≤ c√N, i.e. the integer half-width of the window.
Int WindowRadius(const Int& N, const Rational& c);

// N ≥ 4c², the gate under which l ≤ 2c² and decomposition feasibility hold.
bool MeetsRestrictGate(const Int& N, const Rational& c);

// One divisor pair (N − d)(N + e) = N² with gap l = e − d.
struct PairWitness {
  Int N;
  Int d;
  Int e;
  Int l;

  Int low() const { return N - d; }
  Int high() const { return N + e; }

  // Checks all four defining identities exactly.
  bool IdentitiesHold() const;

  friend bool operator==(const PairWitness&, const PairWitness&) = default;
};

// Witness for the divisor q < N of N². Throws kNotADivisor or kOutOfRange.
PairWitness MakePairWitness(const Int& N, const Int& q);

// l ≤ 2c².
bool CheckRestrict(const PairWitness& w, const Rational& c);

struct WindowCensus {
  WindowParams params;
  // Every divisor of N² in the closed window, ascending.
  std::vector<Int> divisors;
  // Pairs with both sides in the window, ascending d.
  std::vector<PairWitness> pairs;
  // q < N in the window whose cofactor N²/q lies above it, ascending.
  std::vector<Int> unpaired_low;
  // q > N in the window whose cofactor lies below it, ascending.
  std::vector<Int> unpaired_high;

  std::size_t r() const { return pairs.size(); }
};

// If factors is supplied it must factor N itself; otherwise N is factored
// under the default budget.
WindowCensus ComputeWindowCensus(const WindowParams& params,
                                 const std::optional<Factorization>& factors =
                                     std::nullopt);

}  // namespace nearsq
