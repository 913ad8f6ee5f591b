#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nearsq/arith.hpp"
#include "nearsq/decompose.hpp"
#include "nearsq/rational.hpp"

namespace nearsq {

// Member k of the family X + √2·Y = (3 + 2√2)^k (2 + √2) of X² − 2Y² = 2,
// with n = (X − 2)²(X + 2)².
struct PellExample {
  unsigned k = 0;
  Int X;
  Int Y;
  Int n;
  // [(X − 2)(X + 2), (X + 2)², 2(Y + 1)²]
  std::array<Int, 3> window_divisors;

  Int root() const { return window_divisors[0]; }
  // Every family invariant, checked exactly. Returns the first failure.
  std::optional<std::string> Violation() const;
};

// Throws kDegenerateIndex for k = 0 and kInternal if an invariant fails.
PellExample PellFamily(unsigned k);

// Factorization of (X − 2)(X + 2) assembled from its two factors.
Factorization PellRootFactorization(const PellExample& ex,
                                    const FactorBudget& budget = {});

struct PellEquationRow {
  Int mu;     // μᵢ
  Int base;   // 2xᵢ + cᵢ
  Int rhs;    // μᵢcᵢ²
  Int mu_tilde;
  Int scaled_base;  // tᵢ(2xᵢ + cᵢ)
  Int scaled_rhs;   // μ̃ᵢtᵢ²cᵢ²
};

// μ₁U₁² − μⱼUⱼ² = μ₁c₁² − μⱼcⱼ² for j ∈ {2, 3}, plus the squarefree form.
struct PellSystem {
  Int N;
  std::array<PellEquationRow, 3> rows;
  bool squarefree_coeffs_distinct = false;
  bool rhs_products_distinct = false;

  // rhs of the equation pairing row 0 with row j (j = 1 or 2).
  Int Rhs(std::size_t j) const { return rows[0].rhs - rows[j].rhs; }
  Int Lhs(std::size_t j) const;
  Int ScaledLhs(std::size_t j) const;
  Int ScaledRhs(std::size_t j) const {
    return rows[0].scaled_rhs - rows[j].scaled_rhs;
  }
  bool IdentitiesHold() const;
};

// decs must be three decompositions of one N ordered by strictly
// ascending d. Throws kArityError or kMixedN.
PellSystem BuildPellSystem(const std::vector<MuXY>& decs);

// ln of the Turk-type bound
//   C·M²·(ln M)³·(M ln M)·ln(M ln M),  M = 4c².
double TurkLogBound(double c, double constant = 1.0);
double TurkLogBound(const Rational& c, double constant = 1.0);

// C·c⁶·(ln c)⁵. Throws kDomainError for c ≤ 1.
double TheoremLogThreshold(double c, double constant = 1.0);
double TheoremLogThreshold(const Rational& c, double constant = 1.0);

}  // namespace nearsq
