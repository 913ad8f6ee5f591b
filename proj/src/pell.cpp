#include "nearsq/pell.hpp"

#include <cmath>
#include <string>

#include "nearsq/error.hpp"
#include "nearsq/window.hpp"

namespace nearsq {

std::optional<std::string> PellExample::Violation() const {
  if (X * X - 2 * Y * Y != 2) return "X^2 - 2Y^2 != 2";
  if (mpz_odd_p(X.get_mpz_t()) || mpz_even_p(Y.get_mpz_t())) {
    return "parity: X must be even and Y odd";
  }
  const Int root = (X - 2) * (X + 2);
  if (root != 2 * (Y - 1) * (Y + 1)) return "(X-2)(X+2) != 2(Y-1)(Y+1)";
  if (n != root * root) return "n != (X-2)^2 (X+2)^2";
  if (n != 4 * (Y - 1) * (Y - 1) * (Y + 1) * (Y + 1)) {
    return "n != 4(Y-1)^2 (Y+1)^2";
  }
  const std::array<Int, 3> expected{root, (X + 2) * (X + 2),
                                    2 * (Y + 1) * (Y + 1)};
  if (window_divisors != expected) return "window divisors out of order";
  for (const Int& q : window_divisors) {
    if (mpz_divisible_p(n.get_mpz_t(), q.get_mpz_t()) == 0) {
      return q.get_str() + " does not divide n";
    }
    // √n ≤ q ≤ √n + 5·n^(1/4) with √n = root, squared out.
    if (q < root || (q - root) * (q - root) > 25 * root) {
      return q.get_str() + " lies outside [sqrt(n), sqrt(n) + 5 n^(1/4)]";
    }
  }
  return std::nullopt;
}

PellExample PellFamily(unsigned k) {
  if (k == 0) {
    throw Error(Errc::kDegenerateIndex, "k = 0 gives X = 2 and n = 0");
  }
  Int X = 2, Y = 1;
  for (unsigned i = 0; i < k; ++i) {
    Int next_x = 3 * X + 4 * Y;
    Y = 2 * X + 3 * Y;
    X = std::move(next_x);
  }
  PellExample ex;
  ex.k = k;
  ex.X = X;
  ex.Y = Y;
  const Int root = (X - 2) * (X + 2);
  ex.n = root * root;
  ex.window_divisors = {root, (X + 2) * (X + 2), 2 * (Y + 1) * (Y + 1)};
  if (auto bad = ex.Violation()) {
    throw Error(Errc::kInternal,
                "family member k = " + std::to_string(k) + ": " + *bad);
  }
  return ex;
}

Factorization PellRootFactorization(const PellExample& ex,
                                    const FactorBudget& budget) {
  return Factorize(ex.X - 2, budget) * Factorize(ex.X + 2, budget);
}

Int PellSystem::Lhs(std::size_t j) const {
  return rows[0].mu * rows[0].base * rows[0].base -
         rows[j].mu * rows[j].base * rows[j].base;
}

Int PellSystem::ScaledLhs(std::size_t j) const {
  return rows[0].mu_tilde * rows[0].scaled_base * rows[0].scaled_base -
         rows[j].mu_tilde * rows[j].scaled_base * rows[j].scaled_base;
}

bool PellSystem::IdentitiesHold() const {
  for (std::size_t j : {1u, 2u}) {
    if (Lhs(j) != Rhs(j) || ScaledLhs(j) != ScaledRhs(j)) return false;
    if (ScaledRhs(j) != Rhs(j)) return false;
  }
  return true;
}

PellSystem BuildPellSystem(const std::vector<MuXY>& decs) {
  if (decs.size() != 3) {
    throw Error(Errc::kArityError, "a Pell system needs exactly 3 "
                                   "decompositions, got " +
                                       std::to_string(decs.size()));
  }
  for (std::size_t i = 1; i < 3; ++i) {
    if (decs[i].source.N != decs[0].source.N) {
      throw Error(Errc::kMixedN, "decompositions come from N = " +
                                     decs[0].source.N.get_str() + " and " +
                                     decs[i].source.N.get_str());
    }
    if (decs[i].source.d <= decs[i - 1].source.d) {
      throw Error(Errc::kArityError,
                  "decompositions must come from distinct witnesses in "
                  "ascending d");
    }
  }
  PellSystem sys;
  sys.N = decs[0].source.N;
  for (std::size_t i = 0; i < 3; ++i) {
    const MuXY& m = decs[i];
    if (!m.IdentitiesHold()) {
      throw Error(Errc::kInvalidArgument, "decomposition " + std::to_string(i) +
                                              " fails its identities");
    }
    PellEquationRow& row = sys.rows[i];
    row.mu = m.mu;
    row.base = 2 * m.x + m.c_gap;
    row.rhs = m.mu * m.c_gap * m.c_gap;
    row.mu_tilde = m.mu_tilde;
    row.scaled_base = m.t * row.base;
    row.scaled_rhs = m.mu_tilde * m.t * m.t * m.c_gap * m.c_gap;
  }
  if (!sys.IdentitiesHold()) {
    throw Error(Errc::kInternal,
                "Pell substitution failed for N = " + sys.N.get_str());
  }
  const auto& r = sys.rows;
  sys.squarefree_coeffs_distinct =
      r[0].mu_tilde != r[1].mu_tilde && r[0].mu_tilde != r[2].mu_tilde;
  sys.rhs_products_distinct =
      r[0].mu_tilde * sys.ScaledRhs(2) != r[0].mu_tilde * sys.ScaledRhs(1);
  return sys;
}

double TurkLogBound(double c, double constant) {
  if (!(c >= 1.0) || !(constant > 0.0)) {
    throw Error(Errc::kDomainError, "Turk bound needs c >= 1 and C > 0");
  }
  const double m = 4.0 * c * c;
  const double log_m = std::log(m);
  return constant * m * m * log_m * log_m * log_m * (m * log_m) *
         std::log(m * log_m);
}

double TurkLogBound(const Rational& c, double constant) {
  return TurkLogBound(c.ToDouble(), constant);
}

double TheoremLogThreshold(double c, double constant) {
  if (!(c > 1.0) || !(constant > 0.0)) {
    throw Error(Errc::kDomainError, "threshold needs c > 1 and C > 0");
  }
  return constant * std::pow(c, 6) * std::pow(std::log(c), 5);
}

double TheoremLogThreshold(const Rational& c, double constant) {
  if (c.value() <= 1) {
    throw Error(Errc::kDomainError, "threshold needs c > 1");
  }
  return TheoremLogThreshold(c.ToDouble(), constant);
}

}  // namespace nearsq
