#include "nearsq/decompose.hpp"

#include <algorithm>

#include "nearsq/arith.hpp"
#include "nearsq/error.hpp"

namespace nearsq {

namespace {

Int Pow(const Int& base, unsigned long e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

Int Gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

bool Divides(const Int& d, const Int& n) {
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

// (u, v) from λ(u − v)² = lo_part and λ(u + v)² = hi_part, if integral.
std::optional<std::pair<Int, Int>> SolveUV(const Int& lambda,
                                           const Int& lo_part,
                                           const Int& hi_part) {
  if (!Divides(lambda, lo_part) || !Divides(lambda, hi_part)) return {};
  const auto diff = Isqrt(lo_part / lambda);
  const auto sum = Isqrt(hi_part / lambda);
  if (!diff.exact || !sum.exact || diff.root < 1) return {};
  const Int twice_u = sum.root + diff.root;
  if (mpz_odd_p(twice_u.get_mpz_t())) return {};
  const Int u = twice_u / 2;
  const Int v = sum.root - u;
  if (v < 1) return {};
  return std::pair{u, v};
}

}  // namespace

bool PythParam::Reproduces(const PythTriple& tr) const {
  if (!(u > v && v >= 1 && lambda >= 1)) return false;
  const Int diff = lambda * (u * u - v * v);
  const Int cross = lambda * 2 * u * v;
  if (lambda * (u * u + v * v) != tr.h) return false;
  return case_tag == PythCase::kCase1 ? (diff == tr.a && cross == tr.b)
                                      : (diff == tr.b && cross == tr.a);
}

bool MuXY::IdentitiesHold() const {
  const Int& N = source.N;
  return 2 * N == mu * x * y && 2 * (N - source.d) == mu * x * x &&
         2 * (N + source.e) == mu * y * y && y > x && x >= 1 &&
         c_gap == y - x && mu == mu_tilde * t * t;
}

bool MuXY::Feasible(const Rational& c) const {
  const Int p = c.num(), s = c.den();
  return mu * s * s <= 4 * p * p && c_gap >= 1 && c_gap * s <= 2 * p;
}

bool AlmostSquareWitness::IdentitiesHold() const {
  const Int excess = f + h_off - g;
  return m * (m - f) == product && (m - g) * (m + h_off) == product &&
         excess * m == g * h_off && excess >= 1;
}

PythTriple MakePythTriple(const PairWitness& w) {
  PythTriple tr{2 * w.d + w.l, 2 * w.N, 2 * w.N + w.l, w};
  if (tr.a * tr.a + tr.b * tr.b != tr.h * tr.h || tr.h - tr.b != w.l) {
    throw Error(Errc::kInternal,
                "Pythagorean identity failed for N = " + w.N.get_str() +
                    ", d = " + w.d.get_str());
  }
  return tr;
}

std::vector<PythParam> Parametrizations(const PythTriple& tr) {
  const Int g = Gcd(Gcd(tr.a, tr.b), tr.h);
  const Factorization gf = Factorize(g);
  std::vector<PythParam> out;
  for (const Int& lambda : DivisorsInRange(gf, 1, g)) {
    // Case1: h − b = λ(u − v)², h + b = λ(u + v)²; Case2 swaps a and b.
    if (auto uv = SolveUV(lambda, tr.h - tr.b, tr.h + tr.b)) {
      PythParam p{lambda, uv->first, uv->second, PythCase::kCase1};
      if (p.Reproduces(tr)) out.push_back(std::move(p));
    }
    if (auto uv = SolveUV(lambda, tr.h - tr.a, tr.h + tr.a)) {
      PythParam p{lambda, uv->first, uv->second, PythCase::kCase2};
      if (p.Reproduces(tr)) out.push_back(std::move(p));
    }
  }
  if (out.empty()) {
    throw Error(Errc::kEmptyParametrization,
                "no (lambda, u, v) for (" + tr.a.get_str() + ", " +
                    tr.b.get_str() + ", " + tr.h.get_str() + ")");
  }
  return out;
}

std::vector<MuXY> DecompositionFamily(const PairWitness& w) {
  const Int A = 2 * (w.N - w.d);
  const Int B = 2 * (w.N + w.e);
  const SquarefreeSplit split = SquarefreeSplitOf(A);
  const Int& kernel = split.kernel;
  if (!Divides(kernel, B) || !IsPerfectSquare(B / kernel)) {
    throw Error(Errc::kKernelMismatch,
                "2(N-d) = " + A.get_str() + " and 2(N+e) = " + B.get_str() +
                    " have different squarefree kernels");
  }
  const Int a = split.t;
  const Int b = Isqrt(B / kernel).root;
  const Int g = Gcd(a, b);

  std::vector<MuXY> out;
  for (const Int& t : DivisorsInRange(Factorize(g), 1, g)) {
    MuXY m;
    m.mu = kernel * t * t;
    m.x = a / t;
    m.y = b / t;
    m.c_gap = m.y - m.x;
    m.mu_tilde = kernel;
    m.t = t;
    m.source = w;
    if (!m.IdentitiesHold()) {
      throw Error(Errc::kInternal, "decomposition identities failed for N = " +
                                       w.N.get_str() + ", d = " +
                                       w.d.get_str());
    }
    out.push_back(std::move(m));
  }
  return out;
}

Decompositions Decompose(const PairWitness& w, const Rational& c) {
  Decompositions out;
  for (auto& m : DecompositionFamily(w)) {
    if (m.Feasible(c)) out.all.push_back(std::move(m));
  }
  if (out.all.empty()) {
    throw Error(Errc::kNoFeasibleDecomposition,
                "no (mu, x, y) with mu <= 4c^2 and gap <= 2c for N = " +
                    w.N.get_str() + ", d = " + w.d.get_str());
  }
  out.canonical = out.all.front();
  return out;
}

std::optional<AlmostSquareWitness> MakeAlmostSquareWitness(
    std::pair<Int, Int> p, std::pair<Int, Int> q) {
  const Int product = p.first * p.second;
  if (product != q.first * q.second) {
    throw Error(Errc::kProductMismatch,
                product.get_str() + " != " + Int(q.first * q.second).get_str());
  }
  if (p.first == q.first) return std::nullopt;
  if (q.first < p.first) std::swap(p, q);
  // Now x_i < x_j < y_j < y_i with (x_i, y_i) = p and (x_j, y_j) = q.
  AlmostSquareWitness w;
  w.m = q.second;
  w.f = q.second - q.first;
  w.g = q.second - p.first;
  w.h_off = p.second - q.second;
  w.product = product;
  if (!w.IdentitiesHold()) {
    throw Error(Errc::kInternal, "almost-square identities failed");
  }
  return w;
}

Lemma1Report CheckLemma1(const std::vector<MuXY>& decs) {
  Lemma1Report report;
  for (std::size_t i = 0; i < decs.size(); ++i) {
    const Int lhs = decs[i].mu * decs[i].c_gap * decs[i].c_gap;
    for (std::size_t j = i + 1; j < decs.size(); ++j) {
      if (decs[i].source.d == decs[j].source.d) continue;
      if (lhs == decs[j].mu * decs[j].c_gap * decs[j].c_gap) {
        report.ok = false;
        report.colliding_pair = std::pair{i, j};
        return report;
      }
    }
  }
  return report;
}

MuDistinctness CheckMuDistinctness(const std::vector<MuXY>& decs,
                                   const Rational& c, const Int& N) {
  MuDistinctness report;
  const Int p = c.num(), s = c.den();
  report.raw_gate = N * Pow(s, 6) > 32 * Pow(p, 6);
  report.squarefree_gate = N * Pow(s, 10) > 512 * Pow(p, 10);

  for (std::size_t i = 0; i < decs.size(); ++i) {
    const MuXY& di = decs[i];
    for (std::size_t j = i + 1; j < decs.size(); ++j) {
      const MuXY& dj = decs[j];
      if (di.source.d == dj.source.d) continue;
      if (di.mu == dj.mu) {
        report.raw_ok = false;
        report.violations.push_back(
            {MuLevel::kRaw, i, j, di.mu,
             MakeAlmostSquareWitness({di.x, di.y}, {dj.x, dj.y})});
      }
      if (di.mu_tilde == dj.mu_tilde) {
        report.squarefree_ok = false;
        report.violations.push_back(
            {MuLevel::kSquarefree, i, j, di.mu_tilde,
             MakeAlmostSquareWitness({di.t * di.x, di.t * di.y},
                                     {dj.t * dj.x, dj.t * dj.y})});
      }
    }
  }
  return report;
}

}  // namespace nearsq
