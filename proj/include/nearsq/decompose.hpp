#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nearsq/rational.hpp"
#include "nearsq/window.hpp"

namespace nearsq {

// (a, b, h) = (2d + l, 2N, 2N + l) with a² + b² = h².
struct PythTriple {
  Int a;
  Int b;
  Int h;
  PairWitness source;
};

enum class PythCase { kCase1, kCase2 };

// Case1: a = λ(u² − v²), b = 2λuv.  Case2: b = λ(u² − v²), a = 2λuv.
// Both: h = λ(u² + v²).
struct PythParam {
  Int lambda;
  Int u;
  Int v;
  PythCase case_tag = PythCase::kCase1;

  bool Reproduces(const PythTriple& tr) const;

  friend bool operator==(const PythParam&, const PythParam&) = default;
};

// 2N = μxy, 2(N − d) = μx², 2(N + e) = μy², with μ = μ̃t², μ̃ squarefree.
struct MuXY {
  Int mu;
  Int x;
  Int y;
  Int c_gap;     // y − x
  Int mu_tilde;  // squarefree part of mu
  Int t;         // mu = mu_tilde · t²
  PairWitness source;

  bool IdentitiesHold() const;
  // μ ≤ 4c² and 1 ≤ y − x ≤ 2c.
  bool Feasible(const Rational& c) const;
};

// Two factorizations m(m − f) = (m − g)(m + h_off) of the same product.
struct AlmostSquareWitness {
  Int m;
  Int f;
  Int g;
  Int h_off;
  Int product;

  bool IdentitiesHold() const;
};

PythTriple MakePythTriple(const PairWitness& w);

// Every (λ, u, v, case) reproducing tr; ascending λ then Case1 before Case2.
// Throws kEmptyParametrization if none exists.
std::vector<PythParam> Parametrizations(const PythTriple& tr);

// Every (μ, x, y) for the witness ignoring the size constraints, ascending
// μ. Built from A = 2(N − d) = s·a², B = 2(N + e) = s·b² with s the shared
// squarefree kernel; entries are (s·t², a/t, b/t) for t | gcd(a, b).
std::vector<MuXY> DecompositionFamily(const PairWitness& w);

struct Decompositions {
  std::vector<MuXY> all;  // feasible entries, ascending μ
  MuXY canonical;         // all.front()
};

// Throws kNoFeasibleDecomposition when nothing satisfies the constraints.
Decompositions Decompose(const PairWitness& w, const Rational& c);

// Witness for the pairs (x, y) with x·y equal, or nullopt when they coincide.
std::optional<AlmostSquareWitness> MakeAlmostSquareWitness(
    std::pair<Int, Int> p, std::pair<Int, Int> q);

struct Lemma1Report {
  bool ok = true;
  std::optional<std::pair<std::size_t, std::size_t>> colliding_pair;
};

// μc² pairwise distinct across entries with distinct source d.
Lemma1Report CheckLemma1(const std::vector<MuXY>& decs);

enum class MuLevel { kRaw, kSquarefree };

struct MuViolation {
  MuLevel level = MuLevel::kRaw;
  std::size_t first = 0;
  std::size_t second = 0;
  Int shared;  // μ or μ̃
  // Present when the two (scaled) factor pairs differ.
  std::optional<AlmostSquareWitness> almost_square;
};

struct MuDistinctness {
  bool raw_ok = true;
  bool squarefree_ok = true;
  bool raw_gate = false;         // N > 32c⁶
  bool squarefree_gate = false;  // N > 512c¹⁰
  std::vector<MuViolation> violations;
};

// Compares entries from distinct witnesses. Raw level compares μ and the
// pairs (x, y); squarefree level compares μ̃ and the pairs (tx, ty).
MuDistinctness CheckMuDistinctness(const std::vector<MuXY>& decs,
                                   const Rational& c, const Int& N);

}  // namespace nearsq
