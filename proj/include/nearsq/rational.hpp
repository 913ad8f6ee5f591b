#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace nearsq {

using Int = mpz_class;

// Exact positive rational p/s kept in lowest terms. Used for the window
// coefficient c so every comparison involving c√N can be squared out.
class Rational {
 public:
  Rational() : q_(1) {}
  Rational(long p) : q_(p) {}  // NOLINT(google-explicit-constructor)
  Rational(const Int& p, const Int& s);

  // Accepts "p" or "p/s" with decimal integers.
  static Rational Parse(std::string_view text);

  Int num() const { return q_.get_num(); }
  Int den() const { return q_.get_den(); }
  double ToDouble() const { return q_.get_d(); }
  const mpq_class& value() const { return q_; }

  // Always "p/s", including s = 1.
  std::string ToString() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.q_ == b.q_;
  }

 private:
  mpq_class q_;
};

}  // namespace nearsq
