#include "nearsq/rational.hpp"

#include <string>

#include "nearsq/error.hpp"

namespace nearsq {

namespace {

Int ParseInt(std::string_view digits, std::string_view whole) {
  if (digits.empty() || digits.find_first_not_of("0123456789") !=
                            std::string_view::npos) {
    throw Error(Errc::kInvalidArgument,
                "not a rational of the form p or p/s: '" + std::string(whole) +
                    "'");
  }
  return Int(std::string(digits), 10);
}

}  // namespace

Rational::Rational(const Int& p, const Int& s) {
  if (s == 0) throw Error(Errc::kInvalidArgument, "zero denominator");
  q_ = mpq_class(p, s);
  q_.canonicalize();
}

Rational Rational::Parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(ParseInt(text, text), 1);
  return Rational(ParseInt(text.substr(0, slash), text),
                  ParseInt(text.substr(slash + 1), text));
}

std::string Rational::ToString() const {
  return num().get_str() + "/" + den().get_str();
}

}  // namespace nearsq
