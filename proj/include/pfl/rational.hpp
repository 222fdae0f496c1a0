// pfl: exact rational scalars.
//
// The whole engine works over Q with arbitrary-precision integers; GMP's
// mpq_class already maintains the canonical form we need (reduced fraction,
// positive denominator, zero stored as 0/1).

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pfl {

using Rational = mpq_class;
using Integer = mpz_class;

// Error kinds used across the library.  input_error: malformed user input
// (documents, dimensions, flags).  precondition_error: an operation's stated
// precondition does not hold for the given data.  internal_error: a
// cross-check that should be unconditionally true failed, i.e. a bug.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct internal_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational rational(long num, long den = 1) {
  if (den == 0) throw input_error("rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p", "-p", "p/q" with optional surrounding whitespace.
inline Rational parse_rational(const std::string& text) {
  std::size_t a = text.find_first_not_of(" \t");
  std::size_t b = text.find_last_not_of(" \t");
  if (a == std::string::npos) throw input_error("rational: empty string");
  std::string body = text.substr(a, b - a + 1);
  Rational r;
  if (r.set_str(body, 10) != 0)
    throw input_error("rational: cannot parse '" + text + "'");
  if (r.get_den() == 0) throw input_error("rational: zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

// Canonical text form: "p" when the denominator is 1, else "p/q".
inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace pfl
