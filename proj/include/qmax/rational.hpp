#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>

namespace qmax {

using Rat = mpq_class;
using Int = mpz_class;

// Bad user input (flag values, out-of-range parameters).
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation that started from valid input but could not be completed
// reliably (ill-conditioned solve, root count mismatch, guard trip, ...).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline double to_double(const Rat& r) { return r.get_d(); }

inline Rat rat_pow(Rat base, unsigned e) {
  Rat acc(1);
  while (e) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1u;
  }
  return acc;
}

namespace detail {
inline bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}
}  // namespace detail

// Accepts "7", "-7", "3/8", "0.125": decimals become n/10^k exactly.
inline Rat parse_rational(const std::string& in) {
  std::string s;
  for (char c : in)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw validation_error("empty rational literal");

  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = (s[0] == '-');
    s.erase(0, 1);
  }

  Rat value;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den))
      throw validation_error("malformed rational '" + in + "'");
    Int d(den, 10);
    if (d == 0) throw validation_error("zero denominator in '" + in + "'");
    value = Rat(Int(num, 10), d);
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    const std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if ((!whole.empty() && !detail::all_digits(whole)) || !detail::all_digits(frac))
      throw validation_error("malformed decimal '" + in + "'");
    Int scale(1);
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Int units = whole.empty() ? Int(0) : Int(whole, 10);
    value = Rat(units * scale + Int(frac, 10), scale);
  } else {
    if (!detail::all_digits(s)) throw validation_error("malformed rational '" + in + "'");
    value = Rat(Int(s, 10));
  }
  value.canonicalize();
  if (neg) value = -value;
  return value;
}

}  // namespace qmax
