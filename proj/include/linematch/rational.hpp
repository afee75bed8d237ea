#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace linematch {

using Int = boost::multiprecision::cpp_int;

/// Exact rational number, always in lowest terms with positive denominator.
/// All arithmetic in this library is exact; no floating point anywhere in
/// the algorithms (doubles appear only as display approximations).
using Rational = boost::multiprecision::cpp_rational;

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(Int num, Int den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);  // cpp_rational canonicalizes to lowest terms
}

/// Parses "p/q", plain integers, and decimal strings ("-3", "2.5", ".25").
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw parse_error("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      Int num(s.substr(0, slash));
      Int den(s.substr(slash + 1));
      return make_rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(Int(s));
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (frac.find_first_not_of("0123456789") != std::string::npos)
      throw parse_error("bad decimal digits in '" + s + "'");
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole == "-" || whole == "+" || whole.empty()) whole += "0";
    Int scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Int num = Int(whole) * scale;
    Int fpart = frac.empty() ? Int(0) : Int(frac);
    num += neg ? -fpart : fpart;
    return make_rational(num, scale);
  } catch (const std::runtime_error&) {
    throw parse_error("cannot parse rational '" + s + "'");
  }
}

/// "p/q" for non-integers, bare "p" for integers; round-trips bit-exactly.
inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

/// Display-only approximation (reports, CSV); never used in computations.
inline double approx(const Rational& r) { return static_cast<double>(r); }

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace linematch
