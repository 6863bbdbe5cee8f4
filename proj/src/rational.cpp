#include "stripfold/rational.hpp"

#include <cctype>
#include <cmath>

namespace stripfold {

std::string to_string(const Rat& r) {
  // cpp_rational prints "p/q" or "p"; that is exactly the file format.
  return r.str();
}

static bool is_integer_token(std::string_view s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rat parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_token(text))
      throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    return Rat(std::string(text));
  }
  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den))
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  BigInt d{std::string(den)};
  if (d == 0) throw std::invalid_argument("malformed rational (zero denominator): '" + std::string(text) + "'");
  return Rat(BigInt(std::string(num)), d);
}

BigInt rat_floor(const Rat& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);  // always > 0
  BigInt q = num / den;
  if (q * den != num && num < 0) --q;
  return q;
}

Rat rat_from_double(double d) {
  if (!std::isfinite(d)) throw std::invalid_argument("rat_from_double: value is not finite");
  int exp = 0;
  double mant = std::frexp(d, &exp);  // d = mant * 2^exp, |mant| in [1/2, 1)
  auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rat r(scaled);
  int shift = exp - 53;
  if (shift > 0) r *= Rat(BigInt(1) << shift);
  if (shift < 0) r /= Rat(BigInt(1) << -shift);
  return r;
}

std::string to_string(const ExtRat& e) {
  if (e.is_neg_inf()) return "-inf";
  if (e.is_pos_inf()) return "+inf";
  return to_string(e.finite());
}

ExtRat parse_ext_rational(std::string_view text) {
  if (text == "-inf") return ExtRat::neg_inf();
  if (text == "+inf" || text == "inf") return ExtRat::pos_inf();
  return ExtRat(parse_rational(text));
}

}  // namespace stripfold
