#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stripfold {

// All combinatorial coordinates in the library are exact rationals; floating
// point is confined to the numeric checking layer.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

std::string to_string(const Rat& r);

// Accepts "int" and "int/int" (optional sign, denominator positive after
// normalization).  Throws std::invalid_argument on anything else.
Rat parse_rational(std::string_view text);

// Largest integer <= r.
BigInt rat_floor(const Rat& r);

// Exact value of a finite double (dyadic rational).  Throws
// std::invalid_argument on NaN or infinity.
Rat rat_from_double(double d);

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a > b ? a : b; }
inline Rat rat_abs(const Rat& a) { return a < 0 ? Rat(-a) : a; }

// A rational extended with the two infinite endpoints.  Used for arc
// endpoints, where half-infinite and full-line intervals are first-class.
// Arithmetic is deliberately not provided; only ordering and finite access.
class ExtRat {
 public:
  ExtRat() : kind_(Kind::Finite), value_(0) {}
  explicit ExtRat(Rat v) : kind_(Kind::Finite), value_(std::move(v)) {}
  explicit ExtRat(long v) : kind_(Kind::Finite), value_(v) {}

  static ExtRat neg_inf() { return ExtRat(Kind::NegInf); }
  static ExtRat pos_inf() { return ExtRat(Kind::PosInf); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }

  // Finite value; throws if infinite.
  const Rat& finite() const {
    if (!is_finite()) throw std::logic_error("ExtRat: infinite endpoint has no finite value");
    return value_;
  }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::Finite || a.value_ == b.value_;
  }
  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ == Kind::NegInf) return b.kind_ != Kind::NegInf;
    if (a.kind_ == Kind::PosInf) return false;
    if (b.kind_ == Kind::NegInf) return false;
    if (b.kind_ == Kind::PosInf) return true;
    return a.value_ < b.value_;
  }
  friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }
  friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
  friend bool operator<=(const ExtRat& a, const ExtRat& b) { return !(b < a); }
  friend bool operator>=(const ExtRat& a, const ExtRat& b) { return !(a < b); }

 private:
  enum class Kind { NegInf, Finite, PosInf };
  explicit ExtRat(Kind k) : kind_(k), value_(0) {}
  Kind kind_;
  Rat value_;
};

std::string to_string(const ExtRat& e);

// Accepts "-inf", "+inf", or anything parse_rational accepts.
ExtRat parse_ext_rational(std::string_view text);

}  // namespace stripfold
