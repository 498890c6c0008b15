#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gerbecoh {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

enum class ErrorKind {
  InvalidArgument,
  NotAGroup,
  NotAHomomorphism,
  NotASubgroup,
  NotAnOverlattice,
  NotGammaStable,
  InfiniteModule,
  IncompatibleData,
  IncompatibleTower,
  DegreeOutOfRange,
  InfiniteCoefficientsInDegreeMinus2,
  NotACycle,
  NotExact,
  MismatchedCoefficients,
  WrongDegrees,
  NotInLevel,
  NotADivisor,
  MalformedInstance,
  PlusConditionViolated,
  MalformedCandidate,
  MismatchedZ,
  ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotAGroup: return "NotAGroup";
    case ErrorKind::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorKind::NotASubgroup: return "NotASubgroup";
    case ErrorKind::NotAnOverlattice: return "NotAnOverlattice";
    case ErrorKind::NotGammaStable: return "NotGammaStable";
    case ErrorKind::InfiniteModule: return "InfiniteModule";
    case ErrorKind::IncompatibleData: return "IncompatibleData";
    case ErrorKind::IncompatibleTower: return "IncompatibleTower";
    case ErrorKind::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorKind::InfiniteCoefficientsInDegreeMinus2: return "InfiniteCoefficientsInDegreeMinus2";
    case ErrorKind::NotACycle: return "NotACycle";
    case ErrorKind::NotExact: return "NotExact";
    case ErrorKind::MismatchedCoefficients: return "MismatchedCoefficients";
    case ErrorKind::WrongDegrees: return "WrongDegrees";
    case ErrorKind::NotInLevel: return "NotInLevel";
    case ErrorKind::NotADivisor: return "NotADivisor";
    case ErrorKind::MalformedInstance: return "MalformedInstance";
    case ErrorKind::PlusConditionViolated: return "PlusConditionViolated";
    case ErrorKind::MalformedCandidate: return "MalformedCandidate";
    case ErrorKind::MismatchedZ: return "MismatchedZ";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += (m < 0 ? -m : m);
  return r;
}

inline Integer abs_value(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(Integer a, Integer b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    Integer t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs_value(a / gcd(a, b) * b);
}

inline bool is_integral(const Rational& q) { return denominator(q) == 1; }

inline std::string to_string(const Integer& a) { return a.str(); }

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p", "-p" or "p/q".
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto valid_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto to_int = [](std::string_view s) {
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    return Integer(std::string(s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!valid_int(text)) fail(ErrorKind::ParseError, "not a rational: '" + std::string(text) + "'");
    return Rational(to_int(text));
  }
  auto num = trim(text.substr(0, slash));
  auto den = trim(text.substr(slash + 1));
  if (!valid_int(num) || !valid_int(den))
    fail(ErrorKind::ParseError, "not a rational: '" + std::string(text) + "'");
  Integer d = to_int(den);
  if (d == 0) fail(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  return Rational(to_int(num), d);
}

/// An element of Q/Z, stored as the unique representative in [0, 1).
class QZValue {
 public:
  QZValue() = default;
  explicit QZValue(const Rational& q) : value_(reduce(q)) {}
  QZValue(const Integer& num, const Integer& den) : value_(reduce(Rational(num, den))) {}

  const Rational& value() const noexcept { return value_; }
  Integer numerator() const { return boost::multiprecision::numerator(value_); }
  Integer denominator() const { return boost::multiprecision::denominator(value_); }
  bool is_zero() const { return value_ == 0; }

  QZValue operator+(const QZValue& o) const { return QZValue(value_ + o.value_); }
  QZValue operator-(const QZValue& o) const { return QZValue(value_ - o.value_); }
  QZValue operator-() const { return QZValue(-value_); }
  QZValue& operator+=(const QZValue& o) { return *this = *this + o; }
  QZValue& operator-=(const QZValue& o) { return *this = *this - o; }
  friend QZValue operator*(const Integer& k, const QZValue& v) { return QZValue(Rational(k) * v.value_); }
  bool operator==(const QZValue& o) const { return value_ == o.value_; }
  bool operator!=(const QZValue& o) const { return !(*this == o); }
  bool operator<(const QZValue& o) const { return value_ < o.value_; }

  std::string str() const { return to_string(value_); }

 private:
  static Rational reduce(const Rational& q) {
    Integer n = boost::multiprecision::numerator(q);
    Integer d = boost::multiprecision::denominator(q);
    return Rational(mod_floor(n, d), d);
  }

  Rational value_{0};
};

}  // namespace gerbecoh
