#include "maskforge/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <string>
#include <numeric>

#include "maskforge/error.hpp"

namespace maskforge {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::NotDilation: return "NotDilation";
    case ErrorKind::UserDigitsInvalid: return "UserDigitsInvalid";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonIntegerFrequencies: return "NonIntegerFrequencies";
    case ErrorKind::WrongCount: return "WrongCount";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::NotInZ0: return "NotInZ0";
    case ErrorKind::NotInClass: return "NotInClass";
    case ErrorKind::MethodDisagreement: return "MethodDisagreement";
    case ErrorKind::InternalIdentityViolation: return "InternalIdentityViolation";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
  }
  return "Unknown";
}

namespace {

bool valid_integer_text(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer_text(num) || !valid_integer_text(den) || den.front() == '-' || den.front() == '+') {
    throw MaskError(ErrorKind::Parse, "not a rational: '" + std::string(text) + "'");
  }
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  Integer p(n, 10);
  Integer q(std::string(den), 10);
  if (q == 0) throw MaskError(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

Rational make_rational(long long num, long long den) {
  Rational r{Integer(static_cast<long>(num)), Integer(static_cast<long>(den))};
  r.canonicalize();
  return r;
}

bool is_integral(const RatVec& v) {
  for (const auto& x : v) {
    if (x.get_den() != 1) return false;
  }
  return true;
}

IntVec to_int_vec(const RatVec& v) {
  IntVec out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (x.get_den() != 1 || !x.get_num().fits_slong_p()) {
      throw MaskError(ErrorKind::NonIntegerFrequencies, "vector entry " + x.get_str() + " is not a machine integer");
    }
    out.push_back(x.get_num().get_si());
  }
  return out;
}

RatVec to_rat_vec(const IntVec& v) {
  RatVec out;
  out.reserve(v.size());
  for (long long x : v) out.emplace_back(make_rational(x));
  return out;
}

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }
long long lcm_ll(long long a, long long b) { return std::lcm(a, b); }

long long floor_mod(long long a, long long m) {
  if (m < 0) m = -m;
  long long r = a % m;
  return r < 0 ? r + m : r;
}

RationalInterval operator+(RationalInterval a, const RationalInterval& b) {
  a += b;
  return a;
}

RationalInterval scale(const RationalInterval& a, const Rational& nonneg) {
  return {a.lo * nonneg, a.hi * nonneg};
}

RationalInterval multiply_nonneg(const RationalInterval& a, const RationalInterval& b) {
  return {a.lo * b.lo, a.hi * b.hi};
}

RationalInterval max(const RationalInterval& a, const RationalInterval& b) {
  return {a.lo > b.lo ? a.lo : b.lo, a.hi > b.hi ? a.hi : b.hi};
}

std::string to_string(const RationalInterval& iv) {
  if (iv.is_exact()) return iv.lo.get_str();
  return "[" + iv.lo.get_str() + ", " + iv.hi.get_str() + "]";
}

int default_precision_bits() {
  const char* env = std::getenv("MASKFORGE_PRECISION_BITS");
  if (env == nullptr) return 128;
  try {
    const int bits = std::stoi(env);
    return bits >= 32 ? bits : 128;
  } catch (const std::exception&) {
    return 128;
  }
}

}  // namespace maskforge
