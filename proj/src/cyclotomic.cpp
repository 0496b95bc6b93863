#include "maskforge/cyclotomic.hpp"

#include <mpfr.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "maskforge/error.hpp"

namespace maskforge {

namespace {

using Poly = std::vector<long long>;

// Exact division of integer polynomials; divisor must be monic.
Poly divide_monic(Poly num, const Poly& den) {
  const std::size_t dn = den.size() - 1;
  if (num.size() < den.size()) return {0};
  Poly quot(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    const long long c = num[i];
    if (c == 0) continue;
    quot[i - dn] = c;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  return quot;
}

const Poly& phi(long long n) {
  static std::recursive_mutex mutex;
  static std::map<long long, Poly> cache;
  std::lock_guard<std::recursive_mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  // x^n - 1 divided by Phi_d for every proper divisor d of n.
  Poly p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (long long d = 1; d < n; ++d) {
    if (n % d == 0) p = divide_monic(p, phi(d));
  }
  return cache.emplace(n, std::move(p)).first->second;
}

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

// Closed interval of MPFR numbers with outward rounding.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec) : lo_(prec), hi_(prec), prec_(prec) {
    mpfr_set_zero(lo_.get(), 1);
    mpfr_set_zero(hi_.get(), 1);
  }
  mpfr_ptr lo() { return lo_.get(); }
  mpfr_ptr hi() { return hi_.get(); }
  mpfr_srcptr lo() const { return lo_.get(); }
  mpfr_srcptr hi() const { return hi_.get(); }

  void set_rational(const Rational& q) {
    mpfr_set_q(lo_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_.get(), q.get_mpq_t(), MPFR_RNDU);
  }

  void add(const Interval& o) {
    mpfr_add(lo_.get(), lo_.get(), o.lo(), MPFR_RNDD);
    mpfr_add(hi_.get(), hi_.get(), o.hi(), MPFR_RNDU);
  }

  void assign_product(const Interval& a, const Interval& b) {
    Mpfr t(prec_);
    Mpfr lo(prec_);
    Mpfr hi(prec_);
    bool first = true;
    for (mpfr_srcptr x : {a.lo(), a.hi()}) {
      for (mpfr_srcptr y : {b.lo(), b.hi()}) {
        mpfr_mul(t.get(), x, y, MPFR_RNDD);
        if (first || mpfr_less_p(t.get(), lo.get())) mpfr_set(lo.get(), t.get(), MPFR_RNDN);
        mpfr_mul(t.get(), x, y, MPFR_RNDU);
        if (first || mpfr_greater_p(t.get(), hi.get())) mpfr_set(hi.get(), t.get(), MPFR_RNDN);
        first = false;
      }
    }
    mpfr_set(lo_.get(), lo.get(), MPFR_RNDN);
    mpfr_set(hi_.get(), hi.get(), MPFR_RNDN);
  }

  // Enclosure of x^2.
  void assign_square(const Interval& a) {
    Mpfr alo(prec_);
    Mpfr ahi(prec_);
    mpfr_abs(alo.get(), a.lo(), MPFR_RNDN);
    mpfr_abs(ahi.get(), a.hi(), MPFR_RNDN);
    mpfr_srcptr big = mpfr_greater_p(alo.get(), ahi.get()) ? alo.get() : ahi.get();
    mpfr_srcptr small = mpfr_greater_p(alo.get(), ahi.get()) ? ahi.get() : alo.get();
    mpfr_sqr(hi_.get(), big, MPFR_RNDU);
    if (mpfr_sgn(a.lo()) <= 0 && mpfr_sgn(a.hi()) >= 0) {
      mpfr_set_zero(lo_.get(), 1);
    } else {
      mpfr_sqr(lo_.get(), small, MPFR_RNDD);
    }
  }

 private:
  Mpfr lo_;
  Mpfr hi_;
  mpfr_prec_t prec_;
};

// Encloses cos and sin of 2*pi*k/n using |f(a) - f(b)| <= |a - b|.
void trig_enclosure(long long k, long long n, mpfr_prec_t prec, Interval& cos_out, Interval& sin_out) {
  Mpfr pi_lo(prec);
  Mpfr pi_hi(prec);
  mpfr_const_pi(pi_lo.get(), MPFR_RNDD);
  mpfr_const_pi(pi_hi.get(), MPFR_RNDU);
  Mpfr a(prec);
  Mpfr b(prec);
  mpfr_mul_si(a.get(), pi_lo.get(), 2 * k, MPFR_RNDD);
  mpfr_div_si(a.get(), a.get(), n, MPFR_RNDD);
  mpfr_mul_si(b.get(), pi_hi.get(), 2 * k, MPFR_RNDU);
  mpfr_div_si(b.get(), b.get(), n, MPFR_RNDU);
  Mpfr width(prec);
  mpfr_sub(width.get(), b.get(), a.get(), MPFR_RNDU);

  mpfr_cos(cos_out.lo(), a.get(), MPFR_RNDD);
  mpfr_sub(cos_out.lo(), cos_out.lo(), width.get(), MPFR_RNDD);
  mpfr_cos(cos_out.hi(), a.get(), MPFR_RNDU);
  mpfr_add(cos_out.hi(), cos_out.hi(), width.get(), MPFR_RNDU);

  mpfr_sin(sin_out.lo(), a.get(), MPFR_RNDD);
  mpfr_sub(sin_out.lo(), sin_out.lo(), width.get(), MPFR_RNDD);
  mpfr_sin(sin_out.hi(), a.get(), MPFR_RNDU);
  mpfr_add(sin_out.hi(), sin_out.hi(), width.get(), MPFR_RNDU);
}

Rational to_rational(mpfr_srcptr x) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), x);
  return q;
}

}  // namespace

std::vector<long long> cyclotomic_polynomial(long long order) {
  if (order < 1) throw MaskError(ErrorKind::DimensionMismatch, "cyclotomic order must be >= 1");
  return phi(order);
}

long long totient(long long order) {
  long long result = order;
  long long n = order;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

Cyclotomic::Cyclotomic() : order_(1), coords_(1) {}

Cyclotomic::Cyclotomic(const Rational& value) : order_(1), coords_{value} {}

Cyclotomic::Cyclotomic(long long value) : order_(1), coords_{make_rational(value)} {}

Cyclotomic Cyclotomic::root_of_unity(long long order, long long k) {
  if (order < 1) throw MaskError(ErrorKind::DimensionMismatch, "root of unity order must be >= 1");
  std::vector<Rational> coords(static_cast<std::size_t>(order));
  coords[static_cast<std::size_t>(floor_mod(k, order))] = 1;
  return from_coords(order, std::move(coords));
}

Cyclotomic Cyclotomic::exp_2pi_i(const Rational& q) {
  const Integer& den = q.get_den();
  Integer num = q.get_num() % den;
  if (num < 0) num += den;
  if (!den.fits_slong_p()) throw MaskError(ErrorKind::DimensionMismatch, "root of unity order too large");
  return root_of_unity(den.get_si(), num.get_si());
}

Cyclotomic Cyclotomic::from_coords(long long order, std::vector<Rational> coords) {
  if (order < 1 || coords.size() != static_cast<std::size_t>(order)) {
    throw MaskError(ErrorKind::DimensionMismatch, "coordinate vector length must equal the order");
  }
  Cyclotomic c;
  c.order_ = order;
  c.coords_ = std::move(coords);
  c.reduce();
  c.demote_if_rational();
  return c;
}

void Cyclotomic::reduce() {
  const auto& p = phi(order_);
  const std::size_t deg = p.size() - 1;
  Rational tmp;
  for (std::size_t i = coords_.size(); i-- > deg;) {
    if (coords_[i] == 0) continue;
    const Rational c = coords_[i];
    for (std::size_t j = 0; j <= deg; ++j) {
      if (p[j] == 0) continue;
      tmp = c * Rational(static_cast<long>(p[j]));
      coords_[i - deg + j] -= tmp;
    }
  }
}

void Cyclotomic::demote_if_rational() {
  if (order_ == 1) return;
  for (std::size_t i = 1; i < coords_.size(); ++i) {
    if (coords_[i] != 0) return;
  }
  Rational v = coords_[0];
  order_ = 1;
  coords_.assign(1, v);
}

bool Cyclotomic::is_zero() const {
  for (const auto& c : coords_) {
    if (c != 0) return false;
  }
  return true;
}

const Rational& Cyclotomic::rational_value() const {
  if (order_ != 1) throw MaskError(ErrorKind::DimensionMismatch, "value is not rational: " + to_string());
  return coords_[0];
}

Cyclotomic Cyclotomic::promoted(long long target) const {
  if (target == order_) return *this;
  if (target % order_ != 0) throw MaskError(ErrorKind::DimensionMismatch, "promotion target is not a multiple of the order");
  const long long step = target / order_;
  std::vector<Rational> coords(static_cast<std::size_t>(target));
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    coords[static_cast<std::size_t>(k * step)] = coords_[k];
  }
  Cyclotomic c;
  c.order_ = target;
  c.coords_ = std::move(coords);
  c.reduce();
  return c;
}

Cyclotomic Cyclotomic::galois(long long a) const {
  if (gcd_ll(floor_mod(a, order_), order_) != 1 && order_ != 1) {
    throw MaskError(ErrorKind::DimensionMismatch, "Galois exponent not coprime to the order");
  }
  if (order_ == 1) return *this;
  std::vector<Rational> coords(coords_.size());
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (coords_[k] == 0) continue;
    coords[static_cast<std::size_t>(floor_mod(static_cast<long long>(k) * a, order_))] += coords_[k];
  }
  return from_coords(order_, std::move(coords));
}

Cyclotomic Cyclotomic::conj() const { return galois(-1); }

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw MaskError(ErrorKind::DivisionByZero, "inverse of zero");
  if (order_ == 1) return Cyclotomic(Rational(1) / coords_[0]);
  // x^{-1} = (product of the other conjugates) / norm(x); the norm is rational.
  Cyclotomic others(1LL);
  for (long long a = 2; a < order_; ++a) {
    if (gcd_ll(a, order_) == 1) others *= galois(a);
  }
  const Cyclotomic norm = others * *this;
  return others * Cyclotomic(Rational(1) / norm.rational_value());
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic c = *this;
  for (auto& x : c.coords_) x = -x;
  return c;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& other) {
  if (order_ == 1 && other.order_ == 1) {
    coords_[0] += other.coords_[0];
    return *this;
  }
  const long long n = lcm_ll(order_, other.order_);
  if (n != order_) *this = promoted(n);
  if (other.order_ == n) {
    for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] += other.coords_[k];
  } else {
    const Cyclotomic o = other.promoted(n);
    for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] += o.coords_[k];
  }
  demote_if_rational();
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& other) { return *this += -other; }

Cyclotomic& Cyclotomic::operator*=(const Rational& factor) {
  if (factor == 0) {
    *this = Cyclotomic();
    return *this;
  }
  for (auto& x : coords_) x *= factor;
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& other) {
  if (other.order_ == 1) return *this *= other.coords_[0];
  if (order_ == 1) {
    const Rational f = coords_[0];
    *this = other;
    return *this *= f;
  }
  const long long n = lcm_ll(order_, other.order_);
  const Cyclotomic a = promoted(n);
  const Cyclotomic b = other.promoted(n);
  // Cyclic convolution mod x^n - 1, then reduction mod Phi_n.
  std::vector<Rational> out(static_cast<std::size_t>(n));
  Rational tmp;
  for (std::size_t i = 0; i < a.coords_.size(); ++i) {
    if (a.coords_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coords_.size(); ++j) {
      if (b.coords_[j] == 0) continue;
      tmp = a.coords_[i] * b.coords_[j];
      out[(i + j) % static_cast<std::size_t>(n)] += tmp;
    }
  }
  *this = from_coords(n, std::move(out));
  return *this;
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.order_ == b.order_) return a.coords_ == b.coords_;
  const long long n = lcm_ll(a.order_, b.order_);
  return a.promoted(n).coords_ == b.promoted(n).coords_;
}

std::complex<double> Cyclotomic::to_complex() const {
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (coords_[k] == 0) continue;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(order_);
    sum += coords_[k].get_d() * std::polar(1.0, angle);
  }
  return sum;
}

RationalInterval Cyclotomic::magnitude_interval(int precision_bits) const {
  if (precision_bits < 32) throw MaskError(ErrorKind::DimensionMismatch, "precision_bits must be >= 32");
  if (order_ == 1) return RationalInterval::exact(abs(coords_[0]));
  const auto prec = static_cast<mpfr_prec_t>(precision_bits);
  Interval re(prec);
  Interval im(prec);
  Interval c(prec);
  Interval cs(prec);
  Interval sn(prec);
  Interval term(prec);
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (coords_[k] == 0) continue;
    c.set_rational(coords_[k]);
    trig_enclosure(static_cast<long long>(k), order_, prec, cs, sn);
    term.assign_product(c, cs);
    re.add(term);
    term.assign_product(c, sn);
    im.add(term);
  }
  Interval re2(prec);
  Interval im2(prec);
  re2.assign_square(re);
  im2.assign_square(im);
  re2.add(im2);
  Mpfr lo(prec);
  Mpfr hi(prec);
  mpfr_sqrt(lo.get(), re2.lo(), MPFR_RNDD);
  mpfr_sqrt(hi.get(), re2.hi(), MPFR_RNDU);
  RationalInterval out{to_rational(lo.get()), to_rational(hi.get())};
  if (out.lo < 0) out.lo = 0;
  return out;
}

std::string Cyclotomic::to_string() const {
  if (order_ == 1) return coords_[0].get_str();
  std::string s;
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (coords_[k] == 0) continue;
    if (!s.empty()) s += " + ";
    if (k == 0) {
      s += coords_[k].get_str();
    } else {
      s += coords_[k].get_str() + "*z" + std::to_string(order_) + "^" + std::to_string(k);
    }
  }
  return s.empty() ? "0" : s;
}

}  // namespace maskforge
