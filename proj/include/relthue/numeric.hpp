#pragma once

// Scalar types shared by every module: exact integers/rationals from GMP and
// variable-precision reals from MPFR, both usable as Eigen scalars.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace relthue {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using IntMatrix = Mat<Integer>;
using RealMatrix = Mat<Real>;
using RealVector = Vec<Real>;

/// Minimal complex number over an arbitrary real scalar. std::complex is
/// only specified for the builtin floating types.
template <typename T>
struct Complex {
  T re{0};
  T im{0};

  Complex() = default;
  Complex(T r) : re(std::move(r)), im(0) {}  // NOLINT(implicit)
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    T d = o.re * o.re + o.im * o.im;
    T r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }

  Complex conj() const { return Complex(re, -im); }
  T norm_sq() const { return re * re + im * im; }
};

template <typename T>
T abs(const Complex<T>& z) {
  using std::sqrt;
  using std::hypot;
  if constexpr (std::is_floating_point_v<T>) {
    return hypot(z.re, z.im);
  } else {
    return sqrt(z.norm_sq());
  }
}

using ComplexR = Complex<Real>;
using ComplexD = Complex<double>;

/// Sets the MPFR default precision (decimal digits) for the current thread
/// and restores the previous value on destruction.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits) : saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

inline unsigned working_digits() { return Real::default_precision(); }

/// Arithmetic results carry the larger precision of their operands, so
/// values are rescaled explicitly when moving between precision levels.
inline Real at_digits(const Real& x, unsigned digits) { return Real(x, digits); }
inline Real at_working(const Real& x) { return Real(x, working_digits()); }
inline ComplexR at_working(const ComplexR& z) { return ComplexR(at_working(z.re), at_working(z.im)); }

/// 10^(-k) at the current default precision.
inline Real pow10_neg(int k) {
  return boost::multiprecision::pow(Real(10), -k);
}

inline Integer round_to_integer(const Real& x) {
  Integer z;
  mpfr_get_z(z.backend().data(), x.backend().data(), MPFR_RNDN);
  return z;
}

inline Integer floor_to_integer(const Real& x) {
  Integer z;
  mpfr_get_z(z.backend().data(), x.backend().data(), MPFR_RNDD);
  return z;
}

inline Integer ceil_to_integer(const Real& x) {
  Integer z;
  mpfr_get_z(z.backend().data(), x.backend().data(), MPFR_RNDU);
  return z;
}

inline Real to_real(const Integer& x) { return Real(x); }

inline double to_double(const Real& x) { return x.convert_to<double>(); }
inline double to_double(const Integer& x) { return x.convert_to<double>(); }

/// Natural logarithm of |x| for a (possibly huge) integer without overflow.
inline double log_abs(const Integer& x) {
  if (x == 0) return -INFINITY;
  const std::size_t bits = boost::multiprecision::msb(boost::multiprecision::abs(x)) + 1;
  if (bits < 1000) return std::log(std::fabs(x.convert_to<double>()));
  const std::size_t shift = bits - 60;
  Integer top = boost::multiprecision::abs(x) >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline Integer ipow(const Integer& base, unsigned e) {
  return boost::multiprecision::pow(base, e);
}

inline Integer parse_integer(const std::string& text) { return Integer(text); }

}  // namespace relthue
