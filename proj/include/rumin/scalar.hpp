#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>

namespace rumin {

// Gaussian rational a + b i.  mpq_class keeps both parts canonical.
class Scalar {
 public:
  mpq_class re;
  mpq_class im;

  Scalar() : re(0), im(0) {}
  Scalar(long v) : re(v), im(0) {}  // NOLINT(implicit)
  Scalar(const mpq_class& r) : re(r), im(0) { re.canonicalize(); }  // NOLINT(implicit)
  Scalar(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  static Scalar I() { return Scalar(0, 1); }
  static Scalar frac(long num, long den);
  static Scalar gaussian(long re_num, long re_den, long im_num, long im_den);

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }

  Scalar conj() const { return Scalar(re, -im); }
  mpq_class norm2() const { return re * re + im * im; }
  Scalar inverse() const;

  Scalar& operator+=(const Scalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const { return Scalar(-re, -im); }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // "a/b + c/d·i"; pure reals and pure imaginaries print without the zero part.
  std::string str() const;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

Scalar ipow(int k);  // i^k for any integer k
Scalar sign_pow(long k);  // (-1)^k
mpq_class factorial(int k);
mpq_class binomial(int n, int k);

}  // namespace rumin
