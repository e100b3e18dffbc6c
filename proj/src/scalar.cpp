#include "rumin/scalar.hpp"

#include <ostream>
#include <stdexcept>

namespace rumin {

Scalar Scalar::frac(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

Scalar Scalar::gaussian(long re_num, long re_den, long im_num, long im_den) {
  if (re_den == 0 || im_den == 0) throw std::invalid_argument("zero denominator");
  mpq_class r(re_num, re_den), i(im_num, im_den);
  r.canonicalize();
  i.canonicalize();
  return Scalar(r, i);
}

Scalar& Scalar::operator*=(const Scalar& o) {
  mpq_class r = re * o.re - im * o.im;
  mpq_class i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero Scalar");
  mpq_class d = norm2();
  return Scalar(re / d, -im / d);
}

std::string Scalar::str() const {
  if (sgn(im) == 0) return re.get_str();
  mpq_class a = abs(im);
  std::string ipart = a == 1 ? "i" : a.get_str() + "·i";
  if (sgn(re) == 0) return (sgn(im) < 0 ? "-" : "") + ipart;
  return re.get_str() + (sgn(im) < 0 ? " - " : " + ") + ipart;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

Scalar ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Scalar(1);
    case 1: return Scalar(0, 1);
    case 2: return Scalar(-1);
    default: return Scalar(0, -1);
  }
}

Scalar sign_pow(long k) { return (k % 2 == 0) ? Scalar(1) : Scalar(-1); }

mpq_class factorial(int k) {
  mpz_class f = 1;
  for (int j = 2; j <= k; ++j) f *= j;
  return mpq_class(f);
}

mpq_class binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return mpq_class(b);
}

}  // namespace rumin
