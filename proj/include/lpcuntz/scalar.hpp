#pragma once

#include <complex>
#include <string>

#include <gmpxx.h>

namespace lpcuntz
{

/*!
 * Exact complex rational number re + im*i.
 *
 * Both parts are kept canonical (gmp reduces on every operation), so
 * structural equality is numeric equality.
 */
class Scalar
{
  public:
    Scalar() = default;
    Scalar(long v) : re_(v), im_(0) {}
    Scalar(mpq_class re, mpq_class im = 0);

    static Scalar i() { return Scalar(0, 1); }
    // Parses "a" or "a/b" for each part.
    static Scalar from_strings(std::string const& re, std::string const& im);

    mpq_class const& re() const { return re_; }
    mpq_class const& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    Scalar conj() const { return Scalar(re_, -im_); }
    std::complex<double> to_complex() const
    {
        return {re_.get_d(), im_.get_d()};
    }

    Scalar& operator+=(Scalar const& o);
    Scalar& operator-=(Scalar const& o);
    Scalar& operator*=(Scalar const& o);
    Scalar& operator/=(Scalar const& o);

    friend Scalar operator+(Scalar a, Scalar const& b) { return a += b; }
    friend Scalar operator-(Scalar a, Scalar const& b) { return a -= b; }
    friend Scalar operator*(Scalar a, Scalar const& b) { return a *= b; }
    friend Scalar operator/(Scalar a, Scalar const& b) { return a /= b; }
    friend Scalar operator-(Scalar const& a) { return Scalar(-a.re_, -a.im_); }

    friend bool operator==(Scalar const& a, Scalar const& b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    // Text form used by the element grammar: "3", "-1/2", "(1/2+3i)".
    std::string to_string() const;

  private:
    mpq_class re_{0};
    mpq_class im_{0};
};

}  // namespace lpcuntz
