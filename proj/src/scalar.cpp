#include "lpcuntz/scalar.hpp"

#include "lpcuntz/error.hpp"

namespace lpcuntz
{

namespace
{
mpq_class parse_rational(std::string const& text)
{
    mpq_class q;
    if (text.empty() || q.set_str(text, 10) != 0)
        throw InvalidArgument("invalid rational literal '" + text + "'");
    if (q.get_den() == 0)
        throw InvalidArgument("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}
}  // namespace

Scalar::Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im))
{
    re_.canonicalize();
    im_.canonicalize();
}

Scalar Scalar::from_strings(std::string const& re, std::string const& im)
{
    return Scalar(parse_rational(re), parse_rational(im));
}

Scalar& Scalar::operator+=(Scalar const& o)
{
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Scalar& Scalar::operator-=(Scalar const& o)
{
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Scalar& Scalar::operator*=(Scalar const& o)
{
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

Scalar& Scalar::operator/=(Scalar const& o)
{
    if (o.is_zero())
        throw InvalidArgument("division by zero scalar");
    mpq_class den = o.re_ * o.re_ + o.im_ * o.im_;
    mpq_class re = (re_ * o.re_ + im_ * o.im_) / den;
    mpq_class im = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

std::string Scalar::to_string() const
{
    if (is_real())
        return re_.get_str();
    std::string out = "(" + re_.get_str();
    if (sgn(im_) >= 0)
        out += "+";
    out += im_.get_str() + "i)";
    return out;
}

}  // namespace lpcuntz
