#include "lpcuntz/operator.hpp"

#include <cmath>
#include <limits>

#include "lpcuntz/error.hpp"

namespace lpcuntz
{

double conjugate_exponent(double p)
{
    if (p == 1.0)
        return std::numeric_limits<double>::infinity();
    return p / (p - 1.0);
}

OperatorMatrix::OperatorMatrix(FiniteMeasureSpace source, FiniteMeasureSpace target,
                               double p, Eigen::MatrixXcd entries)
    : source_(std::move(source)), target_(std::move(target)), p_(p),
      entries_(std::move(entries))
{
    if (!(p_ >= 1.0) || !std::isfinite(p_))
        throw InvalidArgument("operator exponent must lie in [1, inf)");
    if (entries_.rows() != static_cast<Eigen::Index>(target_.size())
        || entries_.cols() != static_cast<Eigen::Index>(source_.size()))
        throw SpaceMismatch("matrix shape does not match the spaces");
}

OperatorMatrix OperatorMatrix::identity(FiniteMeasureSpace const& space, double p)
{
    auto n = static_cast<Eigen::Index>(space.size());
    return OperatorMatrix(space, space, p, Eigen::MatrixXcd::Identity(n, n));
}

OperatorMatrix OperatorMatrix::zero(FiniteMeasureSpace const& source,
                                    FiniteMeasureSpace const& target, double p)
{
    return OperatorMatrix(source, target, p,
                          Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(target.size()),
                                                 static_cast<Eigen::Index>(source.size())));
}

OperatorMatrix OperatorMatrix::multiplication(FiniteMeasureSpace const& space, double p,
                                              std::vector<Complex> const& f)
{
    if (f.size() != space.size())
        throw SpaceMismatch("multiplication operator: function has the wrong size");
    auto n = static_cast<Eigen::Index>(space.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        m(i, i) = f[static_cast<std::size_t>(i)];
    return OperatorMatrix(space, space, p, std::move(m));
}

Eigen::MatrixXcd OperatorMatrix::unweighted() const
{
    Eigen::MatrixXcd b = entries_;
    for (Eigen::Index y = 0; y < b.rows(); ++y)
        b.row(y) *= std::pow(target_.weight(static_cast<std::size_t>(y)), 1.0 / p_);
    for (Eigen::Index x = 0; x < b.cols(); ++x)
        b.col(x) /= std::pow(source_.weight(static_cast<std::size_t>(x)), 1.0 / p_);
    return b;
}

OperatorMatrix OperatorMatrix::pairing_adjoint() const
{
    if (p_ == 1.0)
        throw InvalidArgument("pairing adjoint at p = 1 lands in a sup-norm space");
    Eigen::MatrixXcd m = entries_.transpose();
    for (Eigen::Index x = 0; x < m.rows(); ++x)
    {
        for (Eigen::Index y = 0; y < m.cols(); ++y)
        {
            m(x, y) *= target_.weight(static_cast<std::size_t>(y))
                       / source_.weight(static_cast<std::size_t>(x));
        }
    }
    return OperatorMatrix(target_, source_, conjugate_exponent(p_), std::move(m));
}

double OperatorMatrix::max_abs_diff(OperatorMatrix const& other) const
{
    if (rows() != other.rows() || cols() != other.cols())
        throw SpaceMismatch("matrices differ in shape");
    if (rows() == 0 || cols() == 0)
        return 0.0;
    return (entries_ - other.entries_).cwiseAbs().maxCoeff();
}

bool OperatorMatrix::is_close(OperatorMatrix const& other, double tol) const
{
    return rows() == other.rows() && cols() == other.cols() && max_abs_diff(other) <= tol;
}

namespace
{
void require_same(FiniteMeasureSpace const& a, FiniteMeasureSpace const& b, char const* what)
{
    if (!a.equivalent(b))
        throw SpaceMismatch(what);
}
}  // namespace

OperatorMatrix operator*(OperatorMatrix const& a, OperatorMatrix const& b)
{
    require_same(a.source(), b.target(), "product: inner spaces differ");
    return OperatorMatrix(b.source(), a.target(), a.p(), a.entries() * b.entries());
}

OperatorMatrix operator+(OperatorMatrix const& a, OperatorMatrix const& b)
{
    require_same(a.source(), b.source(), "sum: source spaces differ");
    require_same(a.target(), b.target(), "sum: target spaces differ");
    return OperatorMatrix(a.source(), a.target(), a.p(), a.entries() + b.entries());
}

OperatorMatrix operator-(OperatorMatrix const& a, OperatorMatrix const& b)
{
    require_same(a.source(), b.source(), "difference: source spaces differ");
    require_same(a.target(), b.target(), "difference: target spaces differ");
    return OperatorMatrix(a.source(), a.target(), a.p(), a.entries() - b.entries());
}

OperatorMatrix operator*(Complex c, OperatorMatrix const& a)
{
    return OperatorMatrix(a.source(), a.target(), a.p(), c * a.entries());
}

Eigen::MatrixXcd kron(Eigen::MatrixXcd const& a, Eigen::MatrixXcd const& b)
{
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

OperatorMatrix kron(OperatorMatrix const& a, OperatorMatrix const& b)
{
    if (a.p() != b.p())
        throw InvalidArgument("kron: exponents differ");
    return OperatorMatrix(a.source().product(b.source()), a.target().product(b.target()),
                          a.p(), kron(a.entries(), b.entries()));
}

double weighted_norm(Eigen::VectorXcd const& v, std::vector<double> const& weights, double p)
{
    if (static_cast<std::size_t>(v.size()) != weights.size())
        throw SpaceMismatch("weighted_norm: vector and weights differ in size");
    double scale = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
    if (scale == 0.0)
        return 0.0;
    double total = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        total += weights[static_cast<std::size_t>(i)] * std::pow(std::abs(v(i)) / scale, p);
    return scale * std::pow(total, 1.0 / p);
}

nlohmann::json to_json(OperatorMatrix const& a)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index y = 0; y < a.rows(); ++y)
    {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index x = 0; x < a.cols(); ++x)
            row.push_back({a(y, x).real(), a(y, x).imag()});
        rows.push_back(row);
    }
    return {{"source", to_json(a.source())},
            {"target", to_json(a.target())},
            {"p", a.p()},
            {"entries", rows}};
}

OperatorMatrix operator_from_json(nlohmann::json const& j)
{
    FiniteMeasureSpace source = space_from_json(j.at("source"));
    FiniteMeasureSpace target =
        j.contains("target") ? space_from_json(j.at("target")) : source;
    auto const& rows = j.at("entries");
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(source.size()));
    for (std::size_t y = 0; y < rows.size(); ++y)
    {
        if (rows[y].size() != source.size())
            throw InvalidArgument("matrix row " + std::to_string(y) + " has the wrong length");
        for (std::size_t x = 0; x < source.size(); ++x)
        {
            auto const& e = rows[y][x];
            Complex v = e.is_array() ? Complex(e.at(0).get<double>(), e.at(1).get<double>())
                                     : Complex(e.get<double>(), 0.0);
            m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = v;
        }
    }
    return OperatorMatrix(std::move(source), std::move(target), j.at("p").get<double>(),
                          std::move(m));
}

}  // namespace lpcuntz
