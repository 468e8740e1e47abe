#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lpcuntz/measure.hpp"

namespace lpcuntz
{

using Complex = std::complex<double>;

// Conjugate exponent; returns infinity for p = 1.
double conjugate_exponent(double p);

/*!
 * Linear map L^p(source) -> L^p(target) stored as a dense matrix.
 *
 * Rows index target atoms and columns index source atoms. All norms are
 * taken in the weighted spaces: ||xi||_p^p = sum_x mu(x) |xi(x)|^p.
 */
class OperatorMatrix
{
  public:
    OperatorMatrix(FiniteMeasureSpace source, FiniteMeasureSpace target, double p,
                   Eigen::MatrixXcd entries);

    static OperatorMatrix identity(FiniteMeasureSpace const& space, double p);
    static OperatorMatrix zero(FiniteMeasureSpace const& source,
                               FiniteMeasureSpace const& target, double p);
    // m(f): diagonal multiplication by f.
    static OperatorMatrix multiplication(FiniteMeasureSpace const& space, double p,
                                         std::vector<Complex> const& f);

    FiniteMeasureSpace const& source() const { return source_; }
    FiniteMeasureSpace const& target() const { return target_; }
    double p() const { return p_; }
    Eigen::MatrixXcd const& entries() const { return entries_; }
    Complex operator()(std::size_t y, std::size_t x) const { return entries_(y, x); }
    Eigen::Index rows() const { return entries_.rows(); }
    Eigen::Index cols() const { return entries_.cols(); }

    // D_nu^{1/p} A D_mu^{-1/p}: the same operator between unweighted spaces.
    Eigen::MatrixXcd unweighted() const;

    Eigen::VectorXcd apply(Eigen::VectorXcd const& xi) const { return entries_ * xi; }

    // Adjoint for the bilinear pairing <xi, eta> = sum mu(x) xi(x) eta(x),
    // acting between the conjugate-exponent spaces.
    OperatorMatrix pairing_adjoint() const;

    // Entrywise max |A - B|; spaces must agree in size.
    double max_abs_diff(OperatorMatrix const& other) const;
    bool is_close(OperatorMatrix const& other, double tol) const;

  private:
    FiniteMeasureSpace source_;
    FiniteMeasureSpace target_;
    double p_;
    Eigen::MatrixXcd entries_;
};

// Composition a * b (b first).
OperatorMatrix operator*(OperatorMatrix const& a, OperatorMatrix const& b);
OperatorMatrix operator+(OperatorMatrix const& a, OperatorMatrix const& b);
OperatorMatrix operator-(OperatorMatrix const& a, OperatorMatrix const& b);
OperatorMatrix operator*(Complex c, OperatorMatrix const& a);

// Kronecker product on the product spaces (index i1 * n2 + i2).
Eigen::MatrixXcd kron(Eigen::MatrixXcd const& a, Eigen::MatrixXcd const& b);
OperatorMatrix kron(OperatorMatrix const& a, OperatorMatrix const& b);

// Weighted p-norm of a vector.
double weighted_norm(Eigen::VectorXcd const& v, std::vector<double> const& weights, double p);

nlohmann::json to_json(OperatorMatrix const& a);
OperatorMatrix operator_from_json(nlohmann::json const& j);

}  // namespace lpcuntz
