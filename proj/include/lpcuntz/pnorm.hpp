#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lpcuntz/operator.hpp"

namespace lpcuntz
{

struct NormResult
{
    double estimate = 0.0;
    // ||A xi|| / ||xi|| for the returned witness.
    double certified_lower = 0.0;
    // Riesz-Thorin bound ||B||_1^{1/p} ||B||_inf^{1-1/p} of the unweighted matrix.
    double upper_bound = 0.0;
    Eigen::VectorXcd witness;  // in weighted coordinates of the source
    std::string method;        // "exact-p1", "svd", "boyd", "oracle-grid"
    int iterations = 0;
    bool converged = true;
};

struct PowerOptions
{
    int restarts = 20;
    std::uint64_t seed = 0;
    double tol = 1e-10;
    int max_iterations = 2000;
};

/*!
 * Operator norm of A : L^p(mu) -> L^p(nu).
 *
 * p = 1 is exact (largest weighted column sum) and p = 2 uses the largest
 * singular value. Otherwise a Boyd iteration with the dual map
 * x -> |x|^{p-1} sgn(x) runs from one positive start for entrywise
 * nonnegative matrices and from several seeded starts otherwise.
 */
NormResult power_estimate(OperatorMatrix const& a, PowerOptions const& opts = {});
// Same for an unweighted matrix at exponent p.
NormResult power_estimate(Eigen::MatrixXcd const& b, double p, PowerOptions const& opts = {});

/*!
 * Brute-force lower bound for small source dimension (at most 8).
 *
 * Samples the unit sphere with random and Halton points, then refines the
 * best samples by a shrinking coordinate pattern search.
 */
NormResult oracle_grid(OperatorMatrix const& a, int samples = 4000, std::uint64_t seed = 0);
NormResult oracle_grid(Eigen::MatrixXcd const& b, double p, int samples = 4000,
                       std::uint64_t seed = 0);

// ||A xi||_p / ||xi||_p in the weighted spaces.
double norm_ratio(OperatorMatrix const& a, Eigen::VectorXcd const& xi);

// ||xi -> omega_eta(xi) mu|| = ||mu||_p ||eta||_q with omega_eta(xi) = sum w(x) xi(x) eta(x).
double rank_one_exact(Eigen::VectorXcd const& mu, Eigen::VectorXcd const& eta, double p,
                      FiniteMeasureSpace const& source, FiniteMeasureSpace const& target);
// The rank-one operator itself.
OperatorMatrix rank_one_operator(Eigen::VectorXcd const& mu, Eigen::VectorXcd const& eta,
                                 double p, FiniteMeasureSpace const& source,
                                 FiniteMeasureSpace const& target);

// Unweighted l^p norm of a complex vector (p may be infinite).
double lp_norm(Eigen::VectorXcd const& v, double p);

}  // namespace lpcuntz
