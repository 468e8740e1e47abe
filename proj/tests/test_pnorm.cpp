#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lpcuntz/error.hpp"
#include "lpcuntz/pnorm.hpp"
#include "lpcuntz/verify.hpp"

using namespace lpcuntz;

namespace
{
Eigen::MatrixXcd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols)
{
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        m.col(c) = random_vector(rng, rows);
    return m;
}

Eigen::MatrixXcd random_nonnegative(Rng& rng, Eigen::Index rows, Eigen::Index cols)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
    {
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = u(rng);
    }
    return m;
}

// Independent p = 1 value: largest column sum of the unweighted matrix.
double column_sum_norm(Eigen::MatrixXcd const& b)
{
    return b.cwiseAbs().colwise().sum().maxCoeff();
}
}  // namespace

TEST_CASE("exact special cases")
{
    auto const X = FiniteMeasureSpace({"a", "b", "c"}, {0.3, 1.0, 2.5});
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0})
    {
        CHECK(power_estimate(OperatorMatrix::identity(X, p)).estimate == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(oracle_grid(OperatorMatrix::identity(X, p)).estimate == doctest::Approx(1.0).epsilon(1e-8));
        auto const U = FiniteMeasureSpace::counting(3);
        auto const diag = OperatorMatrix::multiplication(U, p, {0.5, Complex(0.0, -2.0), 1.0});
        CHECK(power_estimate(diag).estimate == doctest::Approx(2.0).epsilon(1e-10));
    }
    CHECK(power_estimate(OperatorMatrix::identity(X, 1.0)).method == "exact-p1");
    CHECK(power_estimate(OperatorMatrix::identity(X, 2.0)).method == "svd");

    Rng rng(41);
    for (int c = 0; c < 20; ++c)
    {
        auto const b = random_matrix(rng, 4, 3);
        CHECK(power_estimate(b, 1.0).estimate == doctest::Approx(column_sum_norm(b)).epsilon(1e-12));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
        CHECK(power_estimate(b, 2.0).estimate == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
    }
}

TEST_CASE("rank-one operators")
{
    auto const U = FiniteMeasureSpace::counting(2);
    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(2);
    CHECK(rank_one_exact(ones, ones, 3.0, U, U) == doctest::Approx(2.0).epsilon(1e-14));
    auto const op = rank_one_operator(ones, ones, 3.0, U, U);
    CHECK(oracle_grid(op).estimate == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(power_estimate(op).estimate == doctest::Approx(2.0).epsilon(1e-10));
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
    e1(0) = 1.0;
    CHECK(rank_one_exact(e1, e1, 3.0, U, U) == doctest::Approx(1.0));

    Rng rng(42);
    for (int c = 0; c < 30; ++c)
    {
        auto const src = random_space(rng, 5);
        auto const tgt = random_space(rng, 5);
        Eigen::VectorXcd const mu = random_vector(rng, static_cast<Eigen::Index>(tgt.size()));
        Eigen::VectorXcd const eta = random_vector(rng, static_cast<Eigen::Index>(src.size()));
        for (double p : {1.5, 2.0, 3.0})
        {
            double const q = conjugate_exponent(p);
            double const want = weighted_norm(mu, tgt.weights(), p) * weighted_norm(eta, src.weights(), q);
            CHECK(rank_one_exact(mu, eta, p, src, tgt) == doctest::Approx(want).epsilon(1e-12));
            CHECK(power_estimate(rank_one_operator(mu, eta, p, src, tgt)).estimate
                  == doctest::Approx(want).epsilon(1e-8));
        }
    }
}

TEST_CASE("oracle agrees with the power method on random 4x4 matrices")
{
    Rng rng(43);
    double worst = 0.0;
    for (int c = 0; c < 100; ++c)
    {
        auto const b = random_matrix(rng, 4, 4);
        double const est = power_estimate(b, 3.0).estimate;
        double const orc = oracle_grid(b, 3.0, 4000, static_cast<std::uint64_t>(c)).estimate;
        worst = std::max(worst, std::abs(est - orc) / est);
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("nonnegative matrices are exact")
{
    Rng rng(44);
    for (int c = 0; c < 30; ++c)
    {
        Eigen::Index const n = 2 + c % 5;
        auto const b = random_nonnegative(rng, n, n);
        double const est = power_estimate(b, 3.0).estimate;
        double const orc = oracle_grid(b, 3.0).estimate;
        CHECK(est == doctest::Approx(orc).epsilon(1e-8));
    }
}

TEST_CASE("duality and submultiplicativity")
{
    Rng rng(45);
    for (int c = 0; c < 30; ++c)
    {
        auto const src = random_space(rng, 4);
        auto const tgt = random_space(rng, 4);
        for (double p : {1.5, 3.0})
        {
            OperatorMatrix const a(src, tgt, p,
                                   random_matrix(rng, static_cast<Eigen::Index>(tgt.size()),
                                                 static_cast<Eigen::Index>(src.size())));
            auto const adj = a.pairing_adjoint();
            CHECK(adj.p() == doctest::Approx(conjugate_exponent(p)));
            CHECK(power_estimate(a).estimate == doctest::Approx(power_estimate(adj).estimate).epsilon(1e-6));

            OperatorMatrix const b(tgt, src, p,
                                   random_matrix(rng, static_cast<Eigen::Index>(src.size()),
                                                 static_cast<Eigen::Index>(tgt.size())));
            CHECK(power_estimate(b * a).estimate
                  <= power_estimate(b).estimate * power_estimate(a).estimate + 1e-8);
        }
    }
}

TEST_CASE("witnesses certify the lower bound")
{
    Rng rng(46);
    for (int c = 0; c < 40; ++c)
    {
        auto const src = random_space(rng, 6);
        auto const tgt = random_space(rng, 6);
        for (double p : {1.0, 1.5, 2.0, 3.0})
        {
            OperatorMatrix const a(src, tgt, p,
                                   random_matrix(rng, static_cast<Eigen::Index>(tgt.size()),
                                                 static_cast<Eigen::Index>(src.size())));
            for (auto const& r : {power_estimate(a), oracle_grid(a)})
            {
                CHECK(r.certified_lower <= r.estimate + 1e-12);
                CHECK(std::abs(norm_ratio(a, r.witness) - r.certified_lower) <= 1e-10 * std::max(1.0, r.estimate));
                CHECK(r.estimate <= r.upper_bound * (1.0 + 1e-10));
            }
        }
    }
}

TEST_CASE("rotation is not an isometry at p = 3")
{
    Eigen::MatrixXcd rot(2, 2);
    double const c = std::cos(std::numbers::pi / 4);
    rot << c, -c, c, c;
    auto const U = FiniteMeasureSpace::counting(2);
    CHECK(oracle_grid(OperatorMatrix(U, U, 3.0, rot)).estimate > 1.001);
    CHECK(power_estimate(OperatorMatrix(U, U, 2.0, rot)).estimate == doctest::Approx(1.0));
    CHECK_THROWS_AS(oracle_grid(Eigen::MatrixXcd::Identity(9, 9), 3.0), InvalidArgument);
}

TEST_CASE("vector norms")
{
    Eigen::VectorXcd v(3);
    v << 3.0, Complex(0.0, -4.0), 0.0;
    CHECK(lp_norm(v, 2.0) == doctest::Approx(5.0));
    CHECK(lp_norm(v, 1.0) == doctest::Approx(7.0));
    CHECK(lp_norm(v, std::numeric_limits<double>::infinity()) == doctest::Approx(4.0));
    CHECK(weighted_norm(v, {1.0, 0.25, 5.0}, 2.0) == doctest::Approx(std::sqrt(13.0)));
    CHECK(std::isinf(conjugate_exponent(1.0)));
    CHECK(conjugate_exponent(3.0) == doctest::Approx(1.5));
}
