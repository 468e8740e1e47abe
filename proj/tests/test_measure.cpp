#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>

#include <Eigen/LU>

#include "lpcuntz/error.hpp"
#include "lpcuntz/measure.hpp"
#include "lpcuntz/operator.hpp"
#include "lpcuntz/verify.hpp"

using namespace lpcuntz;

namespace
{
using Atoms = std::vector<std::size_t>;

AtomFunction random_function(Rng& rng, FiniteMeasureSpace const& space)
{
    Eigen::VectorXcd const v = random_vector(rng, static_cast<Eigen::Index>(space.size()));
    return {space, std::vector<Complex>(v.data(), v.data() + v.size())};
}

// Random injective set transformation with blocks of size up to 2.
SetTransformation random_transformation(Rng& rng, FiniteMeasureSpace const& src,
                                        FiniteMeasureSpace const& tgt)
{
    std::vector<std::size_t> ys(tgt.size());
    std::iota(ys.begin(), ys.end(), 0);
    std::shuffle(ys.begin(), ys.end(), rng);
    std::vector<std::vector<std::size_t>> blocks(src.size());
    std::size_t next = 0;
    for (auto& b : blocks)
    {
        b.push_back(ys[next++]);
        if (next < ys.size() && next + (src.size() - (&b - blocks.data()) - 1) < ys.size()
            && rng() % 2)
            b.push_back(ys[next++]);
        std::sort(b.begin(), b.end());
    }
    return SetTransformation(src, tgt, blocks);
}

// All subsets of {0, ..., n-1}.
std::vector<Atoms> subsets(std::size_t n)
{
    std::vector<Atoms> out;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask)
    {
        Atoms s;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (mask & (std::size_t(1) << i))
                s.push_back(i);
        }
        out.push_back(s);
    }
    return out;
}

Atoms set_union(Atoms const& a, Atoms const& b)
{
    Atoms out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Atoms set_intersection(Atoms const& a, Atoms const& b)
{
    Atoms out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}
}  // namespace

TEST_CASE("measure spaces")
{
    FiniteMeasureSpace const X({"a", "b", "c"}, {1.0, 0.0, 2.0});
    CHECK(X.size() == 2);
    CHECK(X.index_of("c") == 1);
    CHECK(X.measure({0, 1}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(FiniteMeasureSpace({"a", "a"}, {1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(FiniteMeasureSpace({"a"}, {-1.0}), InvalidArgument);

    auto const P = X.product(FiniteMeasureSpace::counting(2));
    CHECK(P.size() == 4);
    CHECK(P.label(3) == "(c,1)");
    CHECK(P.weight(3) == 2.0);
    auto const U = FiniteMeasureSpace::disjoint_union({X, FiniteMeasureSpace::counting(1)});
    CHECK(U.label(2) == "1:0");
    CHECK(space_from_json(to_json(U)) == U);
    CHECK(FiniteMeasureSpace::uniform(3, 0.5).equivalent(FiniteMeasureSpace({"x", "y", "z"}, {0.5, 0.5, 0.5})));
}

TEST_CASE("pushforward of functions")
{
    FiniteMeasureSpace const X = FiniteMeasureSpace::counting(2);
    FiniteMeasureSpace const Y = FiniteMeasureSpace::counting(4);
    SetTransformation const S(X, Y, {{0, 2}, {3}});
    auto const f = pushforward_function(S, AtomFunction::indicator(X, {0}));
    CHECK(f.support() == Atoms{0, 2});
    CHECK(pushforward_function(SetTransformation::identity(X), AtomFunction::indicator(X, {1})).values
          == AtomFunction::indicator(X, {1}).values);

    Rng rng(1);
    for (int c = 0; c < 50; ++c)
    {
        auto const src = random_space(rng, 5);
        auto const tgt = random_space(rng, 8);
        if (tgt.size() < src.size())
            continue;
        auto const T = random_transformation(rng, src, tgt);
        auto const xi = random_function(rng, src);
        auto const eta = random_function(rng, src);
        auto const pxi = pushforward_function(T, xi);
        // |.|^p commutes with the pushforward, and the pushforward is multiplicative.
        AtomFunction abs_p{src, {}}, prod{src, {}};
        for (std::size_t x = 0; x < src.size(); ++x)
        {
            abs_p.values.push_back(std::pow(std::abs(xi.values[x]), 3.0));
            prod.values.push_back(xi.values[x] * eta.values[x]);
        }
        auto const lhs = pushforward_function(T, abs_p);
        auto const pprod = pushforward_function(T, prod);
        auto const peta = pushforward_function(T, eta);
        for (std::size_t y = 0; y < tgt.size(); ++y)
        {
            CHECK(std::abs(lhs.values[y] - std::pow(std::abs(pxi.values[y]), 3.0)) < 1e-12);
            CHECK(std::abs(pprod.values[y] - pxi.values[y] * peta.values[y]) < 1e-12);
        }
        // Injectivity: the pushforward of a nonzero function is nonzero.
        CHECK(!pxi.support().empty());
    }
    CHECK_THROWS_AS(pushforward_function(S, AtomFunction::zero(Y)), SpaceMismatch);
}

TEST_CASE("pullback and pushforward of measures")
{
    FiniteMeasureSpace const X = FiniteMeasureSpace::counting(1);
    FiniteMeasureSpace const Y = FiniteMeasureSpace::counting(2);
    SetTransformation const S(X, Y, {{0, 1}});
    CHECK(pullback_measure(S, {3.0, 4.0}) == std::vector<double>{7.0});
    CHECK(pullback_measure(SetTransformation::identity(Y), {3.0, 4.0}) == std::vector<double>{3.0, 4.0});
    auto const bm = pushforward_measure(S, {5.0});
    CHECK(bm.blocks == std::vector<Atoms>{{0, 1}});
    CHECK(bm.values == std::vector<double>{5.0});

    Rng rng(2);
    for (int c = 0; c < 50; ++c)
    {
        auto const src = random_space(rng, 4);
        auto const mid = random_space(rng, 6);
        auto const tgt = random_space(rng, 8);
        if (mid.size() < src.size() || tgt.size() < mid.size())
            continue;
        auto const S1 = random_transformation(rng, src, mid);
        auto const T1 = random_transformation(rng, mid, tgt);
        auto const lam = tgt.weights();
        // Functoriality (T S)^* = S^* T^*.
        auto const a = pullback_measure(compose(T1, S1), lam);
        auto const b = pullback_measure(S1, pullback_measure(T1, lam));
        for (std::size_t x = 0; x < a.size(); ++x)
            CHECK(a[x] == doctest::Approx(b[x]).epsilon(1e-12));
        // Change of variables: sum xi S^*(lambda) = sum S_*(xi) lambda.
        auto const xi = random_function(rng, mid);
        auto const pb = pullback_measure(T1, lam);
        auto const pf = pushforward_function(T1, xi);
        Complex lhs = 0.0, rhs = 0.0;
        for (std::size_t x = 0; x < mid.size(); ++x)
            lhs += xi.values[x] * pb[x];
        for (std::size_t y = 0; y < tgt.size(); ++y)
            rhs += pf.values[y] * lam[y];
        CHECK(std::abs(lhs - rhs) < 1e-10);
        // Round trip S^*(S_*(mu)) = mu on the block level.
        auto const push = pushforward_measure(S1, src.weights());
        for (std::size_t x = 0; x < src.size(); ++x)
            CHECK(push.values[x] == src.weight(x));
        // (T S)_* = T_* S_*.
        auto const xs = random_function(rng, src);
        auto const one = pushforward_function(compose(T1, S1), xs).values;
        auto const two = pushforward_function(T1, pushforward_function(S1, xs)).values;
        for (std::size_t y = 0; y < one.size(); ++y)
            CHECK(std::abs(one[y] - two[y]) < 1e-14);
    }
}

TEST_CASE("Radon-Nikodym derivatives")
{
    FiniteMeasureSpace const X({"x"}, {2.0});
    FiniteMeasureSpace const Y({"y"}, {4.0});
    SetTransformation const S(X, Y, {{0}});
    CHECK(rn_derivative(S, X.weights(), Y.weights()).values[0].real() == doctest::Approx(0.5));
    auto const Z = FiniteMeasureSpace::uniform(3, 0.25);
    SetTransformation const perm(Z, Z, {{2}, {0}, {1}});
    for (auto v : rn_derivative(perm, Z.weights(), Z.weights()).values)
        CHECK(v.real() == doctest::Approx(1.0));

    // Chain rule d S_*(sigma) / d S_*(lambda) = S_*(d sigma / d lambda) for bijections.
    Rng rng(3);
    for (int c = 0; c < 20; ++c)
    {
        auto const A = random_space(rng, 6);
        std::vector<std::size_t> p(A.size());
        std::iota(p.begin(), p.end(), 0);
        std::shuffle(p.begin(), p.end(), rng);
        std::vector<std::vector<std::size_t>> blocks;
        for (auto y : p)
            blocks.push_back({y});
        SetTransformation const B(A, A, blocks);
        CHECK(B.is_bijective());
        auto const sigma = random_space(rng, 1).weight(0);
        std::vector<double> sig(A.size()), lam(A.size());
        std::uniform_real_distribution<double> w(0.1, 3.0);
        for (std::size_t x = 0; x < A.size(); ++x)
        {
            sig[x] = w(rng) * sigma;
            lam[x] = w(rng);
        }
        // Push both measures to atom level (singleton blocks).
        std::vector<double> ps(A.size()), pl(A.size());
        for (std::size_t x = 0; x < A.size(); ++x)
        {
            ps[p[x]] = sig[x];
            pl[p[x]] = lam[x];
        }
        AtomFunction ratio{A, {}};
        for (std::size_t x = 0; x < A.size(); ++x)
            ratio.values.push_back(sig[x] / lam[x]);
        auto const rhs = pushforward_function(B, ratio);
        for (std::size_t y = 0; y < A.size(); ++y)
            CHECK(ps[y] / pl[y] == doctest::Approx(rhs.values[y].real()).epsilon(1e-12));
        // And the rn_derivative agrees with the direct ratio.
        auto const h = rn_derivative(B, sig, pl);
        for (std::size_t y = 0; y < A.size(); ++y)
            CHECK(h.values[y].real() == doctest::Approx(ps[y] / pl[y]).epsilon(1e-12));
    }
}

TEST_CASE("set transformations are sigma-homomorphisms")
{
    for (std::size_t n = 1; n <= 3; ++n)
    {
        auto const src = FiniteMeasureSpace::counting(n);
        auto const tgt = FiniteMeasureSpace::counting(5);
        Rng rng(n);
        auto const S = random_transformation(rng, src, tgt);
        for (auto const& e : subsets(n))
        {
            for (auto const& f : subsets(n))
            {
                CHECK(S.image(set_union(e, f)) == set_union(S.image(e), S.image(f)));
                CHECK(S.image(set_intersection(e, f)) == set_intersection(S.image(e), S.image(f)));
                if (set_intersection(e, f).empty())
                    CHECK(set_intersection(S.image(e), S.image(f)).empty());
            }
        }
    }
}

TEST_CASE("bijective iff the pushforward is onto")
{
    // Onto every function means every target atom is a singleton block.
    for (std::size_t n = 1; n <= 3; ++n)
    {
        auto const src = FiniteMeasureSpace::counting(n);
        for (std::size_t m = n; m <= 4; ++m)
        {
            auto const tgt = FiniteMeasureSpace::counting(m);
            Rng rng(10 * n + m);
            for (int c = 0; c < 10; ++c)
            {
                auto const S = random_transformation(rng, src, tgt);
                // The image of the basis spans the target iff rank equals m.
                Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
                for (std::size_t x = 0; x < n; ++x)
                {
                    auto const f = pushforward_function(S, AtomFunction::indicator(src, {x}));
                    for (std::size_t y = 0; y < m; ++y)
                        M(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = f.values[y].real();
                }
                bool const onto = Eigen::FullPivLU<Eigen::MatrixXd>(M).rank() == static_cast<Eigen::Index>(m);
                CHECK(onto == S.is_bijective());
            }
        }
    }
}

TEST_CASE("set transformation validation and JSON")
{
    auto const X = FiniteMeasureSpace::counting(2);
    auto const Y = FiniteMeasureSpace::counting(3);
    CHECK_THROWS_AS(SetTransformation(X, Y, {{0}, {0}}), InvalidArgument);
    CHECK_THROWS_AS(SetTransformation(X, Y, {{0}, {}}), InvalidArgument);
    CHECK_THROWS_AS(SetTransformation(X, Y, {{0}}), InvalidArgument);
    SetTransformation const S(X, Y, {{0, 2}, {1}});
    auto const back = set_transformation_from_json(X, Y, blocks_to_json(S));
    CHECK(back.blocks() == S.blocks());
    CHECK(compose(SetTransformation::identity(Y), S).blocks() == S.blocks());
    CHECK(S.owners() == std::vector<std::size_t>{0, 1, 0});
}
