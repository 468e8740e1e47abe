#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "lpcuntz/error.hpp"
#include "lpcuntz/pnorm.hpp"
#include "lpcuntz/spatial.hpp"
#include "lpcuntz/verify.hpp"

using namespace lpcuntz;

namespace
{
constexpr auto npos = SetTransformation::npos;

// Build a system from a block assignment: owner[y] is the domain atom of y, or npos.
SpatialSystem from_owners(FiniteMeasureSpace const& dom, FiniteMeasureSpace const& cod,
                          std::vector<std::size_t> const& owner, std::vector<Complex> const& phases)
{
    SpatialSystem sys{dom, cod, {}, {}, {}, {}};
    for (std::size_t x = 0; x < dom.size(); ++x)
    {
        std::vector<std::size_t> b;
        for (std::size_t y = 0; y < cod.size(); ++y)
        {
            if (owner[y] == x)
                b.push_back(y);
        }
        if (b.empty())
            continue;
        sys.E.push_back(x);
        sys.blocks.push_back(b);
    }
    for (std::size_t y = 0; y < cod.size(); ++y)
    {
        if (owner[y] != npos)
        {
            sys.F.push_back(y);
            sys.g.push_back(phases[y]);
        }
    }
    sys.validate();
    return sys;
}

Eigen::MatrixXcd chi(FiniteMeasureSpace const& space, std::vector<std::size_t> const& atoms)
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(space.size()),
                                                static_cast<Eigen::Index>(space.size()));
    for (auto a : atoms)
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = 1.0;
    return m;
}

// Pairing <xi, eta> = sum mu(x) xi(x) eta(x), summed directly.
Complex pairing(FiniteMeasureSpace const& space, Eigen::VectorXcd const& xi, Eigen::VectorXcd const& eta)
{
    Complex s = 0.0;
    for (std::size_t x = 0; x < space.size(); ++x)
        s += space.weight(x) * xi(static_cast<Eigen::Index>(x)) * eta(static_cast<Eigen::Index>(x));
    return s;
}

FiniteMeasureSpace const one_atom = FiniteMeasureSpace::counting(1);
FiniteMeasureSpace const two_atoms = FiniteMeasureSpace::counting(2);
}  // namespace

TEST_CASE("materialize examples")
{
    SpatialSystem const split{one_atom, two_atoms, {0}, {0, 1}, {{0, 1}}, {1.0, -1.0}};
    for (double p : {1.0, 1.5, 2.0, 3.0})
    {
        auto const m = materialize(split, p);
        double const c = std::pow(2.0, -1.0 / p);
        CHECK(std::abs(m(0, 0) - c) < 1e-15);
        CHECK(std::abs(m(1, 0) + c) < 1e-15);
        CHECK(!split.is_spatial());
    }

    auto const X = FiniteMeasureSpace::uniform(3, 0.7);
    CHECK(materialize(SpatialSystem::identity(X), 3.0).is_close(OperatorMatrix::identity(X, 3.0), 0.0));

    FiniteMeasureSpace const heavy({"y"}, {4.0});
    auto const s = SpatialSystem::from_injection(one_atom, heavy, {0}, {Complex(0.0, 1.0)});
    for (double p : {1.0, 3.0})
        CHECK(std::abs(materialize(s, p)(0, 0) - std::pow(0.25, 1.0 / p) * Complex(0.0, 1.0)) < 1e-15);
}

TEST_CASE("system validation")
{
    CHECK_THROWS_AS((SpatialSystem{one_atom, two_atoms, {0}, {0, 1}, {{0}}, {1.0, 1.0}}.validate()),
                    InvalidArgument);
    CHECK_THROWS_AS((SpatialSystem{one_atom, two_atoms, {0}, {0}, {{0}}, {2.0}}.validate()),
                    InvalidArgument);
    CHECK_THROWS_AS((SpatialSystem{two_atoms, two_atoms, {0, 1}, {0}, {{0}, {0}}, {1.0}}.validate()),
                    InvalidArgument);
    SpatialSystem const split{one_atom, two_atoms, {0}, {0, 1}, {{0, 1}}, {1.0, -1.0}};
    CHECK_THROWS_AS(reverse(split), InvalidArgument);
    CHECK(system_from_json(to_json(split)) == split);
}

TEST_CASE("reverse laws")
{
    auto const X = FiniteMeasureSpace::uniform(3, 0.5);
    CHECK(reverse(SpatialSystem::identity(X)) == SpatialSystem::identity(X));

    Rng rng(31);
    for (int c = 0; c < 100; ++c)
    {
        auto const dom = random_space(rng, 6, "x");
        auto const cod = random_space(rng, 6, "y");
        auto const sys = random_system(rng, dom, cod, false);
        CHECK(reverse(reverse(sys)) == sys);
        for (double p : {1.0, 1.5, 2.0, 3.0})
        {
            auto const s = materialize(sys, p).entries();
            auto const t = materialize(reverse(sys), p).entries();
            CHECK((t * s - chi(dom, sys.E)).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((s * t - chi(cod, sys.F)).cwiseAbs().maxCoeff() < 1e-12);
            if (p == 2.0)
            {
                // Hilbert adjoint in weighted coordinates: D_mu^{-1} s^* D_nu.
                Eigen::VectorXd mu = Eigen::Map<Eigen::VectorXd const>(dom.weights().data(), static_cast<Eigen::Index>(dom.size()));
                Eigen::VectorXd nu = Eigen::Map<Eigen::VectorXd const>(cod.weights().data(), static_cast<Eigen::Index>(cod.size()));
                Eigen::MatrixXcd const adj = mu.cwiseInverse().cast<Complex>().asDiagonal() * s.adjoint() * nu.cast<Complex>().asDiagonal();
                CHECK((adj - t).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("isometry on the domain and range")
{
    Rng rng(32);
    for (int c = 0; c < 40; ++c)
    {
        auto const dom = random_space(rng, 6);
        auto const cod = random_space(rng, 8);
        auto const sys = random_system(rng, dom, cod, true);
        for (double p : {1.0, 1.5, 3.0})
        {
            auto const m = materialize(sys, p);
            for (int k = 0; k < 5; ++k)
            {
                Eigen::VectorXcd xi = random_vector(rng, static_cast<Eigen::Index>(dom.size()));
                Eigen::VectorXcd restricted = Eigen::VectorXcd::Zero(xi.size());
                for (auto x : sys.E)
                    restricted(static_cast<Eigen::Index>(x)) = xi(static_cast<Eigen::Index>(x));
                double const lhs = weighted_norm(m.apply(xi), cod.weights(), p);
                double const rhs = weighted_norm(restricted, dom.weights(), p);
                CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, rhs));
            }
            // Column supports of a spatial materialization are exactly F.
            if (sys.is_spatial())
            {
                std::vector<std::size_t> rows;
                for (Eigen::Index y = 0; y < m.rows(); ++y)
                {
                    if (m.entries().row(y).cwiseAbs().maxCoeff() > 0.0)
                        rows.push_back(static_cast<std::size_t>(y));
                }
                CHECK(rows == sys.F);
                Eigen::FullPivLU<Eigen::MatrixXcd> lu(m.entries());
                CHECK(lu.rank() == static_cast<Eigen::Index>(sys.F.size()));
            }
            CHECK(power_estimate(m).estimate <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("compose, tensor and dual")
{
    auto const X = FiniteMeasureSpace::counting(3);
    auto const perm1 = SpatialSystem::from_injection(X, X, {1, 2, 0}, {1.0, Complex(0, 1), -1.0});
    auto const perm2 = SpatialSystem::from_injection(X, X, {2, 0, 1}, {Complex(0, 1), 1.0, 1.0});
    auto const comp = compose_systems(perm2, perm1);
    // x -> perm2(perm1(x)): 0 -> 1 -> 0, 1 -> 2 -> 1, 2 -> 0 -> 2.
    CHECK(comp.blocks == std::vector<std::vector<std::size_t>>{{0}, {1}, {2}});
    CHECK(std::abs(comp.phase(0) - 1.0) < 1e-15);
    CHECK(std::abs(comp.phase(1) - Complex(0, 1)) < 1e-15);
    CHECK(std::abs(comp.phase(2) - Complex(0, -1)) < 1e-15);
    CHECK(compose_systems(SpatialSystem::identity(X), perm1) == perm1);
    CHECK(compose_systems(perm1, SpatialSystem::identity(X)) == perm1);
    CHECK_THROWS_AS(compose_systems(perm1, SpatialSystem::identity(two_atoms)), SpaceMismatch);

    auto const tp = tensor_systems(perm1, perm2);
    CHECK(tp.is_spatial());
    CHECK(tp.blocks[1 * 3 + 2] == std::vector<std::size_t>{2 * 3 + 1});
    auto const relabeled = tensor_systems(perm1, SpatialSystem::identity(one_atom));
    CHECK(materialize(relabeled, 3.0).entries() == materialize(perm1, 3.0).entries());

    auto const [same, q] = dual(SpatialSystem::identity(X), 3.0);
    CHECK(q == doctest::Approx(1.5));
    CHECK(same == SpatialSystem::identity(X));
    CHECK_THROWS_AS(dual(perm1, 1.0), InvalidArgument);

    Rng rng(33);
    for (int c = 0; c < 100; ++c)
    {
        auto const A = random_space(rng, 5, "a");
        auto const B = random_space(rng, 5, "b");
        auto const C = random_space(rng, 5, "c");
        auto const s = random_system(rng, A, B, false);
        auto const v = random_system(rng, B, C, false);
        for (double p : {1.0, 1.5, 3.0})
        {
            auto const vs = compose_systems(v, s);
            CHECK((materialize(vs, p).entries() - materialize(v, p).entries() * materialize(s, p).entries())
                      .cwiseAbs().maxCoeff() < 1e-12);
            auto const ts = tensor_systems(s, v);
            auto const ms = materialize(s, p);
            auto const mv = materialize(v, p);
            CHECK((materialize(ts, p).entries() - kron(ms.entries(), mv.entries())).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(materialize(ts, p).source().weights() == kron(ms, mv).source().weights());
        }
        CHECK(reverse(compose_systems(v, s)) == compose_systems(reverse(s), reverse(v)));

        // Pairing identity <s xi, eta> = <xi, s' eta> at p = 3.
        auto const [sd, q3] = dual(s, 3.0);
        auto const m = materialize(s, 3.0);
        auto const md = materialize(sd, q3);
        CHECK((md.entries() - m.pairing_adjoint().entries()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::VectorXcd const xi = random_vector(rng, static_cast<Eigen::Index>(A.size()));
        Eigen::VectorXcd const eta = random_vector(rng, static_cast<Eigen::Index>(B.size()));
        CHECK(std::abs(pairing(B, m.apply(xi), eta) - pairing(A, xi, md.apply(eta))) < 1e-12);
    }

    // p = 2 with real phases: the dual is the reverse.
    auto const real = SpatialSystem::from_injection(X, X, {2, 0, 1}, {1.0, -1.0, 1.0});
    CHECK(dual(real, 2.0).first == reverse(real));
}

TEST_CASE("tensor norms are multiplicative")
{
    Rng rng(34);
    for (int c = 0; c < 20; ++c)
    {
        auto const A = random_space(rng, 3);
        auto const B = random_space(rng, 3);
        auto const s = random_system(rng, A, A, false);
        auto const v = random_system(rng, B, B, false);
        double const p = 3.0;
        // Scaled by 0.5 and 2 to move the norms away from one.
        auto const a = Complex(0.5) * materialize(s, p);
        auto const b = Complex(2.0) * materialize(v, p);
        double const na = power_estimate(a).estimate;
        double const nb = power_estimate(b).estimate;
        double const nab = power_estimate(kron(a, b)).estimate;
        CHECK(nab == doctest::Approx(na * nb).epsilon(1e-8));
    }
}

TEST_CASE("detect")
{
    Eigen::MatrixXcd rot(2, 2);
    double const c = std::cos(std::numbers::pi / 4);
    rot << c, -c, c, c;
    for (double p : {1.0, 1.5, 2.0, 3.0})
    {
        auto const r = detect(OperatorMatrix(two_atoms, two_atoms, p, rot));
        CHECK(!r.accepted);
        REQUIRE(r.witness);
        CHECK(r.witness->kind == "overlap");
    }

    SpatialSystem const split{one_atom, two_atoms, {0}, {0, 1}, {{0, 1}}, {1.0, -1.0}};
    auto const sr = detect(materialize(split, 3.0));
    CHECK(sr.accepted);
    CHECK(!sr.spatial);
    CHECK(*sr.system == split);

    // Wrong magnitude inside a block.
    Eigen::MatrixXcd bad(2, 1);
    bad << 0.5, 0.9;
    auto const br = detect(OperatorMatrix(one_atom, two_atoms, 3.0, bad));
    CHECK(!br.accepted);
    REQUIRE(br.witness);
    CHECK(br.witness->kind == "block_constancy");

    auto const zr = detect(OperatorMatrix::zero(two_atoms, two_atoms, 3.0));
    CHECK(zr.accepted);
    CHECK(zr.system->E.empty());
}

TEST_CASE("detect inverts materialize on every block map up to four atoms")
{
    Rng rng(35);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::size_t systems = 0;
    for (std::size_t n = 1; n <= 4; ++n)
    {
        for (std::size_t m = 1; m <= 4; ++m)
        {
            std::vector<std::string> xl, yl;
            std::vector<double> xw, yw;
            std::uniform_real_distribution<double> w(0.1, 2.0);
            for (std::size_t i = 0; i < n; ++i)
            {
                xl.push_back("x" + std::to_string(i));
                xw.push_back(w(rng));
            }
            for (std::size_t i = 0; i < m; ++i)
            {
                yl.push_back("y" + std::to_string(i));
                yw.push_back(w(rng));
            }
            FiniteMeasureSpace const X(xl, xw), Y(yl, yw);
            std::size_t total = 1;
            for (std::size_t i = 0; i < m; ++i)
                total *= n + 1;
            for (std::size_t code = 0; code < total; ++code)
            {
                std::vector<std::size_t> owner(m);
                std::size_t rest = code;
                for (std::size_t y = 0; y < m; ++y)
                {
                    owner[y] = rest % (n + 1) == n ? npos : rest % (n + 1);
                    rest /= n + 1;
                }
                std::vector<Complex> phases;
                for (std::size_t y = 0; y < m; ++y)
                    phases.push_back(std::polar(1.0, angle(rng)));
                auto const sys = from_owners(X, Y, owner, phases);
                for (double p : {1.0, 1.5, 3.0})
                {
                    auto const mat = materialize(sys, p);
                    auto const r = detect(mat);
                    REQUIRE(r.accepted);
                    CHECK(r.system->E == sys.E);
                    CHECK(r.system->F == sys.F);
                    CHECK(r.system->blocks == sys.blocks);
                    CHECK(r.spatial == sys.is_spatial());
                    auto const h = rn_weight(sys);
                    for (std::size_t k = 0; k < sys.F.size(); ++k)
                    {
                        CHECK(std::abs(r.system->g[k] - sys.g[k]) < 1e-10);
                        CHECK(std::abs(r.h[sys.F[k]] - h[sys.F[k]]) < 1e-10);
                    }
                    CHECK(materialize(*r.system, p).max_abs_diff(mat) < 1e-9);
                }
                ++systems;
            }
        }
    }
    CHECK(systems > 1000);
}

TEST_CASE("detect on random systems up to eight atoms")
{
    Rng rng(36);
    for (int c = 0; c < 200; ++c)
    {
        auto const dom = random_space(rng, 8);
        auto const cod = random_space(rng, 8);
        auto const sys = random_system(rng, dom, cod, c % 2 == 0);
        auto const r = detect(materialize(sys, 1.5));
        REQUIRE(r.accepted);
        CHECK(r.system->blocks == sys.blocks);
        CHECK(r.system->E == sys.E);
    }
}

TEST_CASE("classify_idempotent")
{
    auto const X = FiniteMeasureSpace::counting(3);
    auto const all = classify_idempotent(OperatorMatrix::identity(X, 3.0));
    CHECK(all.accepted);
    CHECK(all.E == std::vector<std::size_t>{0, 1, 2});
    auto const none = classify_idempotent(OperatorMatrix::zero(X, X, 3.0));
    CHECK(none.accepted);
    CHECK(none.E.empty());
    auto const some = classify_idempotent(OperatorMatrix::multiplication(X, 3.0, {1.0, 0.0, 1.0}));
    CHECK(some.accepted);
    CHECK(some.E == std::vector<std::size_t>{0, 2});

    auto const half = classify_idempotent(OperatorMatrix::multiplication(X, 3.0, {1.0, 0.5, 1.0}));
    CHECK(!half.accepted);
    REQUIRE(half.witness);
    CHECK(std::get<0>(*half.witness) == 1);
    Eigen::MatrixXcd off = Eigen::MatrixXcd::Identity(3, 3);
    off(0, 2) = 1.0;
    CHECK(!classify_idempotent(OperatorMatrix(X, X, 3.0, off)).accepted);

    // Idempotent spatial partial isometries are multiplications by characteristic functions.
    Rng rng(37);
    for (int c = 0; c < 50; ++c)
    {
        auto const S = random_space(rng, 5);
        std::vector<std::size_t> image(S.size());
        std::vector<Complex> phases(S.size(), 1.0);
        for (std::size_t x = 0; x < S.size(); ++x)
            image[x] = rng() % 2 ? x : npos;
        if (std::all_of(image.begin(), image.end(), [](auto y) { return y == npos; }))
            image[0] = 0;
        auto const m = materialize(SpatialSystem::from_injection(S, S, image, phases), 2.5);
        CHECK(m.is_close(m * m, 1e-12));
        CHECK(classify_idempotent(m).accepted);
    }
}

TEST_CASE("homotopy witness")
{
    Rng rng(38);
    for (int c = 0; c < 50; ++c)
    {
        auto const X = FiniteMeasureSpace::uniform(4, 0.25 + 0.25 * (c % 3));
        std::vector<std::size_t> p0 = {0, 1, 2, 3}, p1 = p0;
        std::shuffle(p0.begin(), p0.end(), rng);
        std::shuffle(p1.begin(), p1.end(), rng);
        std::vector<Complex> ph(4, 1.0);
        auto const v0 = SpatialSystem::from_injection(X, X, p0, ph);
        auto const v1 = SpatialSystem::from_injection(X, X, p1, ph);
        auto const xi = homotopy_witness(v0, v1, 3.0);
        if (p0 == p1)
        {
            CHECK(!xi);
            continue;
        }
        REQUIRE(xi);
        auto const diff = materialize(v0, 3.0) - materialize(v1, 3.0);
        CHECK(weighted_norm(*xi, X.weights(), 3.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(weighted_norm(diff.apply(*xi), X.weights(), 3.0) == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-12));
        CHECK(norm_ratio(diff, *xi) >= 1.0);
    }
}
