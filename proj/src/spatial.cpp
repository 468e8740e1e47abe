#include "lpcuntz/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lpcuntz/error.hpp"

namespace lpcuntz
{

namespace
{
constexpr std::size_t npos = SetTransformation::npos;

template<class T>
std::vector<T> permuted(std::vector<T> const& v, std::vector<std::size_t> const& order)
{
    std::vector<T> out;
    out.reserve(order.size());
    for (auto i : order)
        out.push_back(v[i]);
    return out;
}

std::vector<std::size_t> sort_order(std::vector<std::size_t> const& keys)
{
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    return order;
}

void require_spatial(SpatialSystem const& sys, char const* op)
{
    if (!sys.is_spatial())
        throw InvalidArgument(std::string(op) + " requires a spatial system (singleton blocks)");
}
}  // namespace

//---------------------------------------------------------------------------//
// SpatialSystem
//---------------------------------------------------------------------------//

void SpatialSystem::validate()
{
    if (blocks.size() != E.size())
        throw InvalidArgument("spatial system needs one block per atom of E");
    if (g.size() != F.size())
        throw InvalidArgument("spatial system phase must be aligned with F");

    auto const eo = sort_order(E);
    E = permuted(E, eo);
    blocks = permuted(blocks, eo);
    auto const fo = sort_order(F);
    F = permuted(F, fo);
    g = permuted(g, fo);

    for (std::size_t k = 0; k < E.size(); ++k)
    {
        if (E[k] >= domain.size() || (k && E[k] == E[k - 1]))
            throw InvalidArgument("E must list distinct domain atoms");
    }
    std::vector<std::size_t> covered;
    for (auto& b : blocks)
    {
        if (b.empty())
            throw InvalidArgument("spatial system blocks must be nonempty");
        std::sort(b.begin(), b.end());
        covered.insert(covered.end(), b.begin(), b.end());
    }
    std::sort(covered.begin(), covered.end());
    if (std::adjacent_find(covered.begin(), covered.end()) != covered.end())
        throw InvalidArgument("spatial system blocks must be disjoint");
    if (covered != F)
        throw InvalidArgument("spatial system blocks must cover F exactly");
    if (!F.empty() && F.back() >= codomain.size())
        throw InvalidArgument("F refers to a missing codomain atom");
    for (auto const& z : g)
    {
        if (std::abs(std::abs(z) - 1.0) > identity_tol)
            throw InvalidArgument("spatial system phase must have modulus one");
    }
}

bool SpatialSystem::is_spatial() const
{
    return std::all_of(blocks.begin(), blocks.end(),
                       [](auto const& b) { return b.size() == 1; });
}

Complex SpatialSystem::phase(std::size_t y) const
{
    auto it = std::lower_bound(F.begin(), F.end(), y);
    if (it == F.end() || *it != y)
        throw InvalidArgument("phase requested outside F");
    return g[static_cast<std::size_t>(it - F.begin())];
}

std::size_t SpatialSystem::owner(std::size_t y) const
{
    for (std::size_t k = 0; k < blocks.size(); ++k)
    {
        if (std::binary_search(blocks[k].begin(), blocks[k].end(), y))
            return k;
    }
    return npos;
}

SetTransformation SpatialSystem::transformation() const
{
    return SetTransformation(domain.restrict(E), codomain, blocks);
}

SpatialSystem SpatialSystem::identity(FiniteMeasureSpace const& space)
{
    std::vector<std::size_t> image(space.size());
    std::iota(image.begin(), image.end(), 0);
    return from_injection(space, space, image, std::vector<Complex>(space.size(), 1.0));
}

SpatialSystem SpatialSystem::from_injection(FiniteMeasureSpace const& domain,
                                            FiniteMeasureSpace const& codomain,
                                            std::vector<std::size_t> const& image,
                                            std::vector<Complex> const& phases)
{
    if (image.size() != domain.size() || phases.size() != domain.size())
        throw InvalidArgument("from_injection: one image and phase per domain atom");
    SpatialSystem sys{domain, codomain, {}, {}, {}, {}};
    for (std::size_t x = 0; x < image.size(); ++x)
    {
        if (image[x] == npos)
            continue;
        sys.E.push_back(x);
        sys.blocks.push_back({image[x]});
        sys.F.push_back(image[x]);
        sys.g.push_back(phases[x]);
    }
    sys.validate();
    return sys;
}

//---------------------------------------------------------------------------//
// Materialization
//---------------------------------------------------------------------------//

std::vector<double> rn_weight(SpatialSystem const& sys)
{
    std::vector<double> h(sys.codomain.size(), 0.0);
    for (std::size_t k = 0; k < sys.E.size(); ++k)
    {
        double const ratio = sys.domain.weight(sys.E[k]) / sys.codomain.measure(sys.blocks[k]);
        for (auto y : sys.blocks[k])
            h[y] = ratio;
    }
    return h;
}

OperatorMatrix materialize(SpatialSystem const& sys, double p)
{
    OperatorMatrix out = OperatorMatrix::zero(sys.domain, sys.codomain, p);
    Eigen::MatrixXcd m = out.entries();
    auto const h = rn_weight(sys);
    for (std::size_t k = 0; k < sys.E.size(); ++k)
    {
        for (auto y : sys.blocks[k])
        {
            m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(sys.E[k])) =
                sys.phase(y) * std::pow(h[y], 1.0 / p);
        }
    }
    return OperatorMatrix(sys.domain, sys.codomain, p, std::move(m));
}

//---------------------------------------------------------------------------//
// Calculus
//---------------------------------------------------------------------------//

SpatialSystem reverse(SpatialSystem const& sys)
{
    require_spatial(sys, "reverse");
    std::vector<std::size_t> image(sys.codomain.size(), npos);
    std::vector<Complex> phases(sys.codomain.size(), 1.0);
    for (std::size_t k = 0; k < sys.E.size(); ++k)
    {
        std::size_t const y = sys.blocks[k][0];
        image[y] = sys.E[k];
        phases[y] = std::conj(sys.phase(y));
    }
    return SpatialSystem::from_injection(sys.codomain, sys.domain, image, phases);
}

SpatialSystem compose_systems(SpatialSystem const& v, SpatialSystem const& s)
{
    require_spatial(v, "compose_systems");
    require_spatial(s, "compose_systems");
    if (!s.codomain.equivalent(v.domain))
        throw SpaceMismatch("compose_systems: codomain of s is not the domain of v");
    std::vector<std::size_t> image(s.domain.size(), npos);
    std::vector<Complex> phases(s.domain.size(), 1.0);
    for (std::size_t k = 0; k < s.E.size(); ++k)
    {
        std::size_t const y = s.blocks[k][0];
        auto const it = std::lower_bound(v.E.begin(), v.E.end(), y);
        if (it == v.E.end() || *it != y)
            continue;
        std::size_t const m = static_cast<std::size_t>(it - v.E.begin());
        std::size_t const z = v.blocks[m][0];
        image[s.E[k]] = z;
        phases[s.E[k]] = v.phase(z) * s.phase(y);
    }
    return SpatialSystem::from_injection(s.domain, v.codomain, image, phases);
}

SpatialSystem tensor_systems(SpatialSystem const& s, SpatialSystem const& v)
{
    std::size_t const n2 = v.domain.size();
    std::size_t const m2 = v.codomain.size();
    SpatialSystem out{s.domain.product(v.domain), s.codomain.product(v.codomain), {}, {}, {},
                      {}};
    for (std::size_t a = 0; a < s.E.size(); ++a)
    {
        for (std::size_t b = 0; b < v.E.size(); ++b)
        {
            out.E.push_back(s.E[a] * n2 + v.E[b]);
            std::vector<std::size_t> block;
            for (auto y1 : s.blocks[a])
            {
                for (auto y2 : v.blocks[b])
                {
                    block.push_back(y1 * m2 + y2);
                    out.F.push_back(y1 * m2 + y2);
                    out.g.push_back(s.phase(y1) * v.phase(y2));
                }
            }
            out.blocks.push_back(std::move(block));
        }
    }
    out.validate();
    return out;
}

std::pair<SpatialSystem, double> dual(SpatialSystem const& sys, double p)
{
    require_spatial(sys, "dual");
    if (!(p > 1.0))
        throw InvalidArgument("dual requires p > 1");
    std::vector<std::size_t> image(sys.codomain.size(), npos);
    std::vector<Complex> phases(sys.codomain.size(), 1.0);
    for (std::size_t k = 0; k < sys.E.size(); ++k)
    {
        std::size_t const y = sys.blocks[k][0];
        image[y] = sys.E[k];
        phases[y] = sys.phase(y);
    }
    return {SpatialSystem::from_injection(sys.codomain, sys.domain, image, phases),
            conjugate_exponent(p)};
}

//---------------------------------------------------------------------------//
// Detection and classification
//---------------------------------------------------------------------------//

DetectResult detect(OperatorMatrix const& a, double tol)
{
    DetectResult res;
    auto const& m = a.entries();
    double const scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
    double const zero_tol = tol * scale;
    auto const& mu = a.source();
    auto const& nu = a.target();

    // Column supports must be disjoint before block constancy is examined.
    std::vector<std::size_t> owner(nu.size(), npos);
    std::vector<std::vector<std::size_t>> supports(mu.size());
    for (std::size_t x = 0; x < mu.size(); ++x)
    {
        for (std::size_t y = 0; y < nu.size(); ++y)
        {
            if (std::abs(m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)))
                <= zero_tol)
                continue;
            if (owner[y] != npos)
            {
                res.witness = DetectWitness{"overlap", owner[y], x, y, 0.0, 0.0};
                res.message = "columns " + mu.label(owner[y]) + " and " + mu.label(x)
                              + " overlap at row " + nu.label(y);
                return res;
            }
            owner[y] = x;
            supports[x].push_back(y);
        }
    }

    SpatialSystem sys{mu, nu, {}, {}, {}, {}};
    for (std::size_t x = 0; x < mu.size(); ++x)
    {
        auto& block = supports[x];
        if (block.empty())
            continue;
        double const expected = std::pow(mu.weight(x) / nu.measure(block), 1.0 / a.p());
        for (auto y : block)
        {
            double const value =
                std::abs(m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)));
            if (std::abs(value - expected) > tol * std::max(1.0, expected))
            {
                res.witness = DetectWitness{"block_constancy", x, x, y, value, expected};
                res.message = "column " + mu.label(x) + " at row " + nu.label(y)
                              + " has modulus " + std::to_string(value) + ", expected "
                              + std::to_string(expected);
                return res;
            }
            sys.F.push_back(y);
            sys.g.push_back(m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x))
                            / value);
        }
        sys.E.push_back(x);
        sys.blocks.push_back(std::move(block));
    }
    sys.validate();
    res.accepted = true;
    res.h = rn_weight(sys);
    res.spatial = sys.is_spatial();
    res.message = res.spatial ? "spatial" : "semispatial, not spatial";
    res.system = std::move(sys);
    return res;
}

IdempotentResult classify_idempotent(OperatorMatrix const& a, double tol)
{
    IdempotentResult res;
    auto const& m = a.entries();
    if (m.rows() != m.cols())
    {
        res.witness = std::make_tuple(std::size_t(0), std::size_t(0), Complex(0.0));
        return res;
    }
    for (Eigen::Index y = 0; y < m.rows(); ++y)
    {
        for (Eigen::Index x = 0; x < m.cols(); ++x)
        {
            Complex const v = m(y, x);
            bool ok = (x == y) ? (std::abs(v) <= tol || std::abs(v - 1.0) <= tol)
                               : std::abs(v) <= tol;
            if (!ok)
            {
                res.witness = std::make_tuple(static_cast<std::size_t>(y),
                                              static_cast<std::size_t>(x), v);
                res.E.clear();
                return res;
            }
            if (x == y && std::abs(v - 1.0) <= tol)
                res.E.push_back(static_cast<std::size_t>(x));
        }
    }
    res.accepted = true;
    return res;
}

namespace
{
// (sum_y nu(y) |A(y,x)|^p / mu(x))^{1/p} for each column.
std::vector<double> column_ratios(OperatorMatrix const& a)
{
    std::vector<double> out(static_cast<std::size_t>(a.cols()));
    for (Eigen::Index x = 0; x < a.cols(); ++x)
    {
        double const n =
            weighted_norm(a.entries().col(x), a.target().weights(), a.p());
        out[static_cast<std::size_t>(x)] =
            n / std::pow(a.source().weight(static_cast<std::size_t>(x)), 1.0 / a.p());
    }
    return out;
}
}  // namespace

IsometryResult isometry_test(OperatorMatrix const& a, double tol)
{
    IsometryResult res;
    res.scale = 1.0;
    auto const& m = a.entries();
    if (a.p() == 2.0)
    {
        Eigen::VectorXd nu(m.rows());
        for (Eigen::Index y = 0; y < m.rows(); ++y)
            nu(y) = a.target().weight(static_cast<std::size_t>(y));
        Eigen::MatrixXcd gram = m.adjoint() * nu.asDiagonal() * m;
        for (Eigen::Index x = 0; x < m.cols(); ++x)
        {
            double const mux = a.source().weight(static_cast<std::size_t>(x));
            for (Eigen::Index z = 0; z < m.cols(); ++z)
            {
                Complex const want = (x == z) ? Complex(mux) : Complex(0.0);
                double const ref = std::sqrt(mux * a.source().weight(static_cast<std::size_t>(z)));
                if (std::abs(gram(x, z) - want) > tol * ref)
                {
                    res.witness = "Gram entry (" + a.source().label(static_cast<std::size_t>(x))
                                  + ", " + a.source().label(static_cast<std::size_t>(z))
                                  + ") differs from the source weight";
                    return res;
                }
            }
        }
        res.isometry = true;
        return res;
    }
    double const scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
    std::vector<std::size_t> owner(static_cast<std::size_t>(m.rows()), npos);
    for (Eigen::Index x = 0; x < m.cols(); ++x)
    {
        for (Eigen::Index y = 0; y < m.rows(); ++y)
        {
            if (std::abs(m(y, x)) <= tol * scale)
                continue;
            auto& o = owner[static_cast<std::size_t>(y)];
            if (o != npos)
            {
                res.witness = "columns " + a.source().label(o) + " and "
                              + a.source().label(static_cast<std::size_t>(x))
                              + " overlap at row " + a.target().label(static_cast<std::size_t>(y));
                return res;
            }
            o = static_cast<std::size_t>(x);
        }
    }
    auto const ratios = column_ratios(a);
    for (std::size_t x = 0; x < ratios.size(); ++x)
    {
        if (std::abs(ratios[x] - 1.0) > tol)
        {
            res.witness = "column " + a.source().label(x) + " has norm ratio "
                          + std::to_string(ratios[x]);
            return res;
        }
    }
    res.isometry = true;
    return res;
}

IsometryResult scaled_isometry_test(OperatorMatrix const& a, double tol)
{
    auto const ratios = column_ratios(a);
    double const c = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
    if (c == 0.0)
        return {true, 0.0, ""};
    IsometryResult res = isometry_test(Complex(1.0 / c) * a, tol);
    res.scale = c;
    return res;
}

std::optional<Eigen::VectorXcd> homotopy_witness(SpatialSystem const& v0,
                                                 SpatialSystem const& v1, double p)
{
    for (auto const* v : {&v0, &v1})
    {
        if (!v->is_spatial() || v->E.size() != v->domain.size()
            || v->F.size() != v->codomain.size())
            throw InvalidArgument("homotopy_witness requires bijective spatial systems");
    }
    if (!v0.domain.equivalent(v1.domain) || !v0.codomain.equivalent(v1.codomain))
        throw SpaceMismatch("homotopy_witness: systems act between different spaces");
    for (std::size_t x = 0; x < v0.E.size(); ++x)
    {
        if (v0.blocks[x] != v1.blocks[x])
        {
            Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(v0.domain.size()));
            xi(static_cast<Eigen::Index>(x)) = std::pow(v0.domain.weight(x), -1.0 / p);
            return xi;
        }
    }
    return std::nullopt;
}

//---------------------------------------------------------------------------//
// JSON
//---------------------------------------------------------------------------//

nlohmann::json to_json(SpatialSystem const& sys)
{
    nlohmann::json E = nlohmann::json::array();
    nlohmann::json blocks = nlohmann::json::object();
    for (std::size_t k = 0; k < sys.E.size(); ++k)
    {
        E.push_back(sys.domain.label(sys.E[k]));
        nlohmann::json b = nlohmann::json::array();
        for (auto y : sys.blocks[k])
            b.push_back(sys.codomain.label(y));
        blocks[sys.domain.label(sys.E[k])] = b;
    }
    nlohmann::json F = nlohmann::json::array();
    nlohmann::json g = nlohmann::json::array();
    for (std::size_t k = 0; k < sys.F.size(); ++k)
    {
        F.push_back(sys.codomain.label(sys.F[k]));
        g.push_back({{"re", sys.g[k].real()}, {"im", sys.g[k].imag()}});
    }
    return {{"domain", to_json(sys.domain)},
            {"codomain", to_json(sys.codomain)},
            {"E", E},
            {"F", F},
            {"blocks", blocks},
            {"g", g}};
}

SpatialSystem system_from_json(nlohmann::json const& j)
{
    SpatialSystem sys{space_from_json(j.at("domain")), space_from_json(j.at("codomain")),
                      {}, {}, {}, {}};
    for (auto const& lbl : j.at("E"))
    {
        auto const name = lbl.get<std::string>();
        sys.E.push_back(sys.domain.index_of(name));
        std::vector<std::size_t> block;
        for (auto const& y : j.at("blocks").at(name))
            block.push_back(sys.codomain.index_of(y.get<std::string>()));
        sys.blocks.push_back(std::move(block));
    }
    auto const& F = j.at("F");
    auto const& g = j.at("g");
    if (F.size() != g.size())
        throw InvalidArgument("system JSON: F and g differ in length");
    for (std::size_t k = 0; k < F.size(); ++k)
    {
        sys.F.push_back(sys.codomain.index_of(F[k].get<std::string>()));
        sys.g.emplace_back(g[k].at("re").get<double>(), g[k].at("im").get<double>());
    }
    sys.validate();
    return sys;
}

}  // namespace lpcuntz
