#include "lpcuntz/pnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lpcuntz/error.hpp"

namespace lpcuntz
{

namespace
{
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

Complex sgn(Complex z)
{
    double const r = std::abs(z);
    return r == 0.0 ? Complex(0.0) : z / r;
}

// |v|^{r-1} sgn(v), scaled to unit norm in the conjugate exponent of r.
VectorXcd dual_map(VectorXcd const& v, double r)
{
    double const vmax = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
    VectorXcd out = VectorXcd::Zero(v.size());
    if (vmax == 0.0)
        return out;
    for (Index i = 0; i < v.size(); ++i)
        out(i) = std::pow(std::abs(v(i)) / vmax, r - 1.0) * sgn(v(i));
    return out / lp_norm(out, conjugate_exponent(r));
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

VectorXcd random_complex(Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal;
    VectorXcd v(n);
    for (Index i = 0; i < n; ++i)
    {
        double const re = normal(rng);
        v(i) = Complex(re, normal(rng));
    }
    return v;
}

bool is_nonnegative(MatrixXcd const& b)
{
    for (Index i = 0; i < b.size(); ++i)
    {
        Complex const z = b.data()[i];
        if (z.imag() != 0.0 || z.real() < 0.0)
            return false;
    }
    return true;
}

double riesz_thorin(MatrixXcd const& b, double p)
{
    if (b.size() == 0)
        return 0.0;
    double const n1 = b.cwiseAbs().colwise().sum().maxCoeff();
    double const ninf = b.cwiseAbs().rowwise().sum().maxCoeff();
    return std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 - 1.0 / p);
}

double unweighted_ratio(MatrixXcd const& b, VectorXcd const& x, double p)
{
    double const nx = lp_norm(x, p);
    return nx == 0.0 ? 0.0 : lp_norm(b * x, p) / nx;
}

struct Ascent
{
    VectorXcd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

Ascent boyd(MatrixXcd const& b, double p, VectorXcd x, PowerOptions const& opts)
{
    double const q = conjugate_exponent(p);
    Ascent best;
    x /= lp_norm(x, p);
    double prev = -1.0;
    for (int it = 1; it <= opts.max_iterations; ++it)
    {
        VectorXcd const y = b * x;
        double const val = lp_norm(y, p);
        best.iterations = it;
        if (val > best.value)
        {
            best.value = val;
            best.x = x;
        }
        if (val == 0.0)
        {
            best.converged = true;
            break;
        }
        VectorXcd const z = dual_map(y, p);
        VectorXcd const w = b.adjoint() * z;
        double const wq = lp_norm(w, q);
        double const inner = std::real(w.dot(x));
        if (wq <= inner * (1.0 + opts.tol) || std::abs(val - prev) <= opts.tol * val)
        {
            best.converged = true;
            break;
        }
        prev = val;
        x = dual_map(w, q);
    }
    if (best.x.size() == 0)
        best.x = x;
    return best;
}

NormResult finish(MatrixXcd const& b, double p, VectorXcd const& x, double estimate)
{
    NormResult r;
    r.witness = x;
    r.certified_lower = unweighted_ratio(b, x, p);
    r.estimate = std::max(estimate, r.certified_lower);
    r.upper_bound = std::max(riesz_thorin(b, p), r.estimate);
    return r;
}

// Radical inverse of i in base b.
double halton(std::uint64_t i, std::uint64_t base)
{
    double f = 1.0, r = 0.0;
    while (i > 0)
    {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

constexpr std::uint64_t primes[16] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

// Coordinate pattern search on the real and imaginary parts.
Ascent pattern_search(MatrixXcd const& b, double p, VectorXcd x, int budget)
{
    Ascent a;
    x /= lp_norm(x, p);
    a.x = x;
    a.value = unweighted_ratio(b, x, p);
    double h = 0.25;
    int evals = 0;
    Complex const dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    while (h > 1e-12 && evals < budget)
    {
        bool improved = false;
        for (Index i = 0; i < x.size(); ++i)
        {
            for (auto const& dir : dirs)
            {
                VectorXcd trial = a.x;
                trial(i) += h * dir;
                double const nt = lp_norm(trial, p);
                if (nt == 0.0)
                    continue;
                trial /= nt;
                double const v = unweighted_ratio(b, trial, p);
                ++evals;
                if (v > a.value)
                {
                    a.value = v;
                    a.x = trial;
                    improved = true;
                }
            }
        }
        ++a.iterations;
        if (!improved)
            h *= 0.5;
    }
    a.converged = h <= 1e-12;
    return a;
}
}  // namespace

double lp_norm(Eigen::VectorXcd const& v, double p)
{
    if (v.size() == 0)
        return 0.0;
    double const vmax = v.cwiseAbs().maxCoeff();
    if (vmax == 0.0 || std::isinf(p))
        return vmax;
    double total = 0.0;
    for (Index i = 0; i < v.size(); ++i)
        total += std::pow(std::abs(v(i)) / vmax, p);
    return vmax * std::pow(total, 1.0 / p);
}

double norm_ratio(OperatorMatrix const& a, Eigen::VectorXcd const& xi)
{
    double const nx = weighted_norm(xi, a.source().weights(), a.p());
    if (nx == 0.0)
        return 0.0;
    return weighted_norm(a.apply(xi), a.target().weights(), a.p()) / nx;
}

NormResult power_estimate(Eigen::MatrixXcd const& b, double p, PowerOptions const& opts)
{
    if (!(p >= 1.0) || std::isinf(p))
        throw InvalidArgument("power_estimate needs p in [1, inf)");
    Index const n = b.cols();
    if (n == 0 || b.rows() == 0)
    {
        NormResult r;
        r.witness = VectorXcd::Zero(n);
        r.method = "exact-p1";
        return r;
    }
    if (p == 1.0)
    {
        Index j = 0;
        double const v = b.cwiseAbs().colwise().sum().maxCoeff(&j);
        NormResult r = finish(b, p, VectorXcd::Unit(n, j), v);
        r.method = "exact-p1";
        return r;
    }
    if (p == 2.0)
    {
        Eigen::BDCSVD<MatrixXcd> svd(b, Eigen::ComputeThinV);
        NormResult r = finish(b, p, svd.matrixV().col(0), svd.singularValues()(0));
        r.method = "svd";
        return r;
    }

    std::vector<VectorXcd> starts;
    Index best_col = 0;
    Eigen::VectorXd colnorms(n);
    for (Index j = 0; j < n; ++j)
        colnorms(j) = lp_norm(b.col(j), p);
    colnorms.maxCoeff(&best_col);
    starts.push_back(VectorXcd::Ones(n));
    if (!is_nonnegative(b))
    {
        starts.push_back(VectorXcd::Unit(n, best_col));
        for (int k = 2; k < opts.restarts; ++k)
        {
            auto rng = stream(opts.seed, static_cast<std::uint64_t>(k));
            starts.push_back(random_complex(n, rng));
        }
    }

    Ascent best;
    best.x = VectorXcd::Unit(n, best_col);
    best.value = colnorms(best_col);
    bool all_converged = true;
    int iterations = 0;
    for (auto const& s : starts)
    {
        Ascent a = boyd(b, p, s, opts);
        iterations += a.iterations;
        all_converged = all_converged && a.converged;
        if (a.value > best.value)
            best = a;
    }
    NormResult r = finish(b, p, best.x, best.value);
    r.method = "boyd";
    r.iterations = iterations;
    r.converged = all_converged;
    return r;
}

NormResult power_estimate(OperatorMatrix const& a, PowerOptions const& opts)
{
    NormResult r = power_estimate(a.unweighted(), a.p(), opts);
    for (Index x = 0; x < r.witness.size(); ++x)
        r.witness(x) /= std::pow(a.source().weight(static_cast<std::size_t>(x)), 1.0 / a.p());
    if (r.witness.size())
        r.certified_lower = norm_ratio(a, r.witness);
    r.estimate = std::max(r.estimate, r.certified_lower);
    return r;
}

NormResult oracle_grid(Eigen::MatrixXcd const& b, double p, int samples, std::uint64_t seed)
{
    Index const n = b.cols();
    if (n > 8)
        throw InvalidArgument("oracle_grid supports source dimension at most 8");
    if (n == 0)
    {
        NormResult r;
        r.method = "oracle-grid";
        return r;
    }
    std::vector<std::pair<double, VectorXcd>> pool;
    auto consider = [&](VectorXcd v) {
        double const nv = lp_norm(v, p);
        if (nv == 0.0)
            return;
        v /= nv;
        pool.emplace_back(unweighted_ratio(b, v, p), std::move(v));
    };
    for (Index j = 0; j < n; ++j)
        consider(VectorXcd::Unit(n, j));
    consider(VectorXcd::Ones(n));
    auto rng = stream(seed, 0);
    for (int k = 0; k < samples / 2; ++k)
        consider(random_complex(n, rng));
    for (int k = 1; k <= samples - samples / 2; ++k)
    {
        VectorXcd v(n);
        for (Index i = 0; i < n; ++i)
        {
            double const r = halton(static_cast<std::uint64_t>(k), primes[2 * i]);
            double const t = halton(static_cast<std::uint64_t>(k), primes[2 * i + 1]);
            v(i) = std::polar(r, 2.0 * M_PI * t);
        }
        consider(v);
    }
    std::sort(pool.begin(), pool.end(),
              [](auto const& x, auto const& y) { return x.first > y.first; });

    Ascent best;
    int iterations = 0;
    bool converged = true;
    std::size_t const refine = std::min<std::size_t>(6, pool.size());
    for (std::size_t k = 0; k < refine; ++k)
    {
        Ascent a = pattern_search(b, p, pool[k].second, 400000);
        iterations += a.iterations;
        converged = converged && a.converged;
        if (a.value > best.value)
            best = a;
    }
    NormResult r;
    r.witness = best.x;
    r.certified_lower = unweighted_ratio(b, best.x, p);
    r.estimate = r.certified_lower;
    r.upper_bound = std::max(riesz_thorin(b, p), r.estimate);
    r.method = "oracle-grid";
    r.iterations = iterations;
    r.converged = converged;
    return r;
}

NormResult oracle_grid(OperatorMatrix const& a, int samples, std::uint64_t seed)
{
    NormResult r = oracle_grid(a.unweighted(), a.p(), samples, seed);
    for (Index x = 0; x < r.witness.size(); ++x)
        r.witness(x) /= std::pow(a.source().weight(static_cast<std::size_t>(x)), 1.0 / a.p());
    if (r.witness.size())
        r.certified_lower = r.estimate = norm_ratio(a, r.witness);
    return r;
}

OperatorMatrix rank_one_operator(Eigen::VectorXcd const& mu, Eigen::VectorXcd const& eta,
                                 double p, FiniteMeasureSpace const& source,
                                 FiniteMeasureSpace const& target)
{
    if (static_cast<std::size_t>(mu.size()) != target.size()
        || static_cast<std::size_t>(eta.size()) != source.size())
        throw SpaceMismatch("rank_one_operator: vectors do not match the spaces");
    Eigen::VectorXcd weighted_eta = eta;
    for (Index x = 0; x < eta.size(); ++x)
        weighted_eta(x) *= source.weight(static_cast<std::size_t>(x));
    return OperatorMatrix(source, target, p, mu * weighted_eta.transpose());
}

double rank_one_exact(Eigen::VectorXcd const& mu, Eigen::VectorXcd const& eta, double p,
                      FiniteMeasureSpace const& source, FiniteMeasureSpace const& target)
{
    if (static_cast<std::size_t>(mu.size()) != target.size()
        || static_cast<std::size_t>(eta.size()) != source.size())
        throw SpaceMismatch("rank_one_exact: vectors do not match the spaces");
    double const q = conjugate_exponent(p);
    double const eta_q = std::isinf(q) ? (eta.size() ? eta.cwiseAbs().maxCoeff() : 0.0)
                                       : weighted_norm(eta, source.weights(), q);
    return weighted_norm(mu, target.weights(), p) * eta_q;
}

}  // namespace lpcuntz
