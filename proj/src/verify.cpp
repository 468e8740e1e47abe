#include "lpcuntz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lpcuntz/error.hpp"
#include "lpcuntz/pnorm.hpp"
#include "lpcuntz/reps.hpp"

namespace lpcuntz
{

//---------------------------------------------------------------------------//
// Random inputs
//---------------------------------------------------------------------------//

namespace
{
Scalar random_dyadic(Rng& rng)
{
    std::uniform_int_distribution<int> num(-4, 4);
    for (;;)
    {
        int const a = num(rng), b = num(rng);
        if (a != 0 || b != 0)
            return Scalar(mpq_class(a, 4), mpq_class(b, 4));
    }
}

Word random_word(Rng& rng, int letters, int len)
{
    std::uniform_int_distribution<int> letter(1, letters);
    Word w(static_cast<std::size_t>(len));
    for (auto& x : w)
        x = letter(rng);
    return w;
}

int letters_of(AlgebraKind const& kind)
{
    return kind.is_finite() ? kind.d() : 4;
}
}  // namespace

Element random_element(AlgebraKind kind, Rng& rng, int terms, int max_len)
{
    std::uniform_int_distribution<int> len(0, max_len);
    Element a(kind);
    for (int i = 0; i < terms; ++i)
    {
        a += Element::monomial(kind, random_dyadic(rng), random_word(rng, letters_of(kind), len(rng)),
                               random_word(rng, letters_of(kind), len(rng)));
    }
    return a;
}

Element random_degree_zero(AlgebraKind kind, int m, Rng& rng, Eigen::MatrixXcd& coeffs)
{
    auto const words = words_of_length(kind.d(), m);
    auto const n = static_cast<Eigen::Index>(words.size());
    coeffs = Eigen::MatrixXcd::Zero(n, n);
    Element a(kind);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        for (Eigen::Index j = 0; j < n; ++j)
        {
            Scalar const c = random_dyadic(rng);
            coeffs(i, j) = c.to_complex();
            a += Element::monomial(kind, c, words[static_cast<std::size_t>(i)],
                                   words[static_cast<std::size_t>(j)]);
        }
    }
    return a;
}

FiniteMeasureSpace random_space(Rng& rng, std::size_t max_atoms, std::string const& prefix)
{
    std::uniform_int_distribution<std::size_t> size(1, max_atoms);
    std::uniform_real_distribution<double> weight(0.1, 2.0);
    std::size_t const n = size(rng);
    std::vector<std::string> labels;
    std::vector<double> weights;
    for (std::size_t i = 0; i < n; ++i)
    {
        labels.push_back(prefix + std::to_string(i));
        weights.push_back(weight(rng));
    }
    return FiniteMeasureSpace(labels, weights);
}

SpatialSystem random_system(Rng& rng, FiniteMeasureSpace const& domain,
                            FiniteMeasureSpace const& codomain, bool allow_blocks)
{
    std::vector<std::size_t> xs(domain.size()), ys(codomain.size());
    std::iota(xs.begin(), xs.end(), 0);
    std::iota(ys.begin(), ys.end(), 0);
    std::shuffle(xs.begin(), xs.end(), rng);
    std::shuffle(ys.begin(), ys.end(), rng);
    std::size_t const kmax = std::min(xs.size(), ys.size());
    std::size_t const k = std::uniform_int_distribution<std::size_t>(1, kmax)(rng);

    SpatialSystem sys{domain, codomain, {}, {}, {}, {}};
    sys.blocks.resize(k);
    for (std::size_t i = 0; i < k; ++i)
    {
        sys.E.push_back(xs[i]);
        sys.blocks[i].push_back(ys[i]);
    }
    if (allow_blocks)
    {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        for (std::size_t i = k; i < ys.size(); ++i)
        {
            if (rng() % 2 == 0)
                continue;
            auto& b = sys.blocks[pick(rng)];
            if (b.size() < 3)
                b.push_back(ys[i]);
        }
    }
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (auto& b : sys.blocks)
    {
        std::sort(b.begin(), b.end());
        for (auto y : b)
        {
            sys.F.push_back(y);
            sys.g.push_back(std::polar(1.0, angle(rng)));
        }
    }
    sys.validate();
    return sys;
}

Eigen::VectorXcd random_vector(Rng& rng, Eigen::Index n)
{
    std::normal_distribution<double> normal;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        double const re = normal(rng);
        v(i) = Complex(re, normal(rng));
    }
    return v;
}

//---------------------------------------------------------------------------//
// Suite plumbing
//---------------------------------------------------------------------------//

bool SuiteResult::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](auto const& c) { return c.passed; });
}

nlohmann::json to_json(SuiteResult const& r)
{
    nlohmann::json checks = nlohmann::json::array();
    for (auto const& c : r.checks)
    {
        nlohmann::json j = {{"name", c.name},
                            {"passed", c.passed},
                            {"measured", c.measured},
                            {"tolerance", c.tolerance}};
        if (!c.detail.empty())
            j["witness"] = c.detail;
        checks.push_back(std::move(j));
    }
    return {{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}};
}

namespace
{
// Accumulates the worst deviation over many cases into one check.
class Tally
{
  public:
    Tally(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

    void add(double deviation, std::string const& where)
    {
        ++cases_;
        if (deviation > worst_ || std::isnan(deviation))
        {
            worst_ = std::isnan(deviation) ? INFINITY : deviation;
            where_ = where;
        }
    }
    // Boolean case: a failure counts as infinite deviation.
    void add_bool(bool ok, std::string const& where) { add(ok ? 0.0 : INFINITY, where); }

    CheckResult result() const
    {
        CheckResult c{name_ + " (" + std::to_string(cases_) + " cases)", worst_ <= tol_, worst_,
                      tol_, {}};
        if (!c.passed)
            c.detail = where_;
        return c;
    }

  private:
    std::string name_;
    double tol_;
    double worst_ = 0.0;
    std::string where_;
    int cases_ = 0;
};

std::string p_text(double p)
{
    std::ostringstream os;
    os << p;
    return os.str();
}

double rel_dev(double a, double b)
{
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

OperatorMatrix combine(std::vector<OperatorMatrix> const& ops, Eigen::VectorXcd const& c)
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(ops[0].rows(), ops[0].cols());
    for (std::size_t j = 0; j < ops.size(); ++j)
        m += c(static_cast<Eigen::Index>(j)) * ops[j].entries();
    return OperatorMatrix(ops[0].source(), ops[0].target(), ops[0].p(), std::move(m));
}

std::vector<Complex> indicator(std::size_t n, std::vector<std::size_t> const& atoms)
{
    std::vector<Complex> f(n, 0.0);
    for (auto a : atoms)
        f[a] = 1.0;
    return f;
}
}  // namespace

//---------------------------------------------------------------------------//
// relations
//---------------------------------------------------------------------------//

SuiteResult verify_relations(VerifyOptions const&)
{
    SuiteResult out{"relations", {}};
    std::vector<std::pair<std::string, Tally>> tallies;
    auto tally = [&](std::string const& name) -> Tally& {
        for (auto& [n, t] : tallies)
        {
            if (n == name)
                return t;
        }
        tallies.emplace_back(name, Tally(name, identity_tol));
        return tallies.back().second;
    };
    for (int d : {2, 3})
    {
        auto const L = AlgebraKind::leavitt(d);
        auto const C = AlgebraKind::cohn(d);
        FiniteMeasureSpace const Y({"a", "b", "c"}, {0.5, 2.0, 1.0 / 3.0});
        for (double p : {1.0, 1.5, 2.0, 3.0, 4.0})
        {
            auto const I = interval_rep(L, p);
            auto const S = sequence_rep(L, p);
            std::vector<std::pair<std::string, Representation>> reps = {
                {"interval", I},
                {"sequence", S},
                {"sequence (Cohn)", sequence_rep(C, p)},
                {"fourier_twist", fourier_twist(I)},
                {"direct_sum_p", direct_sum_p({I, S, fourier_twist(I)})},
                {"tensor_identity", tensor_identity(I, Y)},
                {"twist_by_invertible", twist_by_invertible(
                                            S, OperatorMatrix(Y, Y, p,
                                                              Eigen::Vector3cd(1.0, 0.5, 4.0)
                                                                  .asDiagonal()
                                                                  .toDenseMatrix()))}};
            for (int n : {1, 2, 5, 8})
                reps.emplace_back("free_rep", free_rep(I, n));
            if (p > 1.0)
            {
                double const q = conjugate_exponent(p);
                reps.emplace_back("dual_rep", dual_rep(interval_rep(L, q)));
                reps.emplace_back("dual_rep", dual_rep(fourier_twist(interval_rep(L, q))));
            }
            for (auto const& [name, rep] : reps)
            {
                auto const r = check_relations(rep, 4);
                tally(name).add(r.max_deviation, "d = " + std::to_string(d) + ", p = " + p_text(p)
                                                     + ": " + r.worst);
            }
        }
    }
    for (auto const& [n, t] : tallies)
        out.checks.push_back(t.result());
    return out;
}

//---------------------------------------------------------------------------//
// lamperti
//---------------------------------------------------------------------------//

SuiteResult verify_lamperti(VerifyOptions const& opts)
{
    SuiteResult out{"lamperti", {}};
    Rng rng(opts.seed);
    Tally structure("detect recovers E, F and blocks", 0.0);
    Tally phases("detect recovers phases", 1e-10);
    Tally weights("detect recovers Radon-Nikodym weights", 1e-10);
    double const ps[] = {1.0, 1.5, 3.0};
    for (int c = 0; c < opts.cases; ++c)
    {
        double const p = ps[c % 3];
        auto const dom = random_space(rng, opts.atoms, "x");
        auto const cod = random_space(rng, opts.atoms, "y");
        auto const sys = random_system(rng, dom, cod, c % 2 == 1);
        auto const det = detect(materialize(sys, p));
        std::string const where = "case " + std::to_string(c) + " at p = " + p_text(p);
        if (!det.accepted)
        {
            structure.add_bool(false, where + ": " + det.message);
            continue;
        }
        auto const& got = *det.system;
        structure.add_bool(got.E == sys.E && got.F == sys.F && got.blocks == sys.blocks, where);
        double dg = 0.0;
        for (std::size_t i = 0; i < sys.g.size() && i < got.g.size(); ++i)
            dg = std::max(dg, std::abs(got.g[i] - sys.g[i]));
        phases.add(dg, where);
        auto const h = rn_weight(sys);
        double dh = 0.0;
        for (std::size_t y = 0; y < h.size(); ++y)
            dh = std::max(dh, std::abs(det.h[y] - h[y]));
        weights.add(dh, where);
    }
    out.checks.push_back(structure.result());
    out.checks.push_back(phases.result());
    out.checks.push_back(weights.result());

    auto const two = FiniteMeasureSpace::counting(2);
    double const c = std::sqrt(0.5);
    Eigen::MatrixXcd rot(2, 2);
    rot << c, -c, c, c;
    for (double p : ps)
    {
        auto const det = detect(OperatorMatrix(two, two, p, rot));
        bool const ok = !det.accepted && det.witness && det.witness->kind == "overlap";
        out.checks.push_back({"rotation by pi/4 rejected at p = " + p_text(p), ok, ok ? 0.0 : 1.0,
                              0.0, ok ? "" : det.message});
    }
    double const oracle = oracle_grid(OperatorMatrix(two, two, 3.0, rot), 4000, opts.seed).estimate;
    out.checks.push_back({"rotation by pi/4 has oracle norm above 1.001 at p = 3", oracle > 1.001,
                          oracle, 1.001, oracle > 1.001 ? "" : "oracle norm " + std::to_string(oracle)});
    return out;
}

//---------------------------------------------------------------------------//
// skew-table
//---------------------------------------------------------------------------//

SuiteResult verify_skew_table(VerifyOptions const& opts)
{
    SuiteResult out{"skew-table", {}};
    double const p = 3.0;
    Eigen::Vector2cd const lambda(1.0, 2.0);
    double const lp = std::pow(lp_norm(lambda, p), p);
    Eigen::VectorXcd const ul = fourier_matrix(2, p) * lambda;
    double const ulp = std::pow(lp_norm(ul, p), p);
    out.checks.push_back({"||lambda||_3^3 = 9", std::abs(lp - 9.0) <= 1e-10, std::abs(lp - 9.0),
                          1e-10, "value " + std::to_string(lp)});
    out.checks.push_back({"||u lambda||_3^3 = 14", std::abs(ulp - 14.0) <= 1e-10,
                          std::abs(ulp - 14.0), 1e-10, "value " + std::to_string(ulp)});

    auto const twist = fourier_twist(interval_rep(AlgebraKind::leavitt(2), p));
    std::vector<OperatorMatrix> S = {twist.s_matrix(1, 2), twist.s_matrix(2, 2)};
    PowerOptions po;
    po.seed = opts.seed;
    double const nrm = std::pow(power_estimate(combine(S, lambda), po).estimate, p);
    out.checks.push_back({"||twisted s_lambda||^3 = 14", rel_dev(nrm, 14.0) <= 1e-8,
                          rel_dev(nrm, 14.0), 1e-8, "value " + std::to_string(nrm)});

    Rng rng(opts.seed);
    Tally unitary("p = 2 twist matrix preserves l^2 norms", 1e-12);
    Eigen::MatrixXcd const u2 = fourier_matrix(3, 2.0);
    for (int k = 0; k < 20; ++k)
    {
        Eigen::VectorXcd const v = random_vector(rng, 3);
        unitary.add(rel_dev((u2 * v).norm(), v.norm()), "vector " + std::to_string(k));
    }
    out.checks.push_back(unitary.result());
    return out;
}

//---------------------------------------------------------------------------//
// calculus
//---------------------------------------------------------------------------//

SuiteResult verify_calculus(VerifyOptions const& opts)
{
    SuiteResult out{"calculus", {}};
    Rng rng(opts.seed);
    int const cases = 100;
    double const ps[] = {1.0, 1.5, 2.0, 3.0};
    double const dual_ps[] = {1.5, 2.0, 3.0, 4.0};

    Tally comp("compose_systems matches the matrix product", identity_tol);
    Tally rev("reverse laws t s = m(chi_E), s t = m(chi_F)", identity_tol);
    Tally ten("tensor_systems matches the Kronecker product", identity_tol);
    Tally du("dual matches the pairing adjoint", identity_tol);
    for (int c = 0; c < cases; ++c)
    {
        std::string const where = "case " + std::to_string(c);
        double const p = ps[c % 4];
        auto const X = random_space(rng, 6, "x");
        auto const Y = random_space(rng, 6, "y");
        auto const Z = random_space(rng, 6, "z");
        auto const s = random_system(rng, X, Y, false);
        auto const v = random_system(rng, Y, Z, false);
        comp.add(materialize(compose_systems(v, s), p)
                     .max_abs_diff(materialize(v, p) * materialize(s, p)),
                 where);

        auto const S = materialize(s, p);
        auto const T = materialize(reverse(s), p);
        double const d1 =
            (T * S).max_abs_diff(OperatorMatrix::multiplication(X, p, indicator(X.size(), s.E)));
        double const d2 =
            (S * T).max_abs_diff(OperatorMatrix::multiplication(Y, p, indicator(Y.size(), s.F)));
        rev.add(std::max(d1, d2), where);

        auto const a = random_system(rng, X, Y, true);
        auto const b = random_system(rng, Z, random_space(rng, 6, "w"), true);
        ten.add(materialize(tensor_systems(a, b), p)
                    .max_abs_diff(kron(materialize(a, p), materialize(b, p))),
                where);

        double const pd = dual_ps[c % 4];
        auto const [ds, q] = dual(s, pd);
        du.add(materialize(ds, q).max_abs_diff(materialize(s, pd).pairing_adjoint()), where);
    }
    out.checks.push_back(comp.result());
    out.checks.push_back(rev.result());
    out.checks.push_back(ten.result());
    out.checks.push_back(du.result());
    return out;
}

//---------------------------------------------------------------------------//
// symbolic
//---------------------------------------------------------------------------//

SuiteResult verify_symbolic(VerifyOptions const& opts)
{
    SuiteResult out{"symbolic", {}};
    Rng rng(opts.seed);
    AlgebraKind const kinds[] = {AlgebraKind::leavitt(2), AlgebraKind::leavitt(3),
                                 AlgebraKind::cohn(2), AlgebraKind::infinity()};

    Tally confluence("normal form independent of rewrite order", 0.0);
    Tally invol("involution laws", 0.0);
    Tally slf("same_length_form round trip", 0.0);
    for (auto const& kind : kinds)
    {
        for (int c = 0; c < 20; ++c)
        {
            std::string const where = kind.name() + " case " + std::to_string(c);
            Element const a = multiply_raw(random_element(kind, rng, 4, 3),
                                           random_element(kind, rng, 4, 3));
            Element const nf = normal_form(a);
            for (std::uint64_t sd = 1; sd <= 3; ++sd)
                confluence.add_bool(normal_form_shuffled(a, rng() + sd) == nf, where);

            Element const b = random_element(kind, rng, 3, 2);
            bool ok = normal_form(star(star(a))) == nf && normal_form(prime(prime(a))) == nf;
            ok = ok && normal_form(star(mul(a, b))) == mul(star(b), star(a));
            ok = ok && normal_form(prime(mul(a, b))) == mul(prime(b), prime(a));
            ok = ok && normal_form(star(Scalar::i() * a)) == normal_form(Scalar(0, -1) * star(a));
            invol.add_bool(ok, where);

            if (kind.has_sum_relation())
            {
                std::vector<Element> as = {a, b, random_element(kind, rng, 3, 3)};
                int const min_len = static_cast<int>(rng() % 3);
                auto const f = same_length_form(as, min_len);
                bool good = true;
                for (std::size_t k = 0; k < as.size(); ++k)
                {
                    Element const e = f.expansion(kind, k);
                    good = good && normal_form(e) == normal_form(as[k]);
                    for (auto const& [key, coef] : e.terms())
                        good = good && static_cast<int>(key.beta.size()) == f.n;
                }
                slf.add_bool(good, where);
            }
        }
    }
    out.checks.push_back(confluence.result());
    out.checks.push_back(invol.result());
    out.checks.push_back(slf.result());

    Tally msum("sum over words of length m of s_alpha t_alpha is 1", 0.0);
    Tally units("s_alpha t_beta form matrix units", 0.0);
    Tally words("t_beta s_alpha = delta for equal lengths", 0.0);
    for (int d : {2, 3})
    {
        auto const L = AlgebraKind::leavitt(d);
        auto const one = Element::one(L);
        for (int m = 0; m <= 4; ++m)
        {
            auto const ws = words_of_length(d, m);
            Element sum(L);
            for (auto const& w : ws)
                sum += mul(Element::s(L, w), Element::t(L, w));
            msum.add_bool(normal_form(sum) == one,
                          "d = " + std::to_string(d) + ", m = " + std::to_string(m));

            bool const exhaustive = ws.size() <= 9;
            std::size_t const samples = exhaustive ? ws.size() * ws.size() : 200;
            for (std::size_t k = 0; k < samples; ++k)
            {
                std::size_t ia, ib;
                if (exhaustive)
                {
                    ia = k / ws.size();
                    ib = k % ws.size();
                }
                else
                {
                    ia = rng() % ws.size();
                    ib = rng() % ws.size();
                }
                std::size_t const ic = (k % 2 == 0) ? ib : rng() % ws.size();
                std::size_t const id = rng() % ws.size();
                Element const e1 = Element::monomial(L, 1, ws[ia], ws[ib]);
                Element const e2 = Element::monomial(L, 1, ws[ic], ws[id]);
                Element const want =
                    ib == ic ? normal_form(Element::monomial(L, 1, ws[ia], ws[id])) : Element(L);
                std::string const where = "d = " + std::to_string(d) + ", m = " + std::to_string(m);
                units.add_bool(mul(e1, e2) == want, where);

                if (m <= (d == 2 ? 4 : 3))
                {
                    Element const tb_sa = mul(Element::t(L, ws[ib]), Element::s(L, ws[ia]));
                    words.add_bool(tb_sa == (ia == ib ? one : Element(L)), where);
                }
            }
        }
    }
    out.checks.push_back(msum.result());
    out.checks.push_back(units.result());
    out.checks.push_back(words.result());
    return out;
}

//---------------------------------------------------------------------------//
// standard
//---------------------------------------------------------------------------//

SuiteResult verify_standard(VerifyOptions const& opts)
{
    SuiteResult out{"standard", {}};
    Rng rng(opts.seed);
    int const level = 3;
    PowerOptions po;
    po.seed = opts.seed;

    Tally sl("||s_lambda xi|| = ||lambda||_p ||xi||_p", 1e-10);
    Tally tg("||t_gamma|| = ||gamma||_q", 1e-6);
    Tally row("row isometry sum_j ||xi_j||^p", 1e-10);
    Tally wd("ranges of s_alpha disjoint for equal lengths", 0.0);
    Tally uniq("t_j recovered from s_j as the reverse", identity_tol);
    auto const L = AlgebraKind::leavitt(2);
    for (double p : {1.5, 3.0})
    {
        double const q = conjugate_exponent(p);
        std::vector<std::pair<std::string, Representation>> reps = {
            {"interval", interval_rep(L, p)},
            {"sequence", sequence_rep(L, p)},
            {"free_rep(3)", free_rep(interval_rep(L, p), 3)},
            {"dual_rep", dual_rep(interval_rep(L, q))}};
        for (auto const& [name, rep] : reps)
        {
            std::string const tag = name + " at p = " + p_text(p);
            std::vector<OperatorMatrix> S = {rep.s_matrix(1, level), rep.s_matrix(2, level)};
            std::vector<OperatorMatrix> T = {rep.t_matrix(1, level + 1),
                                             rep.t_matrix(2, level + 1)};
            auto const& mu = S[0].source().weights();
            auto const& nu = S[0].target().weights();
            for (int k = 0; k < 50; ++k)
            {
                Eigen::VectorXcd const lam = random_vector(rng, 2);
                Eigen::VectorXcd const xi = random_vector(rng, S[0].cols());
                double const lhs = weighted_norm(combine(S, lam).apply(xi), nu, p);
                double const rhs = lp_norm(lam, p) * weighted_norm(xi, mu, p);
                sl.add(rel_dev(lhs, rhs), tag);

                Eigen::VectorXcd const xi2 = random_vector(rng, S[0].cols());
                double const left =
                    std::pow(weighted_norm(S[0].apply(xi) + S[1].apply(xi2), nu, p), p);
                double const right =
                    std::pow(weighted_norm(xi, mu, p), p) + std::pow(weighted_norm(xi2, mu, p), p);
                row.add(rel_dev(left, right), tag);
            }
            for (int k = 0; k < 12; ++k)
            {
                Eigen::VectorXcd const gam = random_vector(rng, 2);
                tg.add(rel_dev(power_estimate(combine(T, gam), po).estimate, lp_norm(gam, q)), tag);
            }
            for (int len = 1; len <= 3; ++len)
            {
                auto const ws = words_of_length(2, len);
                std::vector<int> owner(rep.space(1 + len).size(), -1);
                bool ok = true;
                for (std::size_t w = 0; w < ws.size(); ++w)
                {
                    SparseOp const m = eval_sparse(rep, Element::s(L, ws[w]), 1, 1 + len);
                    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
                    {
                        for (SparseOp::InnerIterator it(m, c); it; ++it)
                        {
                            if (std::abs(it.value()) == 0.0)
                                continue;
                            int& o = owner[static_cast<std::size_t>(it.row())];
                            ok = ok && (o == -1 || o == static_cast<int>(w));
                            o = static_cast<int>(w);
                        }
                    }
                }
                wd.add_bool(ok, tag + ", length " + std::to_string(len));
            }
            for (int j = 0; j < 2; ++j)
            {
                auto const det = detect(S[static_cast<std::size_t>(j)]);
                if (!det.accepted)
                {
                    uniq.add_bool(false, tag + ": " + det.message);
                    continue;
                }
                uniq.add(materialize(reverse(*det.system), p)
                             .max_abs_diff(rep.t_matrix(j + 1, level + 1)),
                         tag);
            }
        }
    }
    out.checks.push_back(sl.result());
    out.checks.push_back(tg.result());
    out.checks.push_back(row.result());
    out.checks.push_back(wd.result());
    out.checks.push_back(uniq.result());
    return out;
}

//---------------------------------------------------------------------------//
// degree-zero
//---------------------------------------------------------------------------//

SuiteResult verify_degree_zero(VerifyOptions const& opts)
{
    SuiteResult out{"degree-zero", {}};
    Rng rng(opts.seed);
    PowerOptions po;
    po.seed = opts.seed;
    auto const L = AlgebraKind::leavitt(2);
    Tally oracle("coefficient matrix norm agrees with the sampling oracle", 1e-6);
    Tally interval("interval norm equals coefficient matrix norm", 1e-6);
    Tally sequence("sequence norm equals coefficient matrix norm", 1e-6);
    for (double p : {1.0, 1.5, 3.0})
    {
        auto const I = interval_rep(L, p);
        auto const S = sequence_rep(L, p);
        for (int c = 0; c < 50; ++c)
        {
            std::string const where = "p = " + p_text(p) + ", case " + std::to_string(c);
            Eigen::MatrixXcd M;
            Element const a = random_degree_zero(L, 2, rng, M);
            double const m = power_estimate(M, p, po).estimate;
            oracle.add(std::abs(m - oracle_grid(M, p, 4000, opts.seed + c).estimate), where);
            for (int level : {2, 3})
            {
                interval.add(std::abs(power_estimate(eval(I, a, level), po).estimate - m), where);
                sequence.add(std::abs(power_estimate(eval(S, a, level), po).estimate - m), where);
            }
        }
    }
    out.checks.push_back(oracle.result());
    out.checks.push_back(interval.result());
    out.checks.push_back(sequence.result());
    return out;
}

//---------------------------------------------------------------------------//
// free
//---------------------------------------------------------------------------//

SuiteResult verify_free(VerifyOptions const& opts)
{
    SuiteResult out{"free", {}};
    auto const L = AlgebraKind::leavitt(2);
    double const p = 3.0;
    auto const I = interval_rep(L, p);
    PowerOptions po;
    po.seed = opts.seed;
    std::vector<Element> const elems = {
        Element::s(L, {1}) + Element::t(L, {1}),
        Element::monomial(L, 1, {1}, {2}) + Element::monomial(L, 1, {2}, {1})
            + Element::t(L, {2, 1})};
    char const* names[] = {"s1 + t1", "s1*t2 + s2*t1 + t1*t2"};
    for (std::size_t e = 0; e < elems.size(); ++e)
    {
        double const base = power_estimate(eval(I, elems[e], 4), po).estimate;
        double prev = 0.0, worst_drop = 0.0, last = 0.0;
        for (int n : {2, 4, 8, 16})
        {
            last = power_estimate(eval(free_rep(I, n), elems[e], 4), po).estimate;
            if (n > 2)
                worst_drop = std::max(worst_drop, prev - last);
            prev = last;
        }
        out.checks.push_back({std::string(names[e]) + ": free norms nondecreasing in n",
                              worst_drop <= 1e-8, worst_drop, 1e-8, {}});
        out.checks.push_back({std::string(names[e]) + ": n = 16 norm at least base - 0.05",
                              last >= base - 0.05, base - last, 0.05, {}});

        auto const small = eval(free_rep(I, 2), elems[e], 2);
        double const boyd = power_estimate(small, po).estimate;
        double const orc = oracle_grid(small, 4000, opts.seed).estimate;
        out.checks.push_back({std::string(names[e]) + ": oracle cross-check at n = 2, level 2",
                              std::abs(boyd - orc) <= 1e-6, std::abs(boyd - orc), 1e-6, {}});
    }
    return out;
}

//---------------------------------------------------------------------------//
// embedding
//---------------------------------------------------------------------------//

SuiteResult verify_embedding(VerifyOptions const& opts)
{
    SuiteResult out{"embedding", {}};
    Rng rng(opts.seed);
    auto const Linf = AlgebraKind::infinity();
    auto const rep = interval_rep(AlgebraKind::leavitt(2), 3.0);
    int const level = 6;
    Tally pairing("t(gamma) s(lambda) = (sum gamma_j lambda_j) 1", 1e-10);
    auto sparse_coeffs = [&](std::vector<Scalar>& v) {
        v.assign(6, Scalar(0));
        int const nz = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < nz; ++i)
            v[rng() % 6] = random_dyadic(rng);
        if (std::all_of(v.begin(), v.end(), [](Scalar const& x) { return x.is_zero(); }))
            v[0] = 1;
    };
    for (int c = 0; c < 30; ++c)
    {
        std::vector<Scalar> lam, gam;
        sparse_coeffs(lam);
        sparse_coeffs(gam);
        Element const sl = linear_comb_s(Linf, lam);
        Element const tg = linear_comb_t(Linf, gam);
        int const top = level + embed_infinity_in_l2(sl).max_degree();
        SparseOp const S = eval_sparse(rep, sl, level, top);
        SparseOp const T = eval_sparse(rep, tg, top, top);
        Complex pair = 0.0;
        for (std::size_t j = 0; j < lam.size(); ++j)
            pair += gam[j].to_complex() * lam[j].to_complex();
        SparseOp diff = T * S - pair * rep.embed(level, top);
        double dev = 0.0;
        for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
        {
            for (SparseOp::InnerIterator it(diff, k); it; ++it)
                dev = std::max(dev, std::abs(it.value()));
        }
        pairing.add(dev, "case " + std::to_string(c));
    }
    out.checks.push_back(pairing.result());
    return out;
}

//---------------------------------------------------------------------------//
// examples
//---------------------------------------------------------------------------//

SuiteResult verify_examples(VerifyOptions const& opts)
{
    SuiteResult out{"examples", {}};
    auto const L = AlgebraKind::leavitt(2);
    double const p = 3.0;
    ReportOptions ro;
    ro.seed = opts.seed + 7;
    auto expect = [&](std::string const& label, Condition const& c, bool want) {
        out.checks.push_back({label, c.value == want, c.value ? 1.0 : 0.0, 0.0,
                              c.value == want ? "" : c.witness});
    };
    auto const I = interval_rep(L, p);
    auto const ri = spatiality_report(I, ro);
    for (auto const* c : {&ri.contractive_on_generators, &ri.forward_isometric,
                          &ri.strongly_forward_isometric, &ri.disjoint, &ri.spatial,
                          &ri.p_standard_on_s, &ri.p_standard_on_t, &ri.row_isometry,
                          &ri.md_restriction_spatial})
        expect("interval: condition holds", *c, true);

    auto const tw = fourier_twist(I);
    auto const rt = spatiality_report(tw, ro);
    expect("twist: contractive on generators", rt.contractive_on_generators, true);
    expect("twist: strongly forward isometric", rt.strongly_forward_isometric, true);
    expect("twist: not disjoint", rt.disjoint, false);
    expect("twist: not spatial", rt.spatial, false);

    auto const rd = spatiality_report(direct_sum_p({I, tw}), ro);
    expect("interval + twist: forward isometric", rd.forward_isometric, true);
    expect("interval + twist: not strongly forward isometric", rd.strongly_forward_isometric,
           false);

    for (auto const* r : {&ri, &rt, &rd})
    {
        bool const ok = r->consistent();
        out.checks.push_back({"implication audit", ok, ok ? 0.0 : 1.0, 0.0,
                              ok ? "" : r->audit_failures.front()});
    }
    return out;
}

//---------------------------------------------------------------------------//

std::vector<std::string> suite_names()
{
    return {"relations", "lamperti", "skew-table", "calculus", "symbolic",
            "standard",  "degree-zero", "free", "embedding", "examples"};
}

std::vector<SuiteResult> run_suite(std::string const& name, VerifyOptions const& opts)
{
    using Fn = SuiteResult (*)(VerifyOptions const&);
    std::pair<char const*, Fn> const table[] = {
        {"relations", verify_relations},   {"lamperti", verify_lamperti},
        {"skew-table", verify_skew_table}, {"calculus", verify_calculus},
        {"symbolic", verify_symbolic},     {"standard", verify_standard},
        {"degree-zero", verify_degree_zero}, {"free", verify_free},
        {"embedding", verify_embedding},   {"examples", verify_examples}};
    std::vector<SuiteResult> out;
    for (auto const& [n, fn] : table)
    {
        if (name == "all" || name == n)
            out.push_back(fn(opts));
    }
    if (out.empty())
        throw InvalidArgument("unknown suite '" + name + "'");
    return out;
}

}  // namespace lpcuntz
