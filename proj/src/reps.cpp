#include "lpcuntz/reps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "lpcuntz/error.hpp"

namespace lpcuntz
{

namespace
{
using Triplet = Eigen::Triplet<Complex>;

std::size_t ipow(std::size_t b, int e)
{
    std::size_t r = 1;
    for (int i = 0; i < e; ++i)
        r *= b;
    return r;
}

SparseOp build(std::size_t rows, std::size_t cols, std::vector<Triplet> const& entries)
{
    SparseOp m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

SparseOp sparse_identity(std::size_t n)
{
    SparseOp m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setIdentity();
    return m;
}

SparseOp sparse_kron(SparseOp const& a, SparseOp const& b)
{
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (Eigen::Index ka = 0; ka < a.outerSize(); ++ka)
    {
        for (SparseOp::InnerIterator ia(a, ka); ia; ++ia)
        {
            for (Eigen::Index kb = 0; kb < b.outerSize(); ++kb)
            {
                for (SparseOp::InnerIterator ib(b, kb); ib; ++ib)
                {
                    entries.emplace_back(ia.row() * b.rows() + ib.row(),
                                         ia.col() * b.cols() + ib.col(),
                                         ia.value() * ib.value());
                }
            }
        }
    }
    SparseOp m(a.rows() * b.rows(), a.cols() * b.cols());
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

SparseOp sparse_of(Eigen::MatrixXcd const& m)
{
    return m.sparseView();
}

double max_abs(SparseOp const& m)
{
    double r = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    {
        for (SparseOp::InnerIterator it(m, k); it; ++it)
            r = std::max(r, std::abs(it.value()));
    }
    return r;
}

SparseOp diag_weights(FiniteMeasureSpace const& space, bool inverse)
{
    std::vector<Triplet> e;
    for (std::size_t i = 0; i < space.size(); ++i)
    {
        double const w = space.weight(i);
        e.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i),
                       inverse ? 1.0 / w : w);
    }
    return build(space.size(), space.size(), e);
}

void require_level(int level, int min, char const* what)
{
    if (level < min)
        throw InvalidArgument(std::string(what) + ": level " + std::to_string(level)
                              + " is below " + std::to_string(min));
}

//---------------------------------------------------------------------------//
// Interval representation
//---------------------------------------------------------------------------//

class IntervalModel final : public LevelModel
{
  public:
    IntervalModel(int d, double p) : d_(static_cast<std::size_t>(d)), p_(p) {}

    FiniteMeasureSpace space(int level) const override
    {
        std::size_t const n = ipow(d_, level);
        return FiniteMeasureSpace::uniform(n, 1.0 / static_cast<double>(n));
    }

    SparseOp s(int j, int level) const override
    {
        std::size_t const n = ipow(d_, level);
        double const c = std::pow(static_cast<double>(d_), 1.0 / p_);
        std::vector<Triplet> e;
        for (std::size_t k = 0; k < n; ++k)
            e.emplace_back(static_cast<Eigen::Index>((j - 1) * n + k), static_cast<Eigen::Index>(k), c);
        return build(n * d_, n, e);
    }

    SparseOp t(int j, int level) const override
    {
        require_level(level, 1, "t");
        std::size_t const n = ipow(d_, level - 1);
        double const c = std::pow(static_cast<double>(d_), -1.0 / p_);
        std::vector<Triplet> e;
        for (std::size_t k = 0; k < n; ++k)
            e.emplace_back(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>((j - 1) * n + k), c);
        return build(n, n * d_, e);
    }

    SparseOp embed(int level) const override
    {
        std::size_t const n = ipow(d_, level);
        std::vector<Triplet> e;
        for (std::size_t k = 0; k < n; ++k)
        {
            for (std::size_t r = 0; r < d_; ++r)
                e.emplace_back(static_cast<Eigen::Index>(k * d_ + r), static_cast<Eigen::Index>(k), 1.0);
        }
        return build(n * d_, n, e);
    }

    std::optional<SpatialSystem> s_system(int j, int level) const override
    {
        std::size_t const n = ipow(d_, level);
        std::vector<std::size_t> image(n);
        for (std::size_t k = 0; k < n; ++k)
            image[k] = (static_cast<std::size_t>(j) - 1) * n + k;
        return SpatialSystem::from_injection(space(level), space(level + 1), image,
                                             std::vector<Complex>(n, 1.0));
    }

  private:
    std::size_t d_;
    double p_;
};

//---------------------------------------------------------------------------//
// Sequence representation
//---------------------------------------------------------------------------//

class SequenceModel final : public LevelModel
{
  public:
    explicit SequenceModel(int base) : b_(static_cast<std::size_t>(base)) {}

    FiniteMeasureSpace space(int level) const override
    {
        return FiniteMeasureSpace::counting(ipow(b_, level));
    }

    SparseOp s(int j, int level) const override
    {
        std::size_t const n = ipow(b_, level);
        std::vector<Triplet> e;
        for (std::size_t i = 0; i < n; ++i)
            e.emplace_back(static_cast<Eigen::Index>(b_ * i + static_cast<std::size_t>(j) - 1),
                           static_cast<Eigen::Index>(i), 1.0);
        return build(n * b_, n, e);
    }

    SparseOp t(int j, int level) const override
    {
        require_level(level, 1, "t");
        std::size_t const n = ipow(b_, level);
        std::vector<Triplet> e;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (i % b_ == static_cast<std::size_t>(j) - 1)
                e.emplace_back(static_cast<Eigen::Index>(i / b_), static_cast<Eigen::Index>(i), 1.0);
        }
        return build(n / b_, n, e);
    }

    SparseOp embed(int level) const override
    {
        std::size_t const n = ipow(b_, level);
        std::vector<Triplet> e;
        for (std::size_t i = 0; i < n; ++i)
            e.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), 1.0);
        return build(n * b_, n, e);
    }

    std::optional<SpatialSystem> s_system(int j, int level) const override
    {
        std::size_t const n = ipow(b_, level);
        std::vector<std::size_t> image(n);
        for (std::size_t i = 0; i < n; ++i)
            image[i] = b_ * i + static_cast<std::size_t>(j) - 1;
        return SpatialSystem::from_injection(space(level), space(level + 1), image,
                                             std::vector<Complex>(n, 1.0));
    }

  private:
    std::size_t b_;
};

//---------------------------------------------------------------------------//
// Derived representations
//---------------------------------------------------------------------------//

class MixModel final : public LevelModel
{
  public:
    MixModel(std::shared_ptr<LevelModel const> base, Eigen::MatrixXcd us, Eigen::MatrixXcd ut)
        : base_(std::move(base)), us_(std::move(us)), ut_(std::move(ut))
    {
    }

    FiniteMeasureSpace space(int level) const override { return base_->space(level); }

    SparseOp s(int k, int level) const override
    {
        SparseOp out;
        for (Eigen::Index j = 0; j < us_.cols(); ++j)
        {
            Complex const c = us_(k - 1, j);
            if (c == 0.0)
                continue;
            SparseOp term = c * base_->s(static_cast<int>(j) + 1, level);
            out = out.size() ? SparseOp(out + term) : term;
        }
        return out.size() ? out : SparseOp(base_->s(1, level) * Complex(0.0));
    }

    SparseOp t(int k, int level) const override
    {
        SparseOp out;
        for (Eigen::Index j = 0; j < ut_.cols(); ++j)
        {
            Complex const c = ut_(k - 1, j);
            if (c == 0.0)
                continue;
            SparseOp term = c * base_->t(static_cast<int>(j) + 1, level);
            out = out.size() ? SparseOp(out + term) : term;
        }
        return out.size() ? out : SparseOp(base_->t(1, level) * Complex(0.0));
    }

    SparseOp embed(int level) const override { return base_->embed(level); }

  private:
    std::shared_ptr<LevelModel const> base_;
    Eigen::MatrixXcd us_;
    Eigen::MatrixXcd ut_;
};

class SumModel final : public LevelModel
{
  public:
    explicit SumModel(std::vector<std::shared_ptr<LevelModel const>> parts)
        : parts_(std::move(parts))
    {
    }

    FiniteMeasureSpace space(int level) const override
    {
        std::vector<FiniteMeasureSpace> spaces;
        for (auto const& m : parts_)
            spaces.push_back(m->space(level));
        return FiniteMeasureSpace::disjoint_union(spaces);
    }

    SparseOp s(int j, int level) const override
    {
        return block_diag([&](LevelModel const& m) { return m.s(j, level); });
    }
    SparseOp t(int j, int level) const override
    {
        return block_diag([&](LevelModel const& m) { return m.t(j, level); });
    }
    SparseOp embed(int level) const override
    {
        return block_diag([&](LevelModel const& m) { return m.embed(level); });
    }

    std::optional<SpatialSystem> s_system(int j, int level) const override
    {
        FiniteMeasureSpace const dom = space(level);
        FiniteMeasureSpace const cod = space(level + 1);
        std::vector<std::size_t> image;
        std::vector<Complex> phases;
        std::size_t offset = 0;
        for (auto const& m : parts_)
        {
            auto sys = m->s_system(j, level);
            if (!sys || !sys->is_spatial() || sys->E.size() != sys->domain.size())
                return std::nullopt;
            for (std::size_t k = 0; k < sys->E.size(); ++k)
            {
                std::size_t const y = sys->blocks[k][0];
                image.push_back(offset + y);
                phases.push_back(sys->phase(y));
            }
            offset += sys->codomain.size();
        }
        return SpatialSystem::from_injection(dom, cod, image, phases);
    }

  private:
    template<class F>
    SparseOp block_diag(F&& f) const
    {
        std::vector<Triplet> e;
        Eigen::Index r0 = 0, c0 = 0;
        for (auto const& m : parts_)
        {
            SparseOp const b = f(*m);
            for (Eigen::Index k = 0; k < b.outerSize(); ++k)
            {
                for (SparseOp::InnerIterator it(b, k); it; ++it)
                    e.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
            }
            r0 += b.rows();
            c0 += b.cols();
        }
        return build(static_cast<std::size_t>(r0), static_cast<std::size_t>(c0), e);
    }

    std::vector<std::shared_ptr<LevelModel const>> parts_;
};

class TwistModel final : public LevelModel
{
  public:
    TwistModel(std::shared_ptr<LevelModel const> base, FiniteMeasureSpace Y,
               Eigen::MatrixXcd const& u, Eigen::MatrixXcd const& uinv,
               std::optional<SpatialSystem> u_system)
        : base_(std::move(base)), Y_(std::move(Y)), u_(sparse_of(u)), uinv_(sparse_of(uinv)),
          id_(sparse_identity(Y_.size())), u_system_(std::move(u_system))
    {
    }

    FiniteMeasureSpace space(int level) const override { return base_->space(level).product(Y_); }
    SparseOp s(int j, int level) const override { return sparse_kron(base_->s(j, level), u_); }
    SparseOp t(int j, int level) const override { return sparse_kron(base_->t(j, level), uinv_); }
    SparseOp embed(int level) const override { return sparse_kron(base_->embed(level), id_); }

    std::optional<SpatialSystem> s_system(int j, int level) const override
    {
        auto sys = base_->s_system(j, level);
        if (!sys || !u_system_)
            return std::nullopt;
        return tensor_systems(*sys, *u_system_);
    }

  private:
    std::shared_ptr<LevelModel const> base_;
    FiniteMeasureSpace Y_;
    SparseOp u_;
    SparseOp uinv_;
    SparseOp id_;
    std::optional<SpatialSystem> u_system_;
};

class DualModel final : public LevelModel
{
  public:
    DualModel(std::shared_ptr<LevelModel const> base, double p) : base_(std::move(base)), p_(p) {}

    FiniteMeasureSpace space(int level) const override { return base_->space(level); }

    // Pairing adjoint of a : V_from -> V_to.
    SparseOp adjoint(SparseOp const& a, int from, int to) const
    {
        return SparseOp(diag_weights(base_->space(from), true) * SparseOp(a.transpose())
                        * diag_weights(base_->space(to), false));
    }

    SparseOp s(int j, int level) const override
    {
        return adjoint(base_->t(j, level + 1), level + 1, level);
    }
    SparseOp t(int j, int level) const override
    {
        require_level(level, 1, "t");
        return adjoint(base_->s(j, level - 1), level - 1, level);
    }
    SparseOp embed(int level) const override { return base_->embed(level); }

    std::optional<SpatialSystem> s_system(int j, int level) const override
    {
        auto sys = base_->s_system(j, level);
        if (!sys || !sys->is_spatial())
            return std::nullopt;
        return dual(reverse(*sys), p_).first;
    }

  private:
    std::shared_ptr<LevelModel const> base_;
    double p_;
};

nlohmann::json base_descriptor(std::string const& ctor, AlgebraKind const& kind, double p)
{
    return {{"constructor", ctor}, {"kind", kind.name()}, {"d", kind.d()}, {"p", p}};
}

void require_finite(AlgebraKind const& kind)
{
    if (!kind.is_finite() || kind.d() < 2)
        throw InvalidArgument("representations are built for L_d or C_d with d >= 2");
}

void require_p(double p)
{
    if (!(p >= 1.0) || !std::isfinite(p))
        throw InvalidArgument("p must lie in [1, inf)");
}

}  // namespace

//---------------------------------------------------------------------------//
// Representation
//---------------------------------------------------------------------------//

Representation::Representation(AlgebraKind kind, double p, nlohmann::json descriptor,
                               std::shared_ptr<LevelModel const> model)
    : kind_(kind), p_(p), descriptor_(std::move(descriptor)), model_(std::move(model))
{
    require_finite(kind_);
    require_p(p_);
}

SparseOp Representation::s(int j, int level) const
{
    if (j < 1 || j > d())
        throw InvalidArgument("generator index out of range");
    require_level(level, 0, "s");
    return model_->s(j, level);
}

SparseOp Representation::t(int j, int level) const
{
    if (j < 1 || j > d())
        throw InvalidArgument("generator index out of range");
    require_level(level, 1, "t");
    return model_->t(j, level);
}

SparseOp Representation::embed(int level) const
{
    require_level(level, 0, "embed");
    return model_->embed(level);
}

SparseOp Representation::embed(int from, int to) const
{
    if (to < from)
        throw InvalidArgument("embed: target level below source level");
    SparseOp m = sparse_identity(space(from).size());
    for (int l = from; l < to; ++l)
        m = model_->embed(l) * m;
    return m;
}

OperatorMatrix Representation::s_matrix(int j, int level) const
{
    return OperatorMatrix(space(level), space(level + 1), p_, Eigen::MatrixXcd(s(j, level)));
}

OperatorMatrix Representation::t_matrix(int j, int level) const
{
    return OperatorMatrix(space(level), space(level - 1), p_, Eigen::MatrixXcd(t(j, level)));
}

//---------------------------------------------------------------------------//
// Constructors
//---------------------------------------------------------------------------//

Representation interval_rep(AlgebraKind kind, double p)
{
    require_finite(kind);
    require_p(p);
    return Representation(kind, p, base_descriptor("interval", kind, p),
                          std::make_shared<IntervalModel>(kind.d(), p));
}

Representation sequence_rep(AlgebraKind kind, double p)
{
    require_finite(kind);
    require_p(p);
    int const base = kind.has_sum_relation() ? kind.d() : kind.d() + 1;
    return Representation(kind, p, base_descriptor("sequence", kind, p),
                          std::make_shared<SequenceModel>(base));
}

Representation mix_generators(Representation const& rep, Eigen::MatrixXcd const& us,
                              Eigen::MatrixXcd const& ut, nlohmann::json descriptor)
{
    auto const d = static_cast<Eigen::Index>(rep.d());
    if (us.rows() != d || us.cols() != d || ut.rows() != d || ut.cols() != d)
        throw InvalidArgument("mix_generators: coefficient matrices must be d x d");
    return Representation(rep.kind(), rep.p(), std::move(descriptor),
                          std::make_shared<MixModel>(rep.model_ptr(), us, ut));
}

Eigen::MatrixXcd fourier_matrix(int d, double p)
{
    Eigen::MatrixXcd u(d, d);
    double const c = std::pow(static_cast<double>(d), -1.0 / p);
    for (int j = 1; j <= d; ++j)
    {
        for (int k = 1; k <= d; ++k)
            u(j - 1, k - 1) = c * std::polar(1.0, 2.0 * M_PI * j * k / d);
    }
    return u;
}

Representation fourier_twist(Representation const& rep)
{
    int const d = rep.d();
    double const p = rep.p();
    double const q = conjugate_exponent(p);
    double const cs = std::pow(static_cast<double>(d), -1.0 / p);
    double const ct = std::isinf(q) ? 1.0 : std::pow(static_cast<double>(d), -1.0 / q);
    Eigen::MatrixXcd us(d, d), ut(d, d);
    for (int k = 1; k <= d; ++k)
    {
        for (int j = 1; j <= d; ++j)
        {
            us(k - 1, j - 1) = cs * std::polar(1.0, 2.0 * M_PI * j * k / d);
            ut(k - 1, j - 1) = ct * std::polar(1.0, -2.0 * M_PI * j * k / d);
        }
    }
    nlohmann::json desc = base_descriptor("fourier_twist", rep.kind(), p);
    desc["base"] = rep.descriptor();
    return mix_generators(rep, us, ut, std::move(desc));
}

Representation direct_sum_p(std::vector<Representation> const& reps)
{
    if (reps.empty())
        throw InvalidArgument("direct_sum_p needs at least one representation");
    std::vector<std::shared_ptr<LevelModel const>> parts;
    nlohmann::json list = nlohmann::json::array();
    for (auto const& r : reps)
    {
        if (!(r.kind() == reps[0].kind()))
            throw KindMismatch("direct_sum_p: representations of different algebras");
        if (r.p() != reps[0].p())
            throw InvalidArgument("direct_sum_p: exponents differ");
        parts.push_back(r.model_ptr());
        list.push_back(r.descriptor());
    }
    nlohmann::json desc = base_descriptor("direct_sum_p", reps[0].kind(), reps[0].p());
    desc["parts"] = list;
    return Representation(reps[0].kind(), reps[0].p(), std::move(desc),
                          std::make_shared<SumModel>(std::move(parts)));
}

Representation twist_by_invertible(Representation const& rep, OperatorMatrix const& u)
{
    if (!u.source().equivalent(u.target()))
        throw SpaceMismatch("twist_by_invertible: u must act on a single space");
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(u.entries());
    if (!lu.isInvertible())
        throw InvalidArgument("twist_by_invertible: u is singular");
    Eigen::MatrixXcd const uinv = lu.inverse();
    OperatorMatrix const uu(u.source(), u.target(), rep.p(), u.entries());
    std::optional<SpatialSystem> u_system;
    auto const det = detect(uu);
    if (det.accepted && det.spatial && isometry_test(uu).isometry
        && det.system->E.size() == uu.source().size())
        u_system = det.system;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u.entries());
    auto const& sv = svd.singularValues();
    nlohmann::json desc = base_descriptor("twist_by_invertible", rep.kind(), rep.p());
    desc["base"] = rep.descriptor();
    desc["u"] = to_json(uu);
    desc["condition_number"] = sv(0) / sv(sv.size() - 1);
    return Representation(rep.kind(), rep.p(), std::move(desc),
                          std::make_shared<TwistModel>(rep.model_ptr(), u.source(), u.entries(),
                                                       uinv, u_system));
}

Representation tensor_identity(Representation const& rep, FiniteMeasureSpace const& Y)
{
    Representation r = twist_by_invertible(rep, OperatorMatrix::identity(Y, rep.p()));
    nlohmann::json desc = base_descriptor("tensor_identity", rep.kind(), rep.p());
    desc["base"] = rep.descriptor();
    desc["space"] = to_json(Y);
    return Representation(rep.kind(), rep.p(), std::move(desc), r.model_ptr());
}

Eigen::MatrixXcd cyclic_shift(int n)
{
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
    for (int m = 0; m < n; ++m)
        u((m + 1) % n, m) = 1.0;
    return u;
}

Representation free_rep(Representation const& rep, int n)
{
    if (n < 1)
        throw InvalidArgument("free_rep: cycle length must be at least 1");
    auto const Z = FiniteMeasureSpace::counting(static_cast<std::size_t>(n));
    Representation r =
        twist_by_invertible(rep, OperatorMatrix(Z, Z, rep.p(), cyclic_shift(n)));
    nlohmann::json desc = base_descriptor("free_rep", rep.kind(), rep.p());
    desc["base"] = rep.descriptor();
    desc["n"] = n;
    return Representation(rep.kind(), rep.p(), std::move(desc), r.model_ptr());
}

Representation dual_rep(Representation const& rep)
{
    if (!(rep.p() > 1.0))
        throw InvalidArgument("dual_rep requires p > 1");
    double const q = conjugate_exponent(rep.p());
    nlohmann::json desc = base_descriptor("dual_rep", rep.kind(), q);
    desc["base"] = rep.descriptor();
    return Representation(rep.kind(), q, std::move(desc),
                          std::make_shared<DualModel>(rep.model_ptr(), rep.p()));
}

Representation make_representation(nlohmann::json const& desc)
{
    std::string const ctor = desc.at("constructor").get<std::string>();
    auto kind_of = [&] {
        return AlgebraKind::from_name(desc.value("kind", std::string("leavitt")),
                                      desc.at("d").get<int>());
    };
    if (ctor == "interval")
        return interval_rep(kind_of(), desc.at("p").get<double>());
    if (ctor == "sequence")
        return sequence_rep(kind_of(), desc.at("p").get<double>());
    if (ctor == "fourier_twist")
        return fourier_twist(make_representation(desc.at("base")));
    if (ctor == "direct_sum_p")
    {
        std::vector<Representation> parts;
        for (auto const& part : desc.at("parts"))
            parts.push_back(make_representation(part));
        return direct_sum_p(parts);
    }
    if (ctor == "tensor_identity")
        return tensor_identity(make_representation(desc.at("base")),
                               space_from_json(desc.at("space")));
    if (ctor == "twist_by_invertible")
        return twist_by_invertible(make_representation(desc.at("base")),
                                   operator_from_json(desc.at("u")));
    if (ctor == "free_rep")
        return free_rep(make_representation(desc.at("base")), desc.at("n").get<int>());
    if (ctor == "dual_rep")
        return dual_rep(make_representation(desc.at("base")));
    throw InvalidArgument("unknown representation constructor '" + ctor + "'");
}

nlohmann::json shorthand_descriptor(std::string const& name, AlgebraKind kind, double p)
{
    auto interval = [&] { return interval_rep(kind, p); };
    if (name == "interval")
        return interval().descriptor();
    if (name == "sequence")
        return sequence_rep(kind, p).descriptor();
    if (name == "twist")
        return fourier_twist(interval()).descriptor();
    if (name == "dblskew")
        return direct_sum_p({interval(), fourier_twist(interval())}).descriptor();
    if (name == "mult" || name == "summult")
    {
        bool const sum = name == "summult";
        auto const Y = FiniteMeasureSpace::counting(sum ? 2 : 1);
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(sum ? 2 : 1, sum ? 2 : 1);
        u(sum ? 1 : 0, sum ? 1 : 0) = 0.5;
        return twist_by_invertible(sequence_rep(kind, p), OperatorMatrix(Y, Y, p, u))
            .descriptor();
    }
    if (name.rfind("free:", 0) == 0)
        return free_rep(interval(), std::stoi(name.substr(5))).descriptor();
    if (name == "dual")
        return dual_rep(interval_rep(kind, p / (p - 1.0))).descriptor();
    if (name == "dual-sequence")
        return dual_rep(sequence_rep(kind, p / (p - 1.0))).descriptor();
    throw InvalidArgument("unknown representation name '" + name + "'");
}

//---------------------------------------------------------------------------//
// Evaluation
//---------------------------------------------------------------------------//

int min_level(Element const& a)
{
    if (a.kind().family() == AlgebraFamily::leavitt_infinity)
        return static_cast<int>(embed_infinity_in_l2(a).t_depth());
    return static_cast<int>(a.t_depth());
}

SparseOp eval_sparse(Representation const& rep, Element const& a, int level, int target)
{
    Element const* el = &a;
    Element mapped(rep.kind());
    if (!(a.kind() == rep.kind()))
    {
        if (a.kind().family() == AlgebraFamily::leavitt_infinity
            && rep.kind() == AlgebraKind::leavitt(2))
        {
            mapped = embed_infinity_in_l2(a);
            el = &mapped;
        }
        else
        {
            throw KindMismatch("eval: element and representation belong to different algebras");
        }
    }
    int const depth = static_cast<int>(el->t_depth());
    if (level < depth)
        throw InvalidArgument("eval: level " + std::to_string(level)
                              + " is below the element's t-depth " + std::to_string(depth));
    int const top = level + std::max(0, el->max_degree());
    if (target < top)
        throw InvalidArgument("eval: target level below level + max degree");

    std::map<std::tuple<char, int, int>, SparseOp> cache;
    auto op = [&](char kind, int j, int l) -> SparseOp const& {
        auto key = std::make_tuple(kind, j, l);
        auto it = cache.find(key);
        if (it == cache.end())
        {
            SparseOp m = kind == 's' ? rep.s(j, l) : kind == 't' ? rep.t(j, l) : rep.embed(l);
            it = cache.emplace(key, std::move(m)).first;
        }
        return it->second;
    };

    std::size_t const rows = rep.space(target).size();
    std::size_t const cols = rep.space(level).size();
    SparseOp acc(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (auto const& [key, c] : el->terms())
    {
        SparseOp cur = sparse_identity(cols);
        int l = level;
        for (int letter : key.beta)
        {
            cur = op('t', letter, l) * cur;
            --l;
        }
        for (auto it = key.alpha.rbegin(); it != key.alpha.rend(); ++it)
        {
            cur = op('s', *it, l) * cur;
            ++l;
        }
        for (; l < target; ++l)
            cur = op('e', 0, l) * cur;
        acc += c.to_complex() * cur;
    }
    return acc;
}

OperatorMatrix eval_to(Representation const& rep, Element const& a, int level, int target)
{
    return OperatorMatrix(rep.space(level), rep.space(target), rep.p(),
                          Eigen::MatrixXcd(eval_sparse(rep, a, level, target)));
}

OperatorMatrix eval(Representation const& rep, Element const& a, int level)
{
    Element const mapped = (a.kind().family() == AlgebraFamily::leavitt_infinity)
                               ? embed_infinity_in_l2(a)
                               : a;
    return eval_to(rep, a, level, level + std::max(0, mapped.max_degree()));
}

//---------------------------------------------------------------------------//
// Relation checks
//---------------------------------------------------------------------------//

RelationReport check_relations(Representation const& rep, int max_level, double tol)
{
    RelationReport r;
    auto record = [&](SparseOp const& diff, std::string const& what) {
        double const dev = max_abs(diff);
        if (dev > r.max_deviation)
        {
            r.max_deviation = dev;
            r.worst = what;
        }
    };
    int const d = rep.d();
    for (int n = 0; n <= max_level; ++n)
    {
        std::string const at = " on level " + std::to_string(n);
        SparseOp const id = sparse_identity(rep.space(n).size());
        for (int j = 1; j <= d; ++j)
        {
            SparseOp const tj = rep.t(j, n + 1);
            for (int k = 1; k <= d; ++k)
            {
                SparseOp prod = tj * rep.s(k, n);
                if (j == k)
                    prod -= id;
                record(prod, "t" + std::to_string(j) + " s" + std::to_string(k) + at);
            }
            record(SparseOp(rep.s(j, n + 1) * rep.embed(n) - rep.embed(n + 1) * rep.s(j, n)),
                   "s" + std::to_string(j) + " commuting with the inclusion" + at);
            if (n >= 1)
            {
                record(SparseOp(rep.t(j, n + 1) * rep.embed(n) - rep.embed(n - 1) * rep.t(j, n)),
                       "t" + std::to_string(j) + " commuting with the inclusion" + at);
            }
        }
        if (n >= 1 && rep.kind().has_sum_relation())
        {
            SparseOp sum = -id;
            for (int j = 1; j <= d; ++j)
                sum += rep.s(j, n - 1) * rep.t(j, n);
            record(sum, "sum of s_j t_j" + at);
        }
    }
    r.ok = r.max_deviation <= tol;
    return r;
}

//---------------------------------------------------------------------------//
// Spatiality report
//---------------------------------------------------------------------------//

namespace
{
OperatorMatrix combine(std::vector<OperatorMatrix> const& ops, Eigen::VectorXcd const& lambda)
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(ops[0].rows(), ops[0].cols());
    for (std::size_t j = 0; j < ops.size(); ++j)
        m += lambda(static_cast<Eigen::Index>(j)) * ops[j].entries();
    return OperatorMatrix(ops[0].source(), ops[0].target(), ops[0].p(), std::move(m));
}

std::string vec_text(Eigen::VectorXcd const& v)
{
    std::string out = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        if (i)
            out += ", ";
        char buf[64];
        if (v(i).imag() == 0.0)
            std::snprintf(buf, sizeof buf, "%.6g", v(i).real());
        else
            std::snprintf(buf, sizeof buf, "%.6g%+.6gi", v(i).real(), v(i).imag());
        out += buf;
    }
    return out + ")";
}

bool close_rel(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

std::vector<Eigen::VectorXcd> lambda_family(int d, int random, std::uint64_t seed)
{
    std::vector<Eigen::VectorXcd> out;
    for (int j = 0; j < d; ++j)
        out.push_back(Eigen::VectorXcd::Unit(d, j));
    Eigen::VectorXcd ramp(d);
    for (int j = 0; j < d; ++j)
        ramp(j) = static_cast<double>(j + 1);
    out.push_back(ramp);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int k = 0; k < random; ++k)
    {
        Eigen::VectorXcd v(d);
        for (int j = 0; j < d; ++j)
        {
            double const re = normal(rng);
            v(j) = Complex(re, normal(rng));
        }
        out.push_back(v);
    }
    return out;
}
}  // namespace

SpatialityReport spatiality_report(Representation const& rep, ReportOptions const& opts)
{
    SpatialityReport r;
    int const n = opts.level;
    int const d = rep.d();
    double const p = rep.p();
    double const q = conjugate_exponent(p);
    r.level = n;
    r.p = p;
    r.seed = opts.seed;
    PowerOptions po;
    po.seed = opts.seed;

    std::vector<OperatorMatrix> S, T;
    for (int j = 1; j <= d; ++j)
    {
        S.push_back(rep.s_matrix(j, n));
        T.push_back(rep.t_matrix(j, n + 1));
    }
    auto const lambdas = lambda_family(d, opts.random_lambdas, opts.seed);
    r.sampled_lambdas = static_cast<int>(lambdas.size());

    // Contractive on generators.
    r.contractive_on_generators.value = true;
    for (int j = 0; j < d && r.contractive_on_generators.value; ++j)
    {
        for (auto const* m : {&S[static_cast<std::size_t>(j)], &T[static_cast<std::size_t>(j)]})
        {
            double const nrm = power_estimate(*m, po).estimate;
            if (nrm > 1.0 + opts.norm_tol)
            {
                r.contractive_on_generators = {
                    false, std::string(m == &S[static_cast<std::size_t>(j)] ? "s" : "t")
                               + std::to_string(j + 1) + " has norm " + std::to_string(nrm)};
                break;
            }
        }
    }

    // Forward isometric and strongly forward isometric.
    r.forward_isometric.value = true;
    for (int j = 0; j < d; ++j)
    {
        auto const iso = isometry_test(S[static_cast<std::size_t>(j)], opts.isometry_tol);
        if (!iso.isometry)
        {
            r.forward_isometric = {false, "s" + std::to_string(j + 1) + ": " + iso.witness};
            break;
        }
    }
    r.strongly_forward_isometric = r.forward_isometric;
    if (r.forward_isometric.value)
    {
        for (auto const& lam : lambdas)
        {
            auto const iso = scaled_isometry_test(combine(S, lam), opts.isometry_tol);
            if (!iso.isometry)
            {
                r.strongly_forward_isometric = {
                    false, "s_lambda for lambda = " + vec_text(lam) + ": " + iso.witness};
                break;
            }
        }
    }

    // Disjoint ranges.
    r.disjoint.value = true;
    {
        std::vector<int> owner(static_cast<std::size_t>(S[0].rows()), 0);
        for (int j = 0; j < d && r.disjoint.value; ++j)
        {
            auto const& m = S[static_cast<std::size_t>(j)].entries();
            for (Eigen::Index y = 0; y < m.rows(); ++y)
            {
                if (m.row(y).cwiseAbs().maxCoeff() <= identity_tol)
                    continue;
                int& o = owner[static_cast<std::size_t>(y)];
                if (o != 0)
                {
                    r.disjoint = {false, "ranges of s" + std::to_string(o) + " and s"
                                             + std::to_string(j + 1) + " meet at atom "
                                             + S[0].target().label(static_cast<std::size_t>(y))};
                    break;
                }
                o = j + 1;
            }
        }
    }

    // Spatial: s_j spatial partial isometries with reverse t_j.
    r.spatial.value = true;
    if (p == 2.0)
        r.notes.push_back("p = 2: the detector cannot decide spatiality; using systems "
                          "supplied by the constructors");
    for (int j = 1; j <= d && r.spatial.value; ++j)
    {
        auto const& sj = S[static_cast<std::size_t>(j - 1)];
        auto const& tj = T[static_cast<std::size_t>(j - 1)];
        std::optional<SpatialSystem> sys;
        std::string fail;
        if (p != 2.0)
        {
            auto const det = detect(sj);
            if (!det.accepted)
                fail = "detector rejects s" + std::to_string(j) + ": " + det.message;
            else if (!det.spatial)
                fail = "s" + std::to_string(j) + " is semispatial, not spatial";
            else
                sys = det.system;
        }
        else
        {
            sys = rep.s_system(j, n);
            if (!sys)
                fail = "no constructor system for s" + std::to_string(j);
            else if (!materialize(*sys, p).is_close(sj, identity_tol))
                fail = "constructor system for s" + std::to_string(j) + " does not match";
        }
        if (sys)
        {
            OperatorMatrix const rev = materialize(reverse(*sys), p);
            std::vector<Complex> chiE(sj.source().size(), 0.0), chiF(sj.target().size(), 0.0);
            for (auto x : sys->E)
                chiE[x] = 1.0;
            for (auto y : sys->F)
                chiF[y] = 1.0;
            if (!rev.is_close(tj, identity_tol))
                fail = "t" + std::to_string(j) + " is not the reverse of s" + std::to_string(j);
            else if (!(tj * sj).is_close(OperatorMatrix::multiplication(sj.source(), p, chiE),
                                         identity_tol))
                fail = "t" + std::to_string(j) + " s" + std::to_string(j) + " != m(chi_E)";
            else if (!(sj * tj).is_close(OperatorMatrix::multiplication(sj.target(), p, chiF),
                                         identity_tol))
                fail = "s" + std::to_string(j) + " t" + std::to_string(j) + " != m(chi_F)";
        }
        if (!fail.empty())
            r.spatial = {false, fail};
    }

    // p-standard on span(s_j) and span(t_j).
    r.p_standard_on_s.value = true;
    r.p_standard_on_t.value = true;
    for (auto const& lam : lambdas)
    {
        if (r.p_standard_on_s.value)
        {
            double const nrm = power_estimate(combine(S, lam), po).estimate;
            double const want = lp_norm(lam, p);
            if (!close_rel(nrm, want, opts.norm_tol))
                r.p_standard_on_s = {false, "||s_lambda|| = " + std::to_string(nrm)
                                                + " but ||lambda||_p = " + std::to_string(want)
                                                + " for lambda = " + vec_text(lam)};
        }
        if (r.p_standard_on_t.value)
        {
            double const nrm = power_estimate(combine(T, lam), po).estimate;
            double const want = lp_norm(lam, q);
            if (!close_rel(nrm, want, opts.norm_tol))
                r.p_standard_on_t = {false, "||t_gamma|| = " + std::to_string(nrm)
                                                + " but ||gamma||_q = " + std::to_string(want)
                                                + " for gamma = " + vec_text(lam)};
        }
    }

    // Row isometry (s_1 ... s_d) on d copies of V_N.
    {
        std::vector<FiniteMeasureSpace> copies(static_cast<std::size_t>(d), S[0].source());
        Eigen::MatrixXcd row(S[0].rows(), S[0].cols() * d);
        for (int j = 0; j < d; ++j)
            row.middleCols(S[0].cols() * j, S[0].cols()) = S[static_cast<std::size_t>(j)].entries();
        auto const iso = isometry_test(
            OperatorMatrix(FiniteMeasureSpace::disjoint_union(copies), S[0].target(), p, row),
            opts.isometry_tol);
        r.row_isometry = {iso.isometry, iso.witness};
    }

    // Restriction to span(s_j t_k): diagonal idempotents over a partition.
    r.md_restriction_spatial.value = true;
    {
        std::vector<int> owner(S[0].target().size(), 0);
        for (int j = 1; j <= d && r.md_restriction_spatial.value; ++j)
        {
            auto const e = S[static_cast<std::size_t>(j - 1)] * T[static_cast<std::size_t>(j - 1)];
            auto const cls = classify_idempotent(e);
            if (!cls.accepted)
            {
                r.md_restriction_spatial = {false, "s" + std::to_string(j) + " t" + std::to_string(j)
                                                       + " is not m(chi_X) for a set X"};
                break;
            }
            for (auto y : cls.E)
            {
                if (owner[y] != 0)
                {
                    r.md_restriction_spatial = {false, "diagonal idempotents overlap"};
                    break;
                }
                owner[y] = j;
            }
        }
        if (r.md_restriction_spatial.value && rep.kind().has_sum_relation()
            && std::count(owner.begin(), owner.end(), 0) > 0)
            r.md_restriction_spatial = {false, "diagonal idempotents do not cover the level"};
        for (int j = 1; j <= d && r.md_restriction_spatial.value; ++j)
        {
            for (int k = 1; k <= d; ++k)
            {
                if (j == k)
                    continue;
                auto const e = S[static_cast<std::size_t>(j - 1)] * T[static_cast<std::size_t>(k - 1)];
                auto const det = detect(e);
                if (!det.accepted || !det.spatial)
                {
                    r.md_restriction_spatial = {false, "s" + std::to_string(j) + " t"
                                                           + std::to_string(k)
                                                           + " is not a spatial partial isometry"};
                    break;
                }
            }
        }
    }

    // Implication audit.
    auto const& sp = r.spatial.value;
    std::pair<char const*, Condition const*> const implied[] = {
        {"contractive_on_generators", &r.contractive_on_generators},
        {"forward_isometric", &r.forward_isometric},
        {"strongly_forward_isometric", &r.strongly_forward_isometric},
        {"disjoint", &r.disjoint},
        {"p_standard_on_s", &r.p_standard_on_s},
        {"p_standard_on_t", &r.p_standard_on_t},
        {"row_isometry", &r.row_isometry},
        {"md_restriction_spatial", &r.md_restriction_spatial}};
    if (sp)
    {
        for (auto const& [name, c] : implied)
        {
            if (!c->value)
                r.audit_failures.push_back(std::string("spatial but not ") + name);
        }
    }
    if (r.contractive_on_generators.value && !r.forward_isometric.value)
        r.audit_failures.push_back("contractive on generators but not forward isometric");
    if (r.strongly_forward_isometric.value && !r.forward_isometric.value)
        r.audit_failures.push_back("strongly forward isometric but not forward isometric");
    r.notes.push_back("strong forward isometry and p-standardness sampled on "
                      + std::to_string(r.sampled_lambdas) + " coefficient vectors (seed "
                      + std::to_string(opts.seed) + ")");
    return r;
}

nlohmann::json to_json(SpatialityReport const& r)
{
    auto cond = [](Condition const& c) {
        nlohmann::json j = {{"value", c.value}};
        if (!c.witness.empty())
            j["witness"] = c.witness;
        return j;
    };
    return {{"level", r.level},
            {"p", r.p},
            {"contractive_on_generators", cond(r.contractive_on_generators)},
            {"forward_isometric", cond(r.forward_isometric)},
            {"strongly_forward_isometric", cond(r.strongly_forward_isometric)},
            {"disjoint", cond(r.disjoint)},
            {"spatial", cond(r.spatial)},
            {"p_standard_on_s", cond(r.p_standard_on_s)},
            {"p_standard_on_t", cond(r.p_standard_on_t)},
            {"row_isometry", cond(r.row_isometry)},
            {"md_restriction_spatial", cond(r.md_restriction_spatial)},
            {"audit_failures", r.audit_failures},
            {"notes", r.notes},
            {"sampled_lambdas", r.sampled_lambdas},
            {"seed", r.seed}};
}

//---------------------------------------------------------------------------//
// Norm sequences
//---------------------------------------------------------------------------//

NormSequence norm_sequence(Representation const& rep, Element const& a, int n_max, double eps,
                           PowerOptions const& opts)
{
    NormSequence seq;
    seq.eps = eps;
    for (int n = min_level(a); n <= n_max; ++n)
    {
        NormResult res = power_estimate(eval(rep, a, n), opts);
        if (!seq.results.empty())
        {
            double const prev = seq.results.back().estimate;
            if (res.estimate < prev - 1e-10)
                seq.nondecreasing = false;
            if (!seq.stabilized && std::abs(res.estimate - prev) < eps)
            {
                seq.stabilized = true;
                seq.stabilized_at = n;
            }
        }
        seq.levels.push_back(n);
        seq.results.push_back(std::move(res));
    }
    return seq;
}

}  // namespace lpcuntz
