#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <json.hpp>

#include "lpcuntz/algebra.hpp"
#include "lpcuntz/measure.hpp"
#include "lpcuntz/operator.hpp"
#include "lpcuntz/pnorm.hpp"
#include "lpcuntz/spatial.hpp"

namespace lpcuntz
{

using SparseOp = Eigen::SparseMatrix<Complex>;

/*!
 * Level data of a graded representation.
 *
 * The representation space is exhausted by nested finite levels
 * V_0 c V_1 c ...; s_j maps V_N into V_{N+1}, t_j maps V_N into V_{N-1}
 * for N >= 1, and embed(N) is the inclusion V_N -> V_{N+1}. Generator
 * actions commute with the inclusions.
 */
class LevelModel
{
  public:
    virtual ~LevelModel() = default;

    virtual FiniteMeasureSpace space(int level) const = 0;
    virtual SparseOp s(int j, int level) const = 0;
    virtual SparseOp t(int j, int level) const = 0;
    virtual SparseOp embed(int level) const = 0;
    // Spatial system of s_j on the given level when known by construction.
    virtual std::optional<SpatialSystem> s_system(int /*j*/, int /*level*/) const
    {
        return std::nullopt;
    }
};

class Representation
{
  public:
    Representation(AlgebraKind kind, double p, nlohmann::json descriptor,
                   std::shared_ptr<LevelModel const> model);

    AlgebraKind const& kind() const { return kind_; }
    int d() const { return kind_.d(); }
    double p() const { return p_; }
    // {constructor, d, p, kind, parameters, ...}; rebuilds via make_representation.
    nlohmann::json const& descriptor() const { return descriptor_; }
    std::string name() const { return descriptor_.value("constructor", "custom"); }

    FiniteMeasureSpace space(int level) const { return model_->space(level); }
    SparseOp s(int j, int level) const;
    SparseOp t(int j, int level) const;
    SparseOp embed(int level) const;
    // Inclusion V_from -> V_to.
    SparseOp embed(int from, int to) const;
    std::optional<SpatialSystem> s_system(int j, int level) const
    {
        return model_->s_system(j, level);
    }

    // Dense wrappers with the level spaces attached.
    OperatorMatrix s_matrix(int j, int level) const;
    OperatorMatrix t_matrix(int j, int level) const;

    LevelModel const& model() const { return *model_; }
    std::shared_ptr<LevelModel const> const& model_ptr() const { return model_; }

  private:
    AlgebraKind kind_;
    double p_;
    nlohmann::json descriptor_;
    std::shared_ptr<LevelModel const> model_;
};

//---------------------------------------------------------------------------//
// Constructors
//---------------------------------------------------------------------------//

// Step functions on d^N equal subintervals of [0, 1].
Representation interval_rep(AlgebraKind kind, double p);
// Coordinates 1..b^N of l^p with s_j delta_n = delta_{b(n-1)+j}; b = d, or d + 1 for Cohn.
Representation sequence_rep(AlgebraKind kind, double p);
// New generators s'_k = sum_j us(k, j) s_j and t'_k = sum_j ut(k, j) t_j.
Representation mix_generators(Representation const& rep, Eigen::MatrixXcd const& us,
                              Eigen::MatrixXcd const& ut, nlohmann::json descriptor);
// v_k = d^{-1/p} sum_j w^{jk} s_j, w_k = d^{-1/q} sum_j w^{-jk} t_j with w = exp(2 pi i / d).
Representation fourier_twist(Representation const& rep);
Representation direct_sum_p(std::vector<Representation> const& reps);
Representation tensor_identity(Representation const& rep, FiniteMeasureSpace const& Y);
// (rho (x) 1_Y)^{1 (x) u}: s_j (x) u and t_j (x) u^{-1}. Throws on singular u.
Representation twist_by_invertible(Representation const& rep, OperatorMatrix const& u);
// Twist by the cyclic shift on Z/n with counting measure.
Representation free_rep(Representation const& rep, int n);
// Pairing adjoints with the roles of s and t swapped, at the conjugate exponent.
Representation dual_rep(Representation const& rep);

// d x d matrix u(j, k) = d^{-1/p} w^{jk}, so that the twisted s_lambda is s_{u lambda}.
Eigen::MatrixXcd fourier_matrix(int d, double p);
// Cyclic shift delta_m -> delta_{m+1} on Z/n.
Eigen::MatrixXcd cyclic_shift(int n);

// Build from a descriptor produced by Representation::descriptor().
Representation make_representation(nlohmann::json const& descriptor);
/*!
 * Descriptor for a named representation: "interval", "sequence", "twist"
 * (Fourier twist of the interval representation), "dblskew" (interval
 * plus twist), "mult", "summult", "free:N", "dual", "dual-sequence".
 */
nlohmann::json shorthand_descriptor(std::string const& name, AlgebraKind kind, double p);

//---------------------------------------------------------------------------//
// Evaluation
//---------------------------------------------------------------------------//

// Smallest level at which eval accepts the element.
int min_level(Element const& a);

/*!
 * Restriction of rho(a) to V_N, landing in V_{N + max(0, k_max)}.
 *
 * Terms are applied as stored, without normalization. L_infinity elements
 * are evaluated in a representation of L_2 through
 * s_j -> s_2^j s_1, t_j -> t_1 t_2^j.
 */
OperatorMatrix eval(Representation const& rep, Element const& a, int level);
// Same, embedded further into V_target.
OperatorMatrix eval_to(Representation const& rep, Element const& a, int level, int target);
// Sparse form of eval_to without the attached spaces.
SparseOp eval_sparse(Representation const& rep, Element const& a, int level, int target);

//---------------------------------------------------------------------------//
// Checks
//---------------------------------------------------------------------------//

struct RelationReport
{
    bool ok = true;
    double max_deviation = 0.0;
    std::string worst;  // description of the largest deviation
};

// t_j s_k = delta_jk, sum_j s_j t_j = 1 (Leavitt), and commutation with embed,
// on every level up to max_level.
RelationReport check_relations(Representation const& rep, int max_level,
                               double tol = identity_tol);

struct Condition
{
    bool value = false;
    std::string witness;
};

struct SpatialityReport
{
    int level = 0;
    double p = 0.0;
    Condition contractive_on_generators;
    Condition forward_isometric;
    Condition strongly_forward_isometric;
    Condition disjoint;
    Condition spatial;
    Condition p_standard_on_s;
    Condition p_standard_on_t;
    Condition row_isometry;
    Condition md_restriction_spatial;
    std::vector<std::string> audit_failures;
    std::vector<std::string> notes;
    int sampled_lambdas = 0;
    std::uint64_t seed = 0;

    bool consistent() const { return audit_failures.empty(); }
};

struct ReportOptions
{
    int level = 2;
    int random_lambdas = 50;
    std::uint64_t seed = 7;
    double norm_tol = 1e-8;
    double isometry_tol = 1e-9;
};

/*!
 * Decide the representation properties on one level.
 *
 * Generators act V_N -> V_{N+1} (s_j) and V_{N+1} -> V_N (t_j). The lambda
 * family is the standard basis, (1, 2, ..., d) and seeded random vectors.
 */
SpatialityReport spatiality_report(Representation const& rep, ReportOptions const& opts = {});

nlohmann::json to_json(SpatialityReport const& r);

//---------------------------------------------------------------------------//
// Norm sequences
//---------------------------------------------------------------------------//

struct NormSequence
{
    std::vector<int> levels;
    std::vector<NormResult> results;
    bool nondecreasing = true;
    bool stabilized = false;
    int stabilized_at = -1;  // first level within eps of its predecessor
    double eps = 1e-3;
};

// ||eval(rep, a, N)|| for N = min_level(a) .. n_max.
NormSequence norm_sequence(Representation const& rep, Element const& a, int n_max,
                           double eps = 1e-3, PowerOptions const& opts = {});

}  // namespace lpcuntz
