#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lpcuntz/measure.hpp"
#include "lpcuntz/operator.hpp"

namespace lpcuntz
{

// Default tolerances of the detector and of matrix-level identities.
inline constexpr double detect_tol = 1e-9;
inline constexpr double identity_tol = 1e-12;

/*!
 * Spatial system (E, F, S, g) between two finite measure spaces.
 *
 * E lists domain atoms; blocks[k] is the block of E[k] inside the
 * codomain. The blocks are disjoint and cover F exactly. The phase g is
 * stored aligned with F and has modulus one.
 */
struct SpatialSystem
{
    FiniteMeasureSpace domain;
    FiniteMeasureSpace codomain;
    std::vector<std::size_t> E;
    std::vector<std::size_t> F;
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<Complex> g;

    // Sorts E and F and checks every invariant; throws InvalidArgument.
    void validate();

    bool is_spatial() const;
    // Phase at a codomain atom (throws if the atom is outside F).
    Complex phase(std::size_t y) const;
    // S as a set transformation from E (restricted) into the codomain.
    SetTransformation transformation() const;
    // Index of the E-entry whose block contains y, or npos.
    std::size_t owner(std::size_t y) const;

    // Singleton blocks, phase one.
    static SpatialSystem identity(FiniteMeasureSpace const& space);
    // Singleton blocks from a partial injection x -> image[x] (npos skips x).
    static SpatialSystem from_injection(FiniteMeasureSpace const& domain,
                                        FiniteMeasureSpace const& codomain,
                                        std::vector<std::size_t> const& image,
                                        std::vector<Complex> const& phases);

    friend bool operator==(SpatialSystem const&, SpatialSystem const&) = default;
};

// (s xi)(y) = g(y) h(y)^{1/p} xi(x) for y in block(x), zero off F.
OperatorMatrix materialize(SpatialSystem const& sys, double p);
// h = d S_*(mu|_E) / d nu on the codomain (zero off F).
std::vector<double> rn_weight(SpatialSystem const& sys);

// (F, E, S^{-1}, conj(g) moved to E); spatial systems only.
SpatialSystem reverse(SpatialSystem const& sys);
// v after s; both spatial.
SpatialSystem compose_systems(SpatialSystem const& v, SpatialSystem const& s);
// Product system on the product spaces (Kronecker ordering).
SpatialSystem tensor_systems(SpatialSystem const& s, SpatialSystem const& v);
// (F, E, S^{-1}, g moved to E) at the conjugate exponent; spatial only, p > 1.
std::pair<SpatialSystem, double> dual(SpatialSystem const& sys, double p);

struct DetectWitness
{
    std::string kind;  // "overlap" or "block_constancy"
    std::size_t x1 = 0;
    std::size_t x2 = 0;
    std::size_t y = 0;
    double value = 0.0;
    double expected = 0.0;
};

struct DetectResult
{
    bool accepted = false;
    std::optional<SpatialSystem> system;
    std::vector<double> h;  // on the codomain, zero off F
    bool spatial = false;
    std::optional<DetectWitness> witness;
    std::string message;
};

/*!
 * Recover a semispatial decomposition from a matrix or reject it.
 *
 * Accepts iff the nonzero columns have pairwise disjoint supports B_x and
 * |A(y, x)| = (mu(x) / nu(B_x))^{1/p} on every B_x (relative tolerance).
 */
DetectResult detect(OperatorMatrix const& a, double tol = detect_tol);

struct IdempotentResult
{
    bool accepted = false;
    std::vector<std::size_t> E;
    // Offending entry (row, column, value) on rejection.
    std::optional<std::tuple<std::size_t, std::size_t, Complex>> witness;
};

// Accepts exactly the diagonal matrices with entries in {0, 1}.
IdempotentResult classify_idempotent(OperatorMatrix const& a, double tol = identity_tol);

struct IsometryResult
{
    bool isometry = false;
    double scale = 0.0;  // c with A = c * isometry (when scaled)
    std::string witness;
};

/*!
 * Exact isometry test between finite weighted l^p spaces.
 *
 * For p != 2 an isometry has disjoint column supports and preserves the
 * norm of each basis vector; for p = 2 it satisfies A^* D_nu A = D_mu.
 */
IsometryResult isometry_test(OperatorMatrix const& a, double tol = 1e-9);
// Same test after dividing by the largest column-norm ratio.
IsometryResult scaled_isometry_test(OperatorMatrix const& a, double tol = 1e-9);

/*!
 * Witness that two bijective spatial isometries with different set
 * transformations are far apart: xi = mu(Q)^{-1/p} chi_Q for an atom Q
 * moved differently, so that ||v0 xi - v1 xi||_p = 2^{1/p}.
 */
std::optional<Eigen::VectorXcd> homotopy_witness(SpatialSystem const& v0,
                                                 SpatialSystem const& v1, double p);

nlohmann::json to_json(SpatialSystem const& sys);
SpatialSystem system_from_json(nlohmann::json const& j);

}  // namespace lpcuntz
