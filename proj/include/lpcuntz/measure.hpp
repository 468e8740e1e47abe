#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace lpcuntz
{

// Relative tolerance for comparing weights.
inline constexpr double weight_rtol = 1e-12;

bool weights_close(double a, double b, double rtol = weight_rtol);

/*!
 * Finite set of atoms with strictly positive weights.
 *
 * Atoms given with weight zero are dropped at construction, so every
 * remaining atom has positive measure and "almost everywhere" means
 * "at every atom".
 */
class FiniteMeasureSpace
{
  public:
    FiniteMeasureSpace() = default;
    FiniteMeasureSpace(std::vector<std::string> labels, std::vector<double> weights);

    // Atoms "0".."n-1" (or with prefix) of equal weight.
    static FiniteMeasureSpace uniform(std::size_t n, double weight = 1.0,
                                      std::string const& prefix = "");
    static FiniteMeasureSpace counting(std::size_t n) { return uniform(n, 1.0); }

    std::size_t size() const { return weights_.size(); }
    double weight(std::size_t i) const { return weights_[i]; }
    std::vector<double> const& weights() const { return weights_; }
    std::string const& label(std::size_t i) const { return labels_[i]; }
    std::vector<std::string> const& labels() const { return labels_; }
    // Throws InvalidArgument if absent.
    std::size_t index_of(std::string const& label) const;

    double measure(std::vector<std::size_t> const& atoms) const;

    // Restriction to a subset of atoms (in the given order).
    FiniteMeasureSpace restrict(std::vector<std::size_t> const& atoms) const;

    // Product measure; atom (i, j) has index i * other.size() + j.
    FiniteMeasureSpace product(FiniteMeasureSpace const& other) const;
    // Disjoint union; labels get the prefixes "<k>:".
    static FiniteMeasureSpace disjoint_union(std::vector<FiniteMeasureSpace> const& parts);

    // Same weights within weight_rtol, same size.
    bool equivalent(FiniteMeasureSpace const& other) const;

    friend bool operator==(FiniteMeasureSpace const&, FiniteMeasureSpace const&) = default;

  private:
    std::vector<std::string> labels_;
    std::vector<double> weights_;
};

// Complex function on the atoms of a space.
struct AtomFunction
{
    FiniteMeasureSpace space;
    std::vector<std::complex<double>> values;

    static AtomFunction zero(FiniteMeasureSpace const& space);
    static AtomFunction indicator(FiniteMeasureSpace const& space,
                                  std::vector<std::size_t> const& atoms);

    // Atoms where the value is nonzero.
    std::vector<std::size_t> support(double tol = 0.0) const;
    // sum_x mu(x) |xi(x)|^p, then the p-th root.
    double lp_norm(double p) const;
};

/*!
 * Measurable set transformation between finite atomic spaces.
 *
 * Each source atom is sent to a nonempty block of target atoms; blocks are
 * pairwise disjoint, which makes E -> union of blocks an injective
 * sigma-homomorphism. Its range sigma-algebra is the one generated by the
 * blocks.
 */
class SetTransformation
{
  public:
    SetTransformation(FiniteMeasureSpace source, FiniteMeasureSpace target,
                      std::vector<std::vector<std::size_t>> blocks);

    static SetTransformation identity(FiniteMeasureSpace const& space);

    FiniteMeasureSpace const& source() const { return source_; }
    FiniteMeasureSpace const& target() const { return target_; }
    std::vector<std::vector<std::size_t>> const& blocks() const { return blocks_; }
    std::vector<std::size_t> const& block(std::size_t x) const { return blocks_[x]; }

    // S(E): union of the blocks of E, sorted.
    std::vector<std::size_t> image(std::vector<std::size_t> const& atoms) const;
    // Union of all blocks, sorted.
    std::vector<std::size_t> range() const { return image(all_source_atoms()); }
    // Singleton blocks covering the whole target.
    bool is_bijective() const;
    // Singleton blocks (bijective onto its range).
    bool has_singleton_blocks() const;

    // Owner of each target atom, or npos off the range.
    std::vector<std::size_t> owners() const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  private:
    std::vector<std::size_t> all_source_atoms() const;

    FiniteMeasureSpace source_;
    FiniteMeasureSpace target_;
    std::vector<std::vector<std::size_t>> blocks_;
};

// Measure on the range sigma-algebra: one value per block (per source atom).
struct BlockMeasure
{
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<double> values;
};

// S_*(xi): xi(x) on block(x), zero off the range.
AtomFunction pushforward_function(SetTransformation const& S, AtomFunction const& xi);
// S^*(lambda)(x) = lambda(block(x)).
std::vector<double> pullback_measure(SetTransformation const& S,
                                     std::vector<double> const& lambda);
// S_*(mu)(block(x)) = mu(x).
BlockMeasure pushforward_measure(SetTransformation const& S, std::vector<double> const& mu);
// d S_*(mu) / d nu, block-constant: mu(x) / nu(block(x)); zero off the range.
AtomFunction rn_derivative(SetTransformation const& S, std::vector<double> const& mu,
                           std::vector<double> const& nu);
// T after S.
SetTransformation compose(SetTransformation const& T, SetTransformation const& S);

nlohmann::json to_json(FiniteMeasureSpace const& space);
FiniteMeasureSpace space_from_json(nlohmann::json const& j);
nlohmann::json blocks_to_json(SetTransformation const& S);
SetTransformation set_transformation_from_json(FiniteMeasureSpace source,
                                               FiniteMeasureSpace target,
                                               nlohmann::json const& j);

}  // namespace lpcuntz
