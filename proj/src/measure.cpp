#include "lpcuntz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lpcuntz/error.hpp"

namespace lpcuntz
{

bool weights_close(double a, double b, double rtol)
{
    return std::abs(a - b) <= rtol * std::max({std::abs(a), std::abs(b), 1e-300});
}

//---------------------------------------------------------------------------//
// FiniteMeasureSpace
//---------------------------------------------------------------------------//

FiniteMeasureSpace::FiniteMeasureSpace(std::vector<std::string> labels,
                                       std::vector<double> weights)
{
    if (labels.size() != weights.size())
        throw InvalidArgument("atom labels and weights differ in length");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < labels.size(); ++i)
    {
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
            throw InvalidArgument("atom weight must be finite and nonnegative");
        if (!seen.insert(labels[i]).second)
            throw InvalidArgument("duplicate atom label '" + labels[i] + "'");
        if (weights[i] == 0.0)
            continue;
        labels_.push_back(std::move(labels[i]));
        weights_.push_back(weights[i]);
    }
}

FiniteMeasureSpace FiniteMeasureSpace::uniform(std::size_t n, double weight,
                                               std::string const& prefix)
{
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = prefix + std::to_string(i);
    return FiniteMeasureSpace(std::move(labels), std::vector<double>(n, weight));
}

std::size_t FiniteMeasureSpace::index_of(std::string const& label) const
{
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw InvalidArgument("no atom labelled '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

double FiniteMeasureSpace::measure(std::vector<std::size_t> const& atoms) const
{
    double total = 0.0;
    for (auto i : atoms)
        total += weights_.at(i);
    return total;
}

FiniteMeasureSpace FiniteMeasureSpace::restrict(std::vector<std::size_t> const& atoms) const
{
    FiniteMeasureSpace out;
    for (auto i : atoms)
    {
        out.labels_.push_back(labels_.at(i));
        out.weights_.push_back(weights_.at(i));
    }
    return out;
}

FiniteMeasureSpace FiniteMeasureSpace::product(FiniteMeasureSpace const& other) const
{
    FiniteMeasureSpace out;
    out.labels_.reserve(size() * other.size());
    out.weights_.reserve(size() * other.size());
    for (std::size_t i = 0; i < size(); ++i)
    {
        for (std::size_t j = 0; j < other.size(); ++j)
        {
            out.labels_.push_back("(" + labels_[i] + "," + other.labels_[j] + ")");
            out.weights_.push_back(weights_[i] * other.weights_[j]);
        }
    }
    return out;
}

FiniteMeasureSpace
FiniteMeasureSpace::disjoint_union(std::vector<FiniteMeasureSpace> const& parts)
{
    FiniteMeasureSpace out;
    for (std::size_t k = 0; k < parts.size(); ++k)
    {
        for (std::size_t i = 0; i < parts[k].size(); ++i)
        {
            out.labels_.push_back(std::to_string(k) + ":" + parts[k].labels_[i]);
            out.weights_.push_back(parts[k].weights_[i]);
        }
    }
    return out;
}

bool FiniteMeasureSpace::equivalent(FiniteMeasureSpace const& other) const
{
    if (size() != other.size())
        return false;
    for (std::size_t i = 0; i < size(); ++i)
    {
        if (!weights_close(weights_[i], other.weights_[i]))
            return false;
    }
    return true;
}

//---------------------------------------------------------------------------//
// AtomFunction
//---------------------------------------------------------------------------//

AtomFunction AtomFunction::zero(FiniteMeasureSpace const& space)
{
    return {space, std::vector<std::complex<double>>(space.size())};
}

AtomFunction AtomFunction::indicator(FiniteMeasureSpace const& space,
                                     std::vector<std::size_t> const& atoms)
{
    AtomFunction f = zero(space);
    for (auto i : atoms)
        f.values.at(i) = 1.0;
    return f;
}

std::vector<std::size_t> AtomFunction::support(double tol) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (std::abs(values[i]) > tol)
            out.push_back(i);
    }
    return out;
}

double AtomFunction::lp_norm(double p) const
{
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        total += space.weight(i) * std::pow(std::abs(values[i]), p);
    return std::pow(total, 1.0 / p);
}

//---------------------------------------------------------------------------//
// SetTransformation
//---------------------------------------------------------------------------//

SetTransformation::SetTransformation(FiniteMeasureSpace source, FiniteMeasureSpace target,
                                     std::vector<std::vector<std::size_t>> blocks)
    : source_(std::move(source)), target_(std::move(target)), blocks_(std::move(blocks))
{
    if (blocks_.size() != source_.size())
        throw InvalidArgument("set transformation needs one block per source atom");
    std::vector<bool> used(target_.size(), false);
    for (auto& b : blocks_)
    {
        if (b.empty())
            throw InvalidArgument("set transformation blocks must be nonempty");
        std::sort(b.begin(), b.end());
        for (auto y : b)
        {
            if (y >= target_.size())
                throw InvalidArgument("block refers to a missing target atom");
            if (used[y])
                throw InvalidArgument("set transformation blocks must be disjoint");
            used[y] = true;
        }
    }
}

SetTransformation SetTransformation::identity(FiniteMeasureSpace const& space)
{
    std::vector<std::vector<std::size_t>> blocks(space.size());
    for (std::size_t i = 0; i < space.size(); ++i)
        blocks[i] = {i};
    return SetTransformation(space, space, std::move(blocks));
}

std::vector<std::size_t> SetTransformation::all_source_atoms() const
{
    std::vector<std::size_t> all(source_.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    return all;
}

std::vector<std::size_t> SetTransformation::image(std::vector<std::size_t> const& atoms) const
{
    std::vector<std::size_t> out;
    for (auto x : atoms)
    {
        auto const& b = blocks_.at(x);
        out.insert(out.end(), b.begin(), b.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool SetTransformation::has_singleton_blocks() const
{
    return std::all_of(blocks_.begin(), blocks_.end(),
                       [](auto const& b) { return b.size() == 1; });
}

bool SetTransformation::is_bijective() const
{
    return has_singleton_blocks() && blocks_.size() == target_.size();
}

std::vector<std::size_t> SetTransformation::owners() const
{
    std::vector<std::size_t> out(target_.size(), npos);
    for (std::size_t x = 0; x < blocks_.size(); ++x)
    {
        for (auto y : blocks_[x])
            out[y] = x;
    }
    return out;
}

//---------------------------------------------------------------------------//
// Pushforwards and pullbacks
//---------------------------------------------------------------------------//

AtomFunction pushforward_function(SetTransformation const& S, AtomFunction const& xi)
{
    if (!(xi.space == S.source()))
        throw SpaceMismatch("pushforward_function: function not on the source space");
    AtomFunction out = AtomFunction::zero(S.target());
    for (std::size_t x = 0; x < S.blocks().size(); ++x)
    {
        for (auto y : S.block(x))
            out.values[y] = xi.values[x];
    }
    return out;
}

std::vector<double> pullback_measure(SetTransformation const& S,
                                     std::vector<double> const& lambda)
{
    if (lambda.size() != S.target().size())
        throw SpaceMismatch("pullback_measure: weights not on the target space");
    std::vector<double> out(S.source().size(), 0.0);
    for (std::size_t x = 0; x < out.size(); ++x)
    {
        for (auto y : S.block(x))
            out[x] += lambda[y];
    }
    return out;
}

BlockMeasure pushforward_measure(SetTransformation const& S, std::vector<double> const& mu)
{
    if (mu.size() != S.source().size())
        throw SpaceMismatch("pushforward_measure: weights not on the source space");
    return {S.blocks(), mu};
}

AtomFunction rn_derivative(SetTransformation const& S, std::vector<double> const& mu,
                           std::vector<double> const& nu)
{
    if (mu.size() != S.source().size() || nu.size() != S.target().size())
        throw SpaceMismatch("rn_derivative: weight vectors do not match the spaces");
    AtomFunction h = AtomFunction::zero(S.target());
    for (std::size_t x = 0; x < S.blocks().size(); ++x)
    {
        double block_nu = 0.0;
        for (auto y : S.block(x))
            block_nu += nu[y];
        for (auto y : S.block(x))
            h.values[y] = mu[x] / block_nu;
    }
    return h;
}

SetTransformation compose(SetTransformation const& T, SetTransformation const& S)
{
    if (!S.target().equivalent(T.source()) || S.target().size() != T.source().size())
        throw SpaceMismatch("compose: target of S is not the source of T");
    std::vector<std::vector<std::size_t>> blocks(S.source().size());
    for (std::size_t x = 0; x < blocks.size(); ++x)
        blocks[x] = T.image(S.block(x));
    return SetTransformation(S.source(), T.target(), std::move(blocks));
}

//---------------------------------------------------------------------------//
// JSON
//---------------------------------------------------------------------------//

nlohmann::json to_json(FiniteMeasureSpace const& space)
{
    return {{"atoms", space.labels()}, {"weights", space.weights()}};
}

FiniteMeasureSpace space_from_json(nlohmann::json const& j)
{
    return FiniteMeasureSpace(j.at("atoms").get<std::vector<std::string>>(),
                              j.at("weights").get<std::vector<double>>());
}

nlohmann::json blocks_to_json(SetTransformation const& S)
{
    nlohmann::json blocks = nlohmann::json::object();
    for (std::size_t x = 0; x < S.blocks().size(); ++x)
    {
        nlohmann::json b = nlohmann::json::array();
        for (auto y : S.block(x))
            b.push_back(S.target().label(y));
        blocks[S.source().label(x)] = b;
    }
    return {{"blocks", blocks}};
}

SetTransformation set_transformation_from_json(FiniteMeasureSpace source,
                                               FiniteMeasureSpace target,
                                               nlohmann::json const& j)
{
    auto const& obj = j.at("blocks");
    std::vector<std::vector<std::size_t>> blocks(source.size());
    for (std::size_t x = 0; x < source.size(); ++x)
    {
        for (auto const& lbl : obj.at(source.label(x)))
            blocks[x].push_back(target.index_of(lbl.get<std::string>()));
    }
    return SetTransformation(std::move(source), std::move(target), std::move(blocks));
}

}  // namespace lpcuntz
