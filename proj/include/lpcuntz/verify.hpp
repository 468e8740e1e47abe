#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpcuntz/algebra.hpp"
#include "lpcuntz/spatial.hpp"

namespace lpcuntz
{

//---------------------------------------------------------------------------//
// Seeded random inputs
//---------------------------------------------------------------------------//

using Rng = std::mt19937_64;

// Random element with small dyadic complex coefficients and words up to max_len.
Element random_element(AlgebraKind kind, Rng& rng, int terms, int max_len);
// Random element of span{s_alpha t_beta : l(alpha) = l(beta) = m}; fills coeffs (d^m x d^m).
Element random_degree_zero(AlgebraKind kind, int m, Rng& rng, Eigen::MatrixXcd& coeffs);
// Random measure space with 1..max_atoms atoms and weights in [0.1, 2].
FiniteMeasureSpace random_space(Rng& rng, std::size_t max_atoms, std::string const& prefix = "");
// Random spatial system; blocks of size up to 3 when semispatial is allowed.
SpatialSystem random_system(Rng& rng, FiniteMeasureSpace const& domain,
                            FiniteMeasureSpace const& codomain, bool allow_blocks);
Eigen::VectorXcd random_vector(Rng& rng, Eigen::Index n);

//---------------------------------------------------------------------------//
// Suites
//---------------------------------------------------------------------------//

struct CheckResult
{
    std::string name;
    bool passed = true;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;  // witness on failure
};

struct SuiteResult
{
    std::string suite;
    std::vector<CheckResult> checks;

    bool passed() const;
};

struct VerifyOptions
{
    std::uint64_t seed = 0;
    std::size_t atoms = 8;  // lamperti
    int cases = 200;        // lamperti
};

// Names accepted by run_suite, excluding "all".
std::vector<std::string> suite_names();
// Runs one suite, or every suite for "all". Throws InvalidArgument on unknown names.
std::vector<SuiteResult> run_suite(std::string const& name, VerifyOptions const& opts = {});

SuiteResult verify_relations(VerifyOptions const& opts);
SuiteResult verify_lamperti(VerifyOptions const& opts);
SuiteResult verify_skew_table(VerifyOptions const& opts);
SuiteResult verify_calculus(VerifyOptions const& opts);
SuiteResult verify_symbolic(VerifyOptions const& opts);
SuiteResult verify_standard(VerifyOptions const& opts);
SuiteResult verify_degree_zero(VerifyOptions const& opts);
SuiteResult verify_free(VerifyOptions const& opts);
SuiteResult verify_embedding(VerifyOptions const& opts);
SuiteResult verify_examples(VerifyOptions const& opts);

nlohmann::json to_json(SuiteResult const& r);

}  // namespace lpcuntz
