#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lpcuntz/scalar.hpp"

namespace lpcuntz
{

//---------------------------------------------------------------------------//
// Algebra kinds and words
//---------------------------------------------------------------------------//

enum class AlgebraFamily
{
    leavitt,
    cohn,
    leavitt_infinity
};

/*!
 * Which algebra an element lives in: L_d, C_d or L_infinity.
 *
 * For L_infinity the generator count is unbounded and \c d() returns 0.
 */
class AlgebraKind
{
  public:
    static AlgebraKind leavitt(int d);
    static AlgebraKind cohn(int d);
    static AlgebraKind infinity();

    AlgebraFamily family() const { return family_; }
    int d() const { return d_; }
    bool is_finite() const { return family_ != AlgebraFamily::leavitt_infinity; }
    bool has_sum_relation() const { return family_ == AlgebraFamily::leavitt; }
    bool admits_letter(int letter) const
    {
        return letter >= 1 && (!is_finite() || letter <= d_);
    }

    std::string name() const;  // "leavitt", "cohn", "leavitt_infinity"
    static AlgebraKind from_name(std::string const& name, int d);

    friend bool operator==(AlgebraKind const&, AlgebraKind const&) = default;

  private:
    AlgebraKind(AlgebraFamily f, int d) : family_(f), d_(d) {}

    AlgebraFamily family_;
    int d_;
};

// Finite sequence of generator indices (1-based letters).
using Word = std::vector<int>;

// All words of length n over {1..d} in lexicographic order.
std::vector<Word> words_of_length(int d, int n);
// Position of a word in the lexicographic order of words_of_length.
std::size_t word_index(Word const& w, int d);

//---------------------------------------------------------------------------//
// Monomials s_alpha t_beta
//---------------------------------------------------------------------------//

struct MonomialKey
{
    Word alpha;
    Word beta;

    int degree() const
    {
        return static_cast<int>(alpha.size()) - static_cast<int>(beta.size());
    }
    std::size_t length() const { return alpha.size() + beta.size(); }

    friend bool operator==(MonomialKey const&, MonomialKey const&) = default;
};

// Orders by (l(alpha) + l(beta), alpha, beta).
struct MonomialOrder
{
    bool operator()(MonomialKey const& a, MonomialKey const& b) const;
};

using TermMap = std::map<MonomialKey, Scalar, MonomialOrder>;

//---------------------------------------------------------------------------//
// Algebra elements
//---------------------------------------------------------------------------//

/*!
 * Finite linear combination of monomials s_alpha t_beta.
 *
 * Here t_beta = t_{beta(n)} ... t_{beta(1)}, so that s_alpha' = t_alpha.
 * Zero coefficients are never stored. Elements produced by the arithmetic
 * operations are canonical; \c from_terms can build raw (unreduced) forms,
 * which every consumer accepts.
 */
class Element
{
  public:
    explicit Element(AlgebraKind kind);

    static Element zero(AlgebraKind kind) { return Element(kind); }
    static Element one(AlgebraKind kind);
    static Element s(AlgebraKind kind, Word alpha);
    static Element t(AlgebraKind kind, Word beta);
    static Element monomial(AlgebraKind kind, Scalar c, Word alpha, Word beta);
    // Sums coefficients of repeated keys; does not apply the sum relation.
    static Element from_terms(AlgebraKind kind,
                              std::vector<std::pair<MonomialKey, Scalar>> terms);

    AlgebraKind const& kind() const { return kind_; }
    TermMap const& terms() const { return terms_; }
    bool is_canonical() const { return canonical_; }
    bool is_zero() const { return terms_.empty(); }

    // Largest l(beta); 0 for the zero element.
    std::size_t t_depth() const;
    // Largest / smallest term degree; 0 for the zero element.
    int max_degree() const;
    int min_degree() const;

    Element& operator+=(Element const& o);
    Element& operator-=(Element const& o);
    Element& operator*=(Scalar const& c);

    friend Element operator+(Element a, Element const& b) { return a += b; }
    friend Element operator-(Element a, Element const& b) { return a -= b; }
    friend Element operator-(Element a) { return a *= Scalar(-1); }
    friend Element operator*(Scalar const& c, Element a) { return a *= c; }
    // Canonical product.
    friend Element operator*(Element const& a, Element const& b);

    // Compares canonical forms.
    friend bool operator==(Element const& a, Element const& b);

  private:
    friend Element normal_form(Element const&);
    friend Element normal_form_shuffled(Element const&, std::uint64_t);
    friend Element multiply_raw(Element const&, Element const&);

    void add_term(MonomialKey const& key, Scalar const& c);
    void check_letters(Word const& w) const;

    AlgebraKind kind_;
    TermMap terms_;
    bool canonical_ = true;
};

//---------------------------------------------------------------------------//
// Operations
//---------------------------------------------------------------------------//

// Product using only t_j s_k = delta_jk; result is not reduced.
Element multiply_raw(Element const& a, Element const& b);
// Canonical product (throws KindMismatch).
Element mul(Element const& a, Element const& b);

/*!
 * Exhaustively applies s_{alpha d} t_{beta d} -> s_alpha t_beta
 * - sum_{j<d} s_{alpha j} t_{beta j} (Leavitt kinds only).
 */
Element normal_form(Element const& a);
// Same rewriting with a seeded random choice of redex at every step.
Element normal_form_shuffled(Element const& a, std::uint64_t seed);

// Conjugate-linear antimultiplicative involution with s_j* = t_j.
Element star(Element const& a);
// Linear antimultiplicative involution with s_j' = t_j.
Element prime(Element const& a);

// Homogeneous components keyed by degree l(alpha) - l(beta).
std::map<int, Element> graded_components(Element const& a);

/*!
 * Common right-length expansion of a family of Leavitt elements.
 *
 * Every a_k is rewritten as sum over alpha in F, beta in W_n of
 * lambda_{k,alpha,beta} s_alpha t_beta by padding each monomial with
 * sum_{gamma in W_l} s_gamma t_gamma.
 */
struct SameLengthForm
{
    int n = 0;
    std::vector<Word> left_words;  // F, sorted
    // coefficients[k] maps (alpha, beta) to lambda; absent entries are zero.
    std::vector<std::map<std::pair<Word, Word>, Scalar>> coefficients;

    // The expansion of a_k as an (unreduced) element.
    Element expansion(AlgebraKind kind, std::size_t k) const;
};

// n is max(min_length, max l(beta)) over the canonical forms.
SameLengthForm same_length_form(std::vector<Element> const& as, int min_length = 0);

/*!
 * Matrix-unit embedding of M_{d^m}: e_{alpha,beta} -> s_alpha t_beta.
 *
 * The table is indexed by words of length m in lexicographic order.
 */
Element matrix_unit_embed(AlgebraKind kind, int m,
                          std::vector<std::vector<Scalar>> const& table);

// s_lambda = sum_j lambda_j s_j and t_lambda = sum_j lambda_j t_j.
Element linear_comb_s(AlgebraKind kind, std::vector<Scalar> const& lambda);
Element linear_comb_t(AlgebraKind kind, std::vector<Scalar> const& lambda);

/*!
 * Homomorphism L_infinity -> L_2 with s_j -> s_2^j s_1 and t_j -> t_1 t_2^j.
 *
 * Letterwise this replaces j by the word (2,...,2,1) with j twos.
 */
Element embed_infinity_in_l2(Element const& a);

}  // namespace lpcuntz
