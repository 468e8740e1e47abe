#include "lpcuntz/algebra.hpp"

#include <algorithm>
#include <random>

#include "lpcuntz/error.hpp"

namespace lpcuntz
{

//---------------------------------------------------------------------------//
// AlgebraKind
//---------------------------------------------------------------------------//

AlgebraKind AlgebraKind::leavitt(int d)
{
    if (d < 2)
        throw InvalidArgument("Leavitt algebra needs d >= 2");
    return AlgebraKind(AlgebraFamily::leavitt, d);
}

AlgebraKind AlgebraKind::cohn(int d)
{
    if (d < 2)
        throw InvalidArgument("Cohn algebra needs d >= 2");
    return AlgebraKind(AlgebraFamily::cohn, d);
}

AlgebraKind AlgebraKind::infinity()
{
    return AlgebraKind(AlgebraFamily::leavitt_infinity, 0);
}

std::string AlgebraKind::name() const
{
    switch (family_)
    {
        case AlgebraFamily::leavitt:
            return "leavitt";
        case AlgebraFamily::cohn:
            return "cohn";
        case AlgebraFamily::leavitt_infinity:
            return "leavitt_infinity";
    }
    return "";
}

AlgebraKind AlgebraKind::from_name(std::string const& name, int d)
{
    if (name == "leavitt")
        return leavitt(d);
    if (name == "cohn")
        return cohn(d);
    if (name == "leavitt_infinity" || name == "infinity")
        return infinity();
    throw InvalidArgument("unknown algebra kind '" + name + "'");
}

//---------------------------------------------------------------------------//
// Words
//---------------------------------------------------------------------------//

std::vector<Word> words_of_length(int d, int n)
{
    std::vector<Word> out{Word{}};
    for (int l = 0; l < n; ++l)
    {
        std::vector<Word> next;
        next.reserve(out.size() * static_cast<std::size_t>(d));
        for (auto const& w : out)
        {
            for (int j = 1; j <= d; ++j)
            {
                Word x = w;
                x.push_back(j);
                next.push_back(std::move(x));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::size_t word_index(Word const& w, int d)
{
    std::size_t idx = 0;
    for (int letter : w)
        idx = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(letter - 1);
    return idx;
}

bool MonomialOrder::operator()(MonomialKey const& a, MonomialKey const& b) const
{
    if (a.length() != b.length())
        return a.length() < b.length();
    if (a.alpha != b.alpha)
        return a.alpha < b.alpha;
    return a.beta < b.beta;
}

//---------------------------------------------------------------------------//
// Element
//---------------------------------------------------------------------------//

Element::Element(AlgebraKind kind) : kind_(kind) {}

Element Element::one(AlgebraKind kind)
{
    return monomial(kind, Scalar(1), {}, {});
}

Element Element::s(AlgebraKind kind, Word alpha)
{
    return monomial(kind, Scalar(1), std::move(alpha), {});
}

Element Element::t(AlgebraKind kind, Word beta)
{
    return monomial(kind, Scalar(1), {}, std::move(beta));
}

Element Element::monomial(AlgebraKind kind, Scalar c, Word alpha, Word beta)
{
    Element e(kind);
    e.check_letters(alpha);
    e.check_letters(beta);
    e.add_term(MonomialKey{std::move(alpha), std::move(beta)}, c);
    e.canonical_ = false;
    return normal_form(e);
}

Element Element::from_terms(AlgebraKind kind,
                            std::vector<std::pair<MonomialKey, Scalar>> terms)
{
    Element e(kind);
    for (auto& [key, c] : terms)
    {
        e.check_letters(key.alpha);
        e.check_letters(key.beta);
        e.add_term(key, c);
    }
    e.canonical_ = false;
    return e;
}

void Element::check_letters(Word const& w) const
{
    for (int letter : w)
    {
        if (!kind_.admits_letter(letter))
            throw InvalidArgument("generator index " + std::to_string(letter)
                                  + " outside the alphabet of " + kind_.name());
    }
}

void Element::add_term(MonomialKey const& key, Scalar const& c)
{
    if (c.is_zero())
        return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted)
    {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

std::size_t Element::t_depth() const
{
    std::size_t depth = 0;
    for (auto const& [key, c] : terms_)
        depth = std::max(depth, key.beta.size());
    return depth;
}

int Element::max_degree() const
{
    if (terms_.empty())
        return 0;
    int deg = terms_.begin()->first.degree();
    for (auto const& [key, c] : terms_)
        deg = std::max(deg, key.degree());
    return deg;
}

int Element::min_degree() const
{
    if (terms_.empty())
        return 0;
    int deg = terms_.begin()->first.degree();
    for (auto const& [key, c] : terms_)
        deg = std::min(deg, key.degree());
    return deg;
}

Element& Element::operator+=(Element const& o)
{
    if (!(kind_ == o.kind_))
        throw KindMismatch("cannot add elements of " + kind_.name() + " and "
                           + o.kind_.name());
    for (auto const& [key, c] : o.terms_)
        add_term(key, c);
    canonical_ = canonical_ && o.canonical_;
    if (!canonical_)
        *this = normal_form(*this);
    return *this;
}

Element& Element::operator-=(Element const& o)
{
    return *this += -1 * o;
}

Element& Element::operator*=(Scalar const& c)
{
    if (c.is_zero())
    {
        terms_.clear();
        return *this;
    }
    for (auto& [key, v] : terms_)
        v *= c;
    return *this;
}

Element operator*(Element const& a, Element const& b)
{
    return mul(a, b);
}

bool operator==(Element const& a, Element const& b)
{
    if (!(a.kind() == b.kind()))
        return false;
    Element const na = a.is_canonical() ? a : normal_form(a);
    Element const nb = b.is_canonical() ? b : normal_form(b);
    return na.terms() == nb.terms();
}

//---------------------------------------------------------------------------//
// Multiplication
//---------------------------------------------------------------------------//

namespace
{
bool is_prefix(Word const& prefix, Word const& w)
{
    return prefix.size() <= w.size()
           && std::equal(prefix.begin(), prefix.end(), w.begin());
}

Word concat(Word a, Word const& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}
}  // namespace

Element multiply_raw(Element const& a, Element const& b)
{
    if (!(a.kind() == b.kind()))
        throw KindMismatch("cannot multiply elements of " + a.kind().name()
                           + " and " + b.kind().name());
    Element out(a.kind());
    for (auto const& [ka, ca] : a.terms())
    {
        for (auto const& [kb, cb] : b.terms())
        {
            // (s_a t_b)(s_g t_e): t_b s_g collapses by prefix matching.
            Word const& beta = ka.beta;
            Word const& gamma = kb.alpha;
            if (is_prefix(beta, gamma))
            {
                Word rest(gamma.begin() + static_cast<long>(beta.size()), gamma.end());
                out.add_term(MonomialKey{concat(ka.alpha, rest), kb.beta}, ca * cb);
            }
            else if (is_prefix(gamma, beta))
            {
                Word rest(beta.begin() + static_cast<long>(gamma.size()), beta.end());
                out.add_term(MonomialKey{ka.alpha, concat(kb.beta, rest)}, ca * cb);
            }
        }
    }
    out.canonical_ = false;
    return out;
}

Element mul(Element const& a, Element const& b)
{
    return normal_form(multiply_raw(a, b));
}

//---------------------------------------------------------------------------//
// Normal form
//---------------------------------------------------------------------------//

namespace
{
bool reducible(MonomialKey const& key, int d)
{
    return !key.alpha.empty() && !key.beta.empty() && key.alpha.back() == d
           && key.beta.back() == d;
}

// Applies one rewrite to the term at `it`, which must be reducible.
template<class AddTerm>
void rewrite_term(MonomialKey key, Scalar c, int d, AddTerm&& add)
{
    key.alpha.pop_back();
    key.beta.pop_back();
    add(key, c);
    for (int j = 1; j < d; ++j)
    {
        MonomialKey k = key;
        k.alpha.push_back(j);
        k.beta.push_back(j);
        add(k, -c);
    }
}
}  // namespace

Element normal_form(Element const& a)
{
    Element out = a;
    out.canonical_ = true;
    if (!a.kind().has_sum_relation())
        return out;
    int const d = a.kind().d();
    // Redexes only produce redexes of strictly smaller length, so a sweep
    // from the longest term down terminates.
    while (true)
    {
        auto it = std::find_if(out.terms_.rbegin(), out.terms_.rend(),
                               [d](auto const& kv) { return reducible(kv.first, d); });
        if (it == out.terms_.rend())
            break;
        MonomialKey key = it->first;
        Scalar c = it->second;
        out.terms_.erase(key);
        rewrite_term(key, c, d,
                     [&out](MonomialKey const& k, Scalar const& v) { out.add_term(k, v); });
    }
    return out;
}

Element normal_form_shuffled(Element const& a, std::uint64_t seed)
{
    Element out = a;
    out.canonical_ = true;
    if (!a.kind().has_sum_relation())
        return out;
    int const d = a.kind().d();
    std::mt19937_64 rng(seed);
    while (true)
    {
        std::vector<MonomialKey> redexes;
        for (auto const& [key, c] : out.terms_)
        {
            if (reducible(key, d))
                redexes.push_back(key);
        }
        if (redexes.empty())
            break;
        std::uniform_int_distribution<std::size_t> pick(0, redexes.size() - 1);
        MonomialKey key = redexes[pick(rng)];
        Scalar c = out.terms_.at(key);
        out.terms_.erase(key);
        rewrite_term(key, c, d,
                     [&out](MonomialKey const& k, Scalar const& v) { out.add_term(k, v); });
    }
    return out;
}

//---------------------------------------------------------------------------//
// Involutions and grading
//---------------------------------------------------------------------------//

namespace
{
Element swap_words(Element const& a, bool conjugate)
{
    std::vector<std::pair<MonomialKey, Scalar>> terms;
    for (auto const& [key, c] : a.terms())
        terms.emplace_back(MonomialKey{key.beta, key.alpha}, conjugate ? c.conj() : c);
    Element out = Element::from_terms(a.kind(), std::move(terms));
    // The rewrite rule is symmetric in alpha and beta, so canonicity survives.
    return a.is_canonical() ? normal_form(out) : out;
}
}  // namespace

Element star(Element const& a)
{
    return swap_words(a, true);
}

Element prime(Element const& a)
{
    return swap_words(a, false);
}

std::map<int, Element> graded_components(Element const& a)
{
    Element const c = a.is_canonical() ? a : normal_form(a);
    std::map<int, std::vector<std::pair<MonomialKey, Scalar>>> buckets;
    for (auto const& [key, v] : c.terms())
        buckets[key.degree()].emplace_back(key, v);
    std::map<int, Element> out;
    for (auto& [deg, terms] : buckets)
        out.emplace(deg, normal_form(Element::from_terms(a.kind(), std::move(terms))));
    return out;
}

//---------------------------------------------------------------------------//
// Same-length form
//---------------------------------------------------------------------------//

Element SameLengthForm::expansion(AlgebraKind kind, std::size_t k) const
{
    std::vector<std::pair<MonomialKey, Scalar>> terms;
    for (auto const& [ab, c] : coefficients.at(k))
        terms.emplace_back(MonomialKey{ab.first, ab.second}, c);
    return Element::from_terms(kind, std::move(terms));
}

SameLengthForm same_length_form(std::vector<Element> const& as, int min_length)
{
    SameLengthForm out;
    if (as.empty())
        return out;
    AlgebraKind const kind = as.front().kind();
    if (kind.family() != AlgebraFamily::leavitt)
        throw InvalidArgument("same_length_form requires a Leavitt algebra L_d");

    std::vector<Element> canon;
    for (auto const& a : as)
    {
        if (!(a.kind() == kind))
            throw KindMismatch("same_length_form: mixed algebra kinds");
        canon.push_back(normal_form(a));
    }

    int n = std::max(min_length, 0);
    for (auto const& a : canon)
        n = std::max(n, static_cast<int>(a.t_depth()));
    out.n = n;

    int const d = kind.d();
    std::map<Word, bool> left;
    for (auto const& a : canon)
    {
        std::map<std::pair<Word, Word>, Scalar> coeffs;
        for (auto const& [key, c] : a.terms())
        {
            int const pad = n - static_cast<int>(key.beta.size());
            for (auto const& gamma : words_of_length(d, pad))
            {
                Word alpha = concat(key.alpha, gamma);
                Word beta = concat(key.beta, gamma);
                left[alpha] = true;
                auto [it, inserted] = coeffs.try_emplace({alpha, beta}, c);
                if (!inserted)
                    it->second += c;
            }
        }
        std::erase_if(coeffs, [](auto const& kv) { return kv.second.is_zero(); });
        out.coefficients.push_back(std::move(coeffs));
    }
    if (left.empty())
        left[Word{}] = true;
    for (auto const& [w, unused] : left)
        out.left_words.push_back(w);
    return out;
}

//---------------------------------------------------------------------------//
// Matrix units and linear combinations
//---------------------------------------------------------------------------//

Element matrix_unit_embed(AlgebraKind kind, int m,
                          std::vector<std::vector<Scalar>> const& table)
{
    if (kind.family() != AlgebraFamily::leavitt)
        throw InvalidArgument("matrix_unit_embed requires a Leavitt algebra L_d");
    auto const words = words_of_length(kind.d(), m);
    if (table.size() != words.size())
        throw InvalidArgument("matrix unit table must be d^m x d^m");
    std::vector<std::pair<MonomialKey, Scalar>> terms;
    for (std::size_t r = 0; r < words.size(); ++r)
    {
        if (table[r].size() != words.size())
            throw InvalidArgument("matrix unit table must be d^m x d^m");
        for (std::size_t c = 0; c < words.size(); ++c)
            terms.emplace_back(MonomialKey{words[r], words[c]}, table[r][c]);
    }
    return normal_form(Element::from_terms(kind, std::move(terms)));
}

namespace
{
Element linear_comb(AlgebraKind kind, std::vector<Scalar> const& lambda, bool s_side)
{
    if (kind.is_finite() && static_cast<int>(lambda.size()) > kind.d())
        throw InvalidArgument("coefficient vector longer than d");
    std::vector<std::pair<MonomialKey, Scalar>> terms;
    for (std::size_t j = 0; j < lambda.size(); ++j)
    {
        Word w{static_cast<int>(j + 1)};
        terms.emplace_back(s_side ? MonomialKey{w, {}} : MonomialKey{{}, w}, lambda[j]);
    }
    return normal_form(Element::from_terms(kind, std::move(terms)));
}
}  // namespace

Element linear_comb_s(AlgebraKind kind, std::vector<Scalar> const& lambda)
{
    return linear_comb(kind, lambda, true);
}

Element linear_comb_t(AlgebraKind kind, std::vector<Scalar> const& lambda)
{
    return linear_comb(kind, lambda, false);
}

Element embed_infinity_in_l2(Element const& a)
{
    if (a.kind().family() != AlgebraFamily::leavitt_infinity)
        throw KindMismatch("embed_infinity_in_l2 expects an element of L_infinity");
    auto image = [](Word const& w) {
        Word out;
        for (int j : w)
        {
            out.insert(out.end(), static_cast<std::size_t>(j), 2);
            out.push_back(1);
        }
        return out;
    };
    std::vector<std::pair<MonomialKey, Scalar>> terms;
    for (auto const& [key, c] : a.terms())
        terms.emplace_back(MonomialKey{image(key.alpha), image(key.beta)}, c);
    return normal_form(Element::from_terms(AlgebraKind::leavitt(2), std::move(terms)));
}

}  // namespace lpcuntz
