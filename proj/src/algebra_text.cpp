#include "lpcuntz/algebra_text.hpp"

#include <cctype>

#include "lpcuntz/error.hpp"

namespace lpcuntz
{

namespace
{
//---------------------------------------------------------------------------//
// Parser
//---------------------------------------------------------------------------//

class Parser
{
  public:
    Parser(std::string_view text, AlgebraKind kind) : text_(text), kind_(kind) {}

    Element parse()
    {
        std::vector<std::pair<MonomialKey, Scalar>> terms;
        skip_ws();
        if (at_end())
            fail("empty element");
        bool first = true;
        while (!at_end())
        {
            Scalar sign(1);
            if (peek() == '+' || peek() == '-')
            {
                sign = (get() == '-') ? Scalar(-1) : Scalar(1);
                skip_ws();
            }
            else if (!first)
            {
                fail("expected '+' or '-'");
            }
            Element term = parse_term();
            for (auto const& [key, c] : term.terms())
                terms.emplace_back(key, sign * c);
            first = false;
            skip_ws();
        }
        return Element::from_terms(kind_, std::move(terms));
    }

  private:
    Element parse_term()
    {
        Element acc = Element::from_terms(kind_, {{MonomialKey{}, Scalar(1)}});
        while (true)
        {
            skip_ws();
            acc = multiply_raw(acc, parse_factor());
            skip_ws();
            if (!at_end() && peek() == '*')
            {
                ++pos_;
                continue;
            }
            return acc;
        }
    }

    Element parse_factor()
    {
        if (at_end())
            fail("expected a factor");
        char const c = peek();
        if (c == 's' || c == 't')
        {
            ++pos_;
            Word w = parse_word();
            MonomialKey key = (c == 's') ? MonomialKey{w, {}} : MonomialKey{{}, w};
            return Element::from_terms(kind_, {{key, Scalar(1)}});
        }
        Scalar value;
        if (c == '(')
        {
            ++pos_;
            value = parse_complex();
            skip_ws();
            expect(')');
        }
        else if (c == 'i')
        {
            ++pos_;
            value = Scalar::i();
        }
        else if (std::isdigit(static_cast<unsigned char>(c)))
        {
            value = Scalar(parse_rational());
        }
        else
        {
            fail(std::string("unexpected character '") + c + "'");
        }
        return Element::from_terms(kind_, {{MonomialKey{}, value}});
    }

    Word parse_word()
    {
        Word w;
        if (!at_end() && peek() == '[')
        {
            ++pos_;
            skip_ws();
            if (!at_end() && peek() == ']')
            {
                ++pos_;
                return w;
            }
            while (true)
            {
                skip_ws();
                w.push_back(parse_letter(parse_integer()));
                skip_ws();
                if (!at_end() && peek() == ',')
                {
                    ++pos_;
                    continue;
                }
                expect(']');
                return w;
            }
        }
        if (!kind_.is_finite() || kind_.d() > 9)
            fail("digit shorthand needs d <= 9; use s[j1,j2,...]");
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            w.push_back(parse_letter(get() - '0'));
        if (w.empty())
            fail("expected generator indices");
        return w;
    }

    int parse_letter(long v)
    {
        if (v > 1'000'000 || !kind_.admits_letter(static_cast<int>(v)))
            fail("generator index " + std::to_string(v) + " outside the alphabet");
        return static_cast<int>(v);
    }

    long parse_integer()
    {
        std::size_t const start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        if (start == pos_)
            fail("expected an integer");
        if (pos_ - start > 9)
            fail("integer too large");
        return std::stol(std::string(text_.substr(start, pos_ - start)));
    }

    mpq_class parse_rational()
    {
        std::size_t const start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        if (start == pos_)
            fail("expected a number");
        mpz_class num(std::string(text_.substr(start, pos_ - start)));
        mpz_class den(1);
        if (!at_end() && peek() == '/')
        {
            ++pos_;
            std::size_t const dstart = pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                ++pos_;
            if (dstart == pos_)
                fail("expected a denominator");
            den = mpz_class(std::string(text_.substr(dstart, pos_ - dstart)));
            if (den == 0)
                fail("zero denominator");
        }
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }

    // Inside parentheses: up to two signed parts, at most one imaginary.
    Scalar parse_complex()
    {
        mpq_class re = 0, im = 0;
        bool seen_re = false, seen_im = false;
        for (int part = 0; part < 2; ++part)
        {
            skip_ws();
            if (!at_end() && peek() == ')')
                break;
            int sign = 1;
            if (!at_end() && (peek() == '+' || peek() == '-'))
            {
                sign = (get() == '-') ? -1 : 1;
                skip_ws();
            }
            else if (part > 0)
            {
                fail("expected '+' or '-' in complex literal");
            }
            mpq_class mag = 1;
            bool have_number = false;
            if (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            {
                mag = parse_rational();
                have_number = true;
            }
            skip_ws();
            if (!at_end() && peek() == 'i')
            {
                ++pos_;
                if (seen_im)
                    fail("two imaginary parts");
                im = sign * mag;
                seen_im = true;
            }
            else
            {
                if (!have_number)
                    fail("expected a number");
                if (seen_re)
                    fail("two real parts");
                re = sign * mag;
                seen_re = true;
            }
        }
        if (!seen_re && !seen_im)
            fail("empty complex literal");
        return Scalar(re, im);
    }

    void expect(char c)
    {
        if (at_end() || peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_ws()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char get() { return text_[pos_++]; }

    [[noreturn]] void fail(std::string const& msg) const { throw ParseError(msg, pos_); }

    std::string_view text_;
    AlgebraKind kind_;
    std::size_t pos_ = 0;
};

//---------------------------------------------------------------------------//
// Printer
//---------------------------------------------------------------------------//

std::string word_text(Word const& w, AlgebraKind const& kind)
{
    std::string out;
    if (kind.is_finite() && kind.d() <= 9)
    {
        for (int j : w)
            out += static_cast<char>('0' + j);
        return out;
    }
    out = "[";
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        if (i)
            out += ",";
        out += std::to_string(w[i]);
    }
    return out + "]";
}

std::string monomial_text(MonomialKey const& key, AlgebraKind const& kind)
{
    std::string out;
    if (!key.alpha.empty())
        out += "s" + word_text(key.alpha, kind);
    if (!key.beta.empty())
    {
        if (!out.empty())
            out += "*";
        out += "t" + word_text(key.beta, kind);
    }
    return out;
}
}  // namespace

Element parse_element(std::string_view text, AlgebraKind kind)
{
    return Parser(text, kind).parse();
}

std::string to_text(Element const& a)
{
    if (a.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (auto const& [key, c] : a.terms())
    {
        std::string const mono = monomial_text(key, a.kind());
        bool negative = false;
        std::string coef;
        if (c.is_real())
        {
            negative = sgn(c.re()) < 0;
            mpq_class mag = abs(c.re());
            if (mag != 1 || mono.empty())
                coef = mag.get_str();
        }
        else
        {
            coef = c.to_string();
        }
        std::string body = coef;
        if (!mono.empty())
            body = coef.empty() ? mono : coef + "*" + mono;
        if (first)
            out += negative ? "-" + body : body;
        else
            out += (negative ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

nlohmann::json to_json(Element const& a)
{
    nlohmann::json terms = nlohmann::json::array();
    for (auto const& [key, c] : a.terms())
    {
        terms.push_back({{"re", c.re().get_str()},
                         {"im", c.im().get_str()},
                         {"alpha", key.alpha},
                         {"beta", key.beta}});
    }
    return {{"kind", a.kind().name()}, {"d", a.kind().d()}, {"terms", terms}};
}

Element element_from_json(nlohmann::json const& j)
{
    AlgebraKind const kind =
        AlgebraKind::from_name(j.at("kind").get<std::string>(), j.value("d", 0));
    std::vector<std::pair<MonomialKey, Scalar>> terms;
    for (auto const& t : j.at("terms"))
    {
        terms.emplace_back(MonomialKey{t.at("alpha").get<Word>(), t.at("beta").get<Word>()},
                           Scalar::from_strings(t.at("re").get<std::string>(),
                                                t.at("im").get<std::string>()));
    }
    return Element::from_terms(kind, std::move(terms));
}

}  // namespace lpcuntz
