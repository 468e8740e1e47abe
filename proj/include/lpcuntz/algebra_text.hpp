#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "lpcuntz/algebra.hpp"

namespace lpcuntz
{

/*!
 * Parse the textual element grammar.
 *
 * Terms are joined by '+' or '-'. A term is a '*'-separated product of
 * factors; a factor is a scalar ("3", "1/2", "(1+2i)", "(1/2+3/4 i)", "i"),
 * the unit "1", or a generator word: "s[1,2]" is s_1 s_2 and "t[1,2]" is
 * t_(1,2) = t_2 t_1. When d <= 9 the short forms "s12" and "t12" are
 * accepted. Products are formed with the generator relations only; the
 * result is not reduced (call normal_form for the canonical form).
 */
Element parse_element(std::string_view text, AlgebraKind kind);

// Canonical text, e.g. "1 - s1*t1". Terms in monomial order.
std::string to_text(Element const& a);

// {kind, d, terms: [{re, im, alpha, beta}]}, coefficients as rational strings.
nlohmann::json to_json(Element const& a);
Element element_from_json(nlohmann::json const& j);

}  // namespace lpcuntz
