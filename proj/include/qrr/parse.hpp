#pragma once

#include <string>

#include "qrr/side.hpp"

namespace qrr {

// Paper-like notation for identity sides. A side is a +/- separated list of
// terms; a term is a product of atoms, optionally followed by
//   sum[i,j] <summand>
// whose atoms may use the summation variables. Atoms:
//   2, z4, a, a^(i+j), q^(3i^2/2+i), (-1)^(i+j), z4^(3n), (-z4)^n,
//   (x1,x2;q^d)_sub  with sub = oo | 3 | n | (2n+1), optionally ^power,
//   (1+q^3), (1-a*q^2)  single binomials,  (...) grouping,
// and "/ atom" divides. Pochhammer arguments look like -q^(1/2), a*q, uv/q.

Side parse_side(const std::string& text);
/// A single bare sum term.
MultiSumSpec parse_sum(const std::string& text);
/// A single product term (no sums).
ProductExpr parse_product(const std::string& text);
RhsExpr parse_rhs(const std::string& text);
/// Parses an exponent expression such as "-1", "3/2" or "(5/4)".
QExp parse_rational(const std::string& text);

std::string format_sum(const MultiSumSpec& s);
std::string format_side(const Side& s);

}  // namespace qrr
