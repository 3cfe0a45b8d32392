#pragma once

#include <string>

#include "qrr/qseries.hpp"

namespace qrr {

/// Parses a coefficient expression: rationals, roots of unity z3, z4, ...,
/// parameter names, with + - * / ^ (integer powers) and parentheses.
/// Division is allowed only by parameter-free values.
Coef parse_coef(const std::string& s);

/// Line-oriented text form used by golden files:
///   qseries D=<D> N=<order|inf> [pcap=<k>]
///   <e_num>/<e_den> : <coef>
std::string to_text(const QSeries& f);
QSeries from_text(const std::string& text);

}  // namespace qrr
