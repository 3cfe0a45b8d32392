#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrr/summation.hpp"

namespace qrr {

/// One additive term of an identity side: a product multiplier, times a
/// multi-sum when present.
struct SideTerm {
  ProductExpr mult;
  std::optional<MultiSumSpec> sum;
};

/// Sum of terms; empty means 0.
using Side = std::vector<SideTerm>;

bool has_sum(const Side& s);
int64_t side_denom(const Side& s);
/// Evaluates the side exactly to order N with parameter cap M. Multipliers
/// of negative valuation get their sums evaluated to a higher order so the
/// product is still exact to N.
QSeries eval_side(const Side& s, QExp N, int M = 8, int threads = 1);

/// Parameter p -> c * q^e. Inside a multi-sum c has to be a root of unity,
/// since its powers become part of the sign; p may not occur in a scalar.
PochArg specialize(const PochArg& a, char p, const CycloRat& c, QExp e);
ProductExpr specialize(const ProductExpr& x, char p, const CycloRat& c, QExp e);
MultiSumSpec specialize(const MultiSumSpec& s, char p, const CycloRat& c, QExp e);
Side specialize(const Side& s, char p, const CycloRat& c, QExp e);

/// (m, k) with c = zeta_m^k and m minimal, when c is a root of unity.
std::optional<std::pair<uint32_t, int64_t>> as_root_of_unity(const CycloRat& c);

}  // namespace qrr
