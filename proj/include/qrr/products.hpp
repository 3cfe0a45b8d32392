#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrr/qfactors.hpp"

namespace qrr {

/// (arg; q^base)_n raised to `power`; n == nullopt is the infinite product.
struct ProductFactor {
  PochArg arg;
  std::optional<int64_t> n;
  int power = 1;
};

/// scalar * (parameter monomial) * q^shift * prod of factors.
struct ProductExpr {
  Coef scalar{1};
  Mono mono = 0;
  QExp shift{0};
  std::vector<ProductFactor> factors;

  /// Appends the factors of o and multiplies the prefactors.
  ProductExpr& merge(const ProductExpr& o);
  int64_t denom() const;
};

/// Sum of product terms; an empty sum is the zero series.
struct RhsExpr {
  std::vector<ProductExpr> terms;
};

/// Expands p to order N with per-parameter degree cap M.
QSeries eval_product(const ProductExpr& p, Trunc N, int M = kNoParamCap);
QSeries eval_rhs(const RhsExpr& r, Trunc N, int M = kNoParamCap);

/// Infinite product factor (x q^c; q^d)_oo^power with unit scalar.
ProductFactor inf_factor(QExp c, QExp d, int power = 1, const CycloRat& scalar = CycloRat(1), Mono mono = 0);

/// Paper-style rendering, e.g. "(q,q^4;q^5)_oo^-1" or "2*q^3*(q^2;q^2)_oo".
std::string render(const PochArg& a);
std::string render(const ProductExpr& p);
std::string render(const RhsExpr& r);
/// Same data with a single denominator, e.g. "1/(q^2,q^3;q^5)_oo".
std::string render_fraction(const ProductExpr& p);

}  // namespace qrr
