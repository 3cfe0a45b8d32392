#include "qrr/dense.hpp"

#include <algorithm>

#include "qrr/errors.hpp"

namespace qrr {

DenseSeries::DenseSeries(int64_t D, int64_t base, int64_t limit, int pcap)
    : D_(D), base_(base), limit_(limit), pcap_(pcap) {
  if (limit >= base) c_.resize(static_cast<size_t>(limit - base + 1));
}

DenseSeries DenseSeries::from(const QSeries& f, int64_t limit) {
  if (!f.trunc().is_inf() && f.trunc().key_limit(f.denom()) < limit)
    throw Error("dense buffer would extend past the known order");
  int64_t base = f.empty() ? limit + 1 : f.terms().front().first;
  DenseSeries d(f.denom(), base, limit, f.pcap());
  for (const auto& [k, c] : f.terms()) {
    if (k > limit) break;
    d.at(k) = c;
  }
  return d;
}

void DenseSeries::mul_one_minus(const Coef& x, int64_t e) {
  if (e < 0) throw Error("mul_one_minus needs a nonnegative exponent");
  if (x.is_zero() || empty_range()) return;
  int64_t n = static_cast<int64_t>(c_.size());
  if (e == 0) {
    for (auto& c : c_) {
      if (c.is_zero()) continue;
      Coef t = c.mul(x, pcap_);
      c -= t;
    }
    return;
  }
  for (int64_t i = n - 1; i >= e; --i) c_[static_cast<size_t>(i)].add_mul(x, c_[static_cast<size_t>(i - e)], pcap_, true);
}

void DenseSeries::div_one_minus(const Coef& x, int64_t e) {
  if (x.is_zero() || empty_range()) return;
  int64_t n = static_cast<int64_t>(c_.size());
  if (e > 0) {
    for (int64_t i = e; i < n; ++i) c_[static_cast<size_t>(i)].add_mul(x, c_[static_cast<size_t>(i - e)], pcap_);
    return;
  }
  if (e < 0) throw Error("div_one_minus needs a nonnegative exponent");
  if (x.is_constant()) {
    Coef one_minus = Coef(1) - x;
    if (one_minus.is_zero()) throw PoleAtNegativeIndex("division by an identically zero factor");
    scale(coef_inv(one_minus));
    return;
  }
  if (x.constant_term() != CycloRat(0))
    throw NotInvertible("1 - x with x = " + x.str() + " is not invertible in the parameter ring");
  if (pcap_ >= kNoParamCap)
    throw NonTruncating("geometric expansion in a parameter needs a parameter cap");
  // Each pass raises parameter degree, so at most pcap+1 passes per slot
  // (times the number of parameters) survive truncation.
  for (auto& c : c_) {
    if (c.is_zero()) continue;
    Coef acc = c, t = c;
    for (;;) {
      t = t.mul(x, pcap_);
      if (t.is_zero()) break;
      acc += t;
    }
    c = std::move(acc);
  }
}

void DenseSeries::scale(const Coef& s) {
  if (s.is_one()) return;
  for (auto& c : c_)
    if (!c.is_zero()) c = c.mul(s, pcap_);
}

void DenseSeries::add(const DenseSeries& g, bool negate) {
  if (g.D_ != D_) throw DenominatorMismatch("dense add with different denominators");
  int64_t lo = std::max(base_, g.base_), hi = std::min(limit_, g.limit_);
  for (int64_t k = lo; k <= hi; ++k) {
    const Coef& v = g.at(k);
    if (v.is_zero()) continue;
    if (negate) at(k) -= v;
    else at(k) += v;
  }
}

QSeries DenseSeries::to_series() const {
  std::vector<QSeries::Term> terms;
  for (size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].is_zero()) terms.push_back({base_ + static_cast<int64_t>(i), c_[i]});
  return QSeries::from_terms(D_, std::move(terms), Trunc(QExp(limit_, D_)), pcap_);
}

QSeries binomial_product(const Coef& scalar0, int64_t shift, const std::vector<Binomial>& bins0, int64_t D,
                         Trunc N, int pcap) {
  Coef scalar = scalar0.truncated(pcap);
  std::vector<Binomial> pos;  // e >= 0 after rewriting
  std::vector<Binomial> neg;  // parameter-carrying factors with e < 0
  bool has_den = false;
  for (const auto& b : bins0) {
    if (b.sign == 0 || b.x.is_zero()) continue;
    if (b.e < 0) {
      if (b.x.is_constant()) {
        // (1 - x q^e) = -x q^e (1 - x^-1 q^-e)
        Coef mx = -b.x;
        scalar = scalar.mul(mx.pow(b.sign), pcap);
        shift += b.e * b.sign;
        pos.push_back({coef_inv(b.x), -b.e, b.sign});
        if (b.sign < 0) has_den = true;
        continue;
      }
      if (b.sign < 0 && (pcap >= kNoParamCap || b.x.constant_term() != CycloRat(0)))
        throw NotInvertible("inverse of 1 - " + b.x.str() + "*q^(" + exp_str(QExp(b.e, D)) + ")");
      neg.push_back(b);
      continue;
    }
    if (b.e == 0 && b.x.is_constant()) {
      Coef one_minus = Coef(1) - b.x;
      if (one_minus.is_zero()) {
        if (b.sign < 0) throw PoleAtNegativeIndex("division by an identically zero factor");
        return QSeries::from_terms(D, {}, N, pcap);
      }
      scalar = scalar.mul(one_minus.pow(b.sign), pcap);
      continue;
    }
    if (b.sign < 0) has_den = true;
    pos.push_back(b);
  }
  if (scalar.is_zero()) return QSeries::from_terms(D, {}, N, pcap);

  // The monomial times the negative-exponent factors is a polynomial in q
  // (modulo the parameter cap): a denominator 1/(1 - x q^e) with x of
  // positive parameter degree is the finite sum of x^k q^(ek) with x^k
  // inside the cap.
  int64_t base = shift, top = shift;
  for (const auto& b : neg) {
    if (b.sign > 0) {
      base += b.e * b.sign;
    } else {
      int kmax = 0;
      for (Coef p = b.x; !p.is_zero() && kmax <= kMaxParamExp; p = p.mul(b.x, pcap)) ++kmax;
      base += b.e * kmax * (-b.sign);
    }
  }
  if (N.is_inf()) {
    if (has_den) throw NonTruncating("exact product with a denominator factor");
    for (const auto& b : pos) top += b.e * b.sign;
  } else {
    top = N.key_limit(D);
  }
  if (top < base) return QSeries::from_terms(D, {}, N, pcap);
  DenseSeries buf(D, base, std::max(top, shift), pcap);
  buf.at(shift) = scalar;
  int64_t n = buf.limit() - buf.base();
  for (const auto& b : neg) {
    for (int s = 0; s < std::abs(b.sign); ++s) {
      if (b.sign > 0) {
        // c[i] -= x c[i - e]; i - e lies above i, so ascending reads old values.
        for (int64_t i = 0; i - b.e <= n; ++i) {
          int64_t lo = buf.base() + i;
          buf.at(lo).add_mul(b.x, buf.at(lo - b.e), pcap, true);
        }
      } else {
        // c[i] += x c_new[i - e]; descending reads updated values.
        for (int64_t i = n + b.e; i >= 0; --i) {
          int64_t lo = buf.base() + i;
          buf.at(lo).add_mul(b.x, buf.at(lo - b.e), pcap);
        }
      }
    }
  }
  for (const auto& b : pos) {
    if (b.e > n) continue;
    if (b.sign > 0) {
      for (int s = 0; s < b.sign; ++s) buf.mul_one_minus(b.x, b.e);
    } else {
      for (int s = 0; s < -b.sign; ++s) buf.div_one_minus(b.x, b.e);
    }
  }
  QSeries out = buf.to_series();
  return QSeries::from_terms(D, out.terms(), N, pcap);
}

}  // namespace qrr
