#include "qrr/coef.hpp"

#include <numeric>

#include "qrr/errors.hpp"

namespace qrr {

bool mono_mul_slow(Mono a, Mono b, int cap, Mono& out) {
  if ((a & kMonoHigh) || (b & kMonoHigh)) throw ParamOverflow("monomial exponent out of range");
  Mono s = a + b;
  if (cap >= kNoParamCap) {
    if (s & kMonoHigh) throw ParamOverflow("parameter exponent exceeds " + std::to_string(kMaxParamExp));
    out = s;
    return true;
  }
  for (int p = 0; p < kNumParams; ++p)
    if (mono_exp(s, p) > cap) return false;
  out = s;
  return true;
}

std::string mono_str(Mono m) {
  std::string out;
  for (int p = 0; p < kNumParams; ++p) {
    int e = mono_exp(m, p);
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += kParamNames[static_cast<size_t>(p)];
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

int Coef::max_param_exp() const {
  int r = 0;
  for (const auto& t : t_) r = std::max(r, mono_max_exp(t.mono));
  return r;
}

uint32_t Coef::conductor() const {
  uint32_t m = 1;
  for (const auto& t : t_) m = std::lcm(m, t.c.conductor());
  return m;
}

void Coef::add_term(Mono m, const CycloRat& c) {
  if (c.is_zero()) return;
  auto it = t_.begin();
  while (it != t_.end() && it->mono < m) ++it;
  if (it != t_.end() && it->mono == m) {
    it->c += c;
    if (it->c.is_zero()) t_.erase(it);
    return;
  }
  t_.insert(it, CoefTerm{m, c});
}

Coef& Coef::operator+=(const Coef& o) {
  if (t_.size() == 1 && o.t_.size() == 1 && t_[0].mono == o.t_[0].mono) {
    t_[0].c += o.t_[0].c;
    if (t_[0].c.is_zero()) t_.clear();
    return *this;
  }
  for (const auto& t : o.t_) add_term(t.mono, t.c);
  return *this;
}

Coef& Coef::operator-=(const Coef& o) {
  for (const auto& t : o.t_) add_term(t.mono, -t.c);
  return *this;
}

Coef Coef::operator-() const {
  Coef r = *this;
  for (auto& t : r.t_) t.c = -t.c;
  return r;
}

Coef Coef::mul(const Coef& o, int cap) const {
  Coef r;
  r.add_mul(*this, o, cap);
  return r;
}

Coef Coef::scaled(const CycloRat& s) const {
  if (s.is_zero()) return Coef();
  Coef r = *this;
  for (auto& t : r.t_) t.c *= s;
  return r;
}

Coef Coef::truncated(int cap) const {
  if (cap >= kNoParamCap) return *this;
  Coef r;
  for (const auto& t : t_)
    if (mono_max_exp(t.mono) <= cap) r.t_.push_back(t);
  return r;
}

Coef Coef::pow(int64_t e, int cap) const {
  if (e < 0) return coef_inv(*this).pow(-e, cap);
  Coef result(1), base = *this;
  while (e > 0) {
    if (e & 1) result = result.mul(base, cap);
    e >>= 1;
    if (e) base = base.mul(base, cap);
  }
  return result;
}

bool operator==(const Coef& a, const Coef& b) {
  if (a.t_.size() != b.t_.size()) return false;
  for (size_t i = 0; i < a.t_.size(); ++i)
    if (a.t_[i].mono != b.t_[i].mono || a.t_[i].c != b.t_[i].c) return false;
  return true;
}

std::string Coef::str() const {
  if (t_.empty()) return "0";
  std::string out;
  for (const auto& t : t_) {
    std::string c = t.c.str();
    bool compound = c.find_first_of("+-", 1) != std::string::npos;
    std::string term;
    if (t.mono == 0) {
      term = compound ? "(" + c + ")" : c;
    } else if (c == "1") {
      term = mono_str(t.mono);
    } else if (c == "-1") {
      term = "-" + mono_str(t.mono);
    } else {
      term = (compound ? "(" + c + ")" : c) + "*" + mono_str(t.mono);
    }
    if (out.empty()) out = term;
    else if (term[0] == '-') out += term;
    else out += "+" + term;
  }
  return out;
}

Coef coef_inv(const Coef& c) {
  if (c.is_zero()) throw NotInvertible("zero coefficient");
  if (!c.is_constant()) throw NotInvertible("coefficient " + c.str() + " has positive parameter degree");
  return Coef(c.constant_term().inv());
}

Coef coef_mul(const Coef& a, const Coef& b) { return a.mul(b); }

}  // namespace qrr
