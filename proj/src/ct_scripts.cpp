#include "qrr/ct_scripts.hpp"

#include <tuple>

#include "qrr/parse.hpp"

namespace qrr {

namespace {

/// scalar * (parameters) * q^offset as a Pochhammer argument in base q^base.
PochArg arg(int64_t scalar, const std::string& params, QExp offset, QExp base) {
  PochArg a;
  a.scalar = CycloRat(scalar);
  for (char p : params) a.mono += mono_var(*param_index(p));
  a.offset = offset;
  a.base = base;
  return a;
}

/// sum_n (-1)^n q^{n^2-n} z^{-n}, the kernel most of the scripts share.
CtFactor kernel2() { return CtFactor::theta(2, CycloRat(1), -1, 0); }

CtScript script(const std::string& name, std::vector<CtFactor> fs, const std::string& target) {
  CtScript s;
  s.name = name;
  s.factors = std::move(fs);
  s.target = parse_side(target);
  return s;
}

CtScript spec(CtScript s, const std::string& name, std::vector<std::tuple<char, int64_t, QExp>> subs) {
  for (auto [p, c, e] : subs) s = specialize(s, p, CycloRat(c), e);
  s.name = name;
  return s;
}

}  // namespace

CtScript rank2_index12() {
  return script("index (1,2): (uz;q)/(vz;q^2)",
                {CtFactor::euler(arg(1, "u", 0, 1), 1), CtFactor::inv_euler(arg(1, "v", 0, 2), 1), kernel2()},
                "sum[i,j] (-1)^j*u^i*v^j*q^(3/2*i^2+j^2+2*i*j-3/2*i-j)/((q;q)_i(q^2;q^2)_j)");
}

CtScript rank2_index24() {
  return script("index (2,4): (vz;q^4)/(uz;q^2)",
                {CtFactor::inv_euler(arg(1, "u", 0, 2), 1), CtFactor::euler(arg(1, "v", 0, 4), 1), kernel2()},
                "sum[i,j] (-1)^i*u^i*v^j*q^(i^2+3*j^2+2*i*j-i-3*j)/((q^2;q^2)_i(q^4;q^4)_j)");
}

CtScript rank2_index14() {
  return script("index (1,4): (uz;q)/(vz^2;q^4)",
                {CtFactor::euler(arg(1, "u", 0, 1), 1), CtFactor::inv_euler(arg(1, "v", 0, 4), 2), kernel2()},
                "sum[i,j] u^i*v^j*q^(3/2*i^2+4*j^2+4*i*j-3/2*i-2*j)/((q;q)_i(q^4;q^4)_j)");
}

CtScript rank2_index88() {
  return script("index (8,8): 1/(uz,vz;q^8)",
                {CtFactor::inv_euler(arg(1, "u", 0, 8), 1), CtFactor::inv_euler(arg(1, "v", 0, 8), 1),
                 CtFactor::theta(2, CycloRat(-1), -1, 0)},
                "sum[i,j] u^i*v^j*q^(i^2+j^2+2*i*j-i-j)/((q^8;q^8)_i(q^8;q^8)_j)");
}

CtScript rank3_index113() {
  return script("index (1,1,3): (uz,vz;q)/(wz^3;q^3)",
                {CtFactor::euler(arg(1, "u", 0, 1), 1), CtFactor::euler(arg(1, "v", 0, 1), 1),
                 CtFactor::inv_euler(arg(1, "w", 0, 3), 3), CtFactor::theta(1, CycloRat(1), -1, 0)},
                "sum[i,j,k] (-1)^k*u^i*v^j*w^k*q^(i^2+j^2+9/2*k^2+i*j+3*i*k+3*j*k-i-j-3/2*k)"
                "/((q;q)_i(q;q)_j(q^3;q^3)_k)");
}

CtScript rank3_index122_e() {
  return script("index (1,2,2): (v^2 z^2;q^4)/((uz;q^2)(w^2 z^2;q^4))",
                {CtFactor::inv_euler(arg(1, "u", 0, 2), 1), CtFactor::euler(arg(1, "v", 0, 4), 2),
                 CtFactor::inv_euler(arg(1, "w", 0, 4), 2), kernel2()},
                "sum[i,j,k] (-1)^(i+j)*u^i*v^j*w^k*q^(i^2+6*j^2+4*k^2+4*i*j+4*i*k+8*j*k-i-4*j-2*k)"
                "/((q^2;q^2)_i(q^4;q^4)_j(q^4;q^4)_k)");
}

CtScript rank3_index122_f() {
  return script("index (1,2,2): (vz;q^2)/((uz;q)(w/z;q^2))",
                {CtFactor::inv_euler(arg(1, "u", 0, 1), 1), CtFactor::euler(arg(1, "v", 0, 2), 1),
                 CtFactor::inv_euler(arg(1, "w", 0, 2), -1), kernel2()},
                "sum[i,j,k] (-1)^(i+k)*u^i*v^j*w^k*q^(i^2+2*j^2+k^2+2*i*j-2*i*k-2*j*k-i-2*j+k)"
                "/((q;q)_i(q^2;q^2)_j(q^2;q^2)_k)");
}

CtScript rank3_index124() {
  return script("index (1,2,4): (wz^2;q^4)/((uz;q)(vz;q^2))",
                {CtFactor::inv_euler(arg(1, "u", 0, 1), 1), CtFactor::inv_euler(arg(1, "v", 0, 2), 1),
                 CtFactor::euler(arg(1, "w", 0, 4), 2), kernel2()},
                "sum[i,j,k] (-1)^(i+j+k)*u^i*v^j*w^k*q^(i^2+j^2+6*k^2+2*i*j+4*i*k+4*j*k-i-j-4*k)"
                "/((q;q)_i(q^2;q^2)_j(q^4;q^4)_k)");
}

CtScript rank4_index1112() {
  return script("index (1,1,1,2): (tz^2;q^4)/(uz,vz,wz;q^2)",
                {CtFactor::inv_euler(arg(1, "u", 0, 2), 1), CtFactor::inv_euler(arg(1, "v", 0, 2), 1),
                 CtFactor::inv_euler(arg(1, "w", 0, 2), 1), CtFactor::euler(arg(1, "t", 0, 4), 2), kernel2()},
                "sum[i,j,k,l] (-1)^(i+j+k+l)*u^i*v^j*w^k*t^l*"
                "q^(i^2+j^2+k^2+6*l^2+2*i*j+2*i*k+2*j*k+4*i*l+4*j*l+4*k*l-i-j-k-4*l)"
                "/((q^2;q^2)_i(q^2;q^2)_j(q^2;q^2)_k(q^4;q^4)_l)");
}

CtScript alpha_family_raw(QExp alpha) {
  auto [s, rhs] = thm31_spec(alpha);
  CtScript c;
  c.name = "alpha family, alpha = " + exp_str(alpha) + ", unshifted";
  c.factors = {CtFactor::euler(arg(-1, "", QExp(3, 2), 1), 1), CtFactor::euler(arg(-1, "", QExp(1, 2), 1), -1),
               CtFactor::theta(alpha - QExp(1), CycloRat(-1), -1, QExp(-1, 2))};
  c.target = {SideTerm{ProductExpr{}, s}};
  return c;
}

CtScript alpha_family(QExp alpha) {
  CtScript c = alpha_family_raw(alpha);
  c.name = "alpha family, alpha = " + exp_str(alpha);
  c.factors = {CtFactor::euler(arg(-1, "", 1, 1), 1), CtFactor::euler(arg(-1, "", 1, 1), -1),
               CtFactor::theta(alpha - QExp(1), CycloRat(-1), -1, 0)};
  return c;
}

std::vector<CtScript> general_ct_representations() {
  return {rank2_index12(),    rank2_index24(),    rank2_index14(),    rank2_index88(),
          rank3_index113(),   rank3_index122_e(), rank3_index122_f(), rank3_index124()};
}

std::vector<CtScript> replay_scripts() {
  std::vector<CtScript> v;
  v.push_back(alpha_family(2));
  v.push_back(alpha_family(3));
  v.push_back(alpha_family_raw(3));
  v.push_back(alpha_family(QExp(3, 2)));
  // Index (8,8): (u,v) = (q^5,q) and (q^3,q^7), then the single sum it reduces to.
  v.push_back(spec(rank2_index88(), "index (8,8) at (q^5,q)", {{'u', 1, 5}, {'v', 1, 1}}));
  v.push_back(spec(rank2_index88(), "index (8,8) at (q^3,q^7)", {{'u', 1, 3}, {'v', 1, 7}}));
  v.push_back(script("1/(zq;q^4) against the kernel", {CtFactor::inv_euler(arg(1, "", 1, 4), 1),
                                                       CtFactor::theta(2, CycloRat(-1), -1, 0)},
                     "sum[n] q^(n^2)/(q^4;q^4)_n"));
  // Index (1,2) at (q,q), (q^2,q^3), (q^3,q^3), (q^4,q^5).
  v.push_back(spec(rank2_index12(), "index (1,2) at (q,q)", {{'u', 1, 1}, {'v', 1, 1}}));
  v.push_back(spec(rank2_index12(), "index (1,2) at (q^2,q^3)", {{'u', 1, 2}, {'v', 1, 3}}));
  v.push_back(spec(rank2_index12(), "index (1,2) at (q^3,q^3)", {{'u', 1, 3}, {'v', 1, 3}}));
  v.push_back(spec(rank2_index12(), "index (1,2) at (q^4,q^5)", {{'u', 1, 4}, {'v', 1, 5}}));
  v.push_back(script("(zq^2;q^2) against the kernel", {CtFactor::euler(arg(1, "", 2, 2), 1), kernel2()},
                     "sum[n] q^(2*n^2)/(q^2;q^2)_n"));
  // Index (2,4) at (q^3,q^5), (q,q^3), (q,q).
  v.push_back(spec(rank2_index24(), "index (2,4) at (q^3,q^5)", {{'u', 1, 3}, {'v', 1, 5}}));
  v.push_back(spec(rank2_index24(), "index (2,4) at (q,q^3)", {{'u', 1, 1}, {'v', 1, 3}}));
  v.push_back(spec(rank2_index24(), "index (2,4) at (q,q)", {{'u', 1, 1}, {'v', 1, 1}}));
  v.push_back(spec(rank2_index14(), "index (1,4) at (q,q^4)", {{'u', 1, 1}, {'v', 1, 4}}));
  // Index (1,1,3) at (1,q,1): the 1/(z^3;q^3) window closes only through the z-balance.
  v.push_back(spec(rank3_index113(), "index (1,1,3) at (1,q,1)", {{'u', 1, 0}, {'v', 1, 1}, {'w', 1, 0}}));
  // Index (1,2,2), first family at (-1, (z4 q)^2, q^2), (-aq, b q^4, b q^4), (a q^-1, a^2 q^-2, a q^-3).
  v.push_back(spec(rank3_index122_e(), "index (1,2,2) E at (-1,z4 q,q)", {{'u', -1, 0}, {'v', -1, 2}, {'w', 1, 2}}));
  {
    CtScript e = rank3_index122_e();
    e = specialize(e, 'u', CycloRat(-1), 1);  // u = -a q, a kept as the letter u
    e = specialize(e, 'v', CycloRat(1), 4);
    e = specialize(e, 'w', CycloRat(1), 4);
    e.name = "index (1,2,2) E at (-uq, q^2, q^2)";
    v.push_back(e);
  }
  // Index (1,2,2), second family at (-q,q^3,-1), (q,q^3,-1), (q,q^3,-q), (aq,aq,1).
  v.push_back(spec(rank3_index122_f(), "index (1,2,2) F at (-q,q^3,-1)", {{'u', -1, 1}, {'v', 1, 3}, {'w', -1, 0}}));
  v.push_back(spec(rank3_index122_f(), "index (1,2,2) F at (q,q^3,-1)", {{'u', 1, 1}, {'v', 1, 3}, {'w', -1, 0}}));
  v.push_back(spec(rank3_index122_f(), "index (1,2,2) F at (q,q^3,-q)", {{'u', 1, 1}, {'v', 1, 3}, {'w', -1, 1}}));
  // Index (1,2,4) at (-q,-q,q^4), (-q,-q^2,q^4), (-1,q,q^2), (-q^2,q^3,q^6).
  v.push_back(spec(rank3_index124(), "index (1,2,4) at (-q,-q,q^4)", {{'u', -1, 1}, {'v', -1, 1}, {'w', 1, 4}}));
  v.push_back(spec(rank3_index124(), "index (1,2,4) at (-q,-q^2,q^4)", {{'u', -1, 1}, {'v', -1, 2}, {'w', 1, 4}}));
  v.push_back(spec(rank3_index124(), "index (1,2,4) at (-1,q,q^2)", {{'u', -1, 0}, {'v', 1, 1}, {'w', 1, 2}}));
  v.push_back(spec(rank3_index124(), "index (1,2,4) at (-q^2,q^3,q^6)", {{'u', -1, 2}, {'v', 1, 3}, {'w', 1, 6}}));
  // Index (1,1,1,2) at (q,-q,-q^2,(z4 q^3)^2) and (-q,-q^2,-q^2,q^4).
  v.push_back(spec(rank4_index1112(), "index (1,1,1,2) at (q,-q,-q^2,z4 q^3)",
                   {{'u', 1, 1}, {'v', -1, 1}, {'w', -1, 2}, {'t', -1, 6}}));
  v.push_back(spec(rank4_index1112(), "index (1,1,1,2) at (-q,-q^2,-q^2,q^2)",
                   {{'u', -1, 1}, {'v', -1, 2}, {'w', -1, 2}, {'t', 1, 4}}));
  return v;
}

}  // namespace qrr
