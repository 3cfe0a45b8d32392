#include "qrr/series_text.hpp"

#include <cctype>
#include <sstream>

#include "qrr/errors.hpp"

namespace qrr {

namespace {

class CoefParser {
 public:
  explicit CoefParser(const std::string& s) : s_(s) {}

  Coef parse() {
    Coef v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("coefficient '" + s_ + "': " + msg + " at offset " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  Coef expr() {
    Coef v;
    bool first = true;
    for (;;) {
      bool neg = false;
      if (eat('-')) neg = true;
      else if (!first && !eat('+')) break;
      else if (first) eat('+');
      Coef t = product();
      if (neg) v -= t;
      else v += t;
      first = false;
      skip();
      if (i_ >= s_.size() || (s_[i_] != '+' && s_[i_] != '-')) break;
    }
    return v;
  }
  Coef product() {
    Coef v = power();
    for (;;) {
      if (eat('*')) {
        v = v * power();
      } else if (eat('/')) {
        Coef d = power();
        v = v * coef_inv(d);
      } else {
        break;
      }
    }
    return v;
  }
  Coef power() {
    Coef b = atom();
    if (eat('^')) {
      skip();
      bool neg = eat('-');
      if (eat('(')) {
        neg = eat('-') != neg;
        int64_t e = integer();
        if (!eat(')')) fail("expected ')'");
        return b.pow(neg ? -e : e);
      }
      int64_t e = integer();
      return b.pow(neg ? -e : e);
    }
    return b;
  }
  int64_t integer() {
    skip();
    size_t st = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (st == i_) fail("expected an integer");
    return static_cast<int64_t>(std::stoll(s_.substr(st, i_ - st)));
  }
  Coef atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      Coef v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (c == '-') {
      ++i_;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return Coef(Rat::parse(s_.substr(st, i_ - st)));
    }
    if (c == 'z') {
      ++i_;
      size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (st == i_) fail("root of unity needs a conductor, e.g. z4");
      int64_t m = static_cast<int64_t>(std::stoll(s_.substr(st, i_ - st)));
      if (m < 1 || m > static_cast<int64_t>(kMaxConductor)) fail("conductor out of range");
      return Coef(CycloRat::root_of_unity(static_cast<uint32_t>(m)));
    }
    if (auto p = param_index(c)) {
      ++i_;
      return Coef::monomial(mono_var(*p, 1));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  size_t i_ = 0;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Coef parse_coef(const std::string& s) { return CoefParser(s).parse(); }

std::string to_text(const QSeries& f) {
  std::ostringstream os;
  os << "qseries D=" << f.denom() << " N=" << f.trunc().str();
  if (f.pcap() < kNoParamCap) os << " pcap=" << f.pcap();
  os << "\n";
  for (const auto& [k, c] : f.terms()) {
    QExp e(k, f.denom());
    os << e.numerator() << "/" << e.denominator() << " : " << c.str() << "\n";
  }
  return os.str();
}

QSeries from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int64_t D = 1;
  Trunc N;
  int pcap = kNoParamCap;
  bool header = false;
  std::vector<QSeries::Term> terms;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      std::istringstream hs(line);
      std::string tag, kv;
      hs >> tag;
      if (tag != "qseries") throw SchemaError(lineno, "header", "expected 'qseries' header");
      while (hs >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw SchemaError(lineno, kv, "expected key=value");
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "D") D = static_cast<int64_t>(std::stoll(val));
        else if (key == "N") N = val == "inf" ? Trunc::infinite() : Trunc(parse_exp(val));
        else if (key == "pcap") pcap = std::stoi(val);
        else throw SchemaError(lineno, key, "unknown header field");
      }
      if (D <= 0) throw SchemaError(lineno, "D", "denominator must be positive");
      header = true;
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) throw SchemaError(lineno, "term", "expected '<exponent> : <coef>'");
    QExp e = parse_exp(trim(line.substr(0, colon)));
    QExp k = e * QExp(D);
    if (k.denominator() != 1) throw SchemaError(lineno, "exponent", "exponent not a multiple of 1/D");
    terms.push_back({k.numerator(), parse_coef(trim(line.substr(colon + 1)))});
  }
  if (!header) throw SchemaError(lineno, "header", "missing 'qseries' header");
  return QSeries::from_terms(D, std::move(terms), N, pcap);
}

}  // namespace qrr
