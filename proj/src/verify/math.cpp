#include "reflectbench/verify/math.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <regex>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "reflectbench/embedded_resources.hpp"

namespace reflectbench {

namespace mp = boost::multiprecision;
using Rational = mp::cpp_rational;
using BigInt = mp::cpp_int;

// ---------------------------------------------------------------------------
// Normalization

LatexNormalizeOptions LatexNormalizeOptions::defaults() {
  LatexNormalizeOptions options;
  for (const auto& [name, body] : embedded::kResources) {
    if (name != "unit_words.txt") continue;
    std::istringstream in{std::string(body)};
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      options.unit_words.push_back(line);
    }
  }
  // Longest first so "inches" wins over "inch".
  std::sort(options.unit_words.begin(), options.unit_words.end(),
            [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  return options;
}

namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  if (from.empty()) return;
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Removes a control word such as \left when it is not the prefix of a longer
// command (\leftarrow stays).
void remove_command(std::string& s, std::string_view cmd) {
  size_t pos = 0;
  while ((pos = s.find(cmd, pos)) != std::string::npos) {
    const size_t end = pos + cmd.size();
    if (end < s.size() && is_alpha(s[end])) {
      pos = end;
      continue;
    }
    size_t erase_end = end;
    // \left. and \right. are invisible delimiters.
    if (erase_end < s.size() && s[erase_end] == '.') ++erase_end;
    s.erase(pos, erase_end - pos);
  }
}

// Replaces \cmd{content} by content, respecting nested braces.
void unwrap_command(std::string& s, std::string_view cmd) {
  const std::string open = std::string(cmd) + "{";
  size_t pos = 0;
  while ((pos = s.find(open, pos)) != std::string::npos) {
    size_t i = pos + open.size();
    int depth = 1;
    while (i < s.size() && depth > 0) {
      if (s[i] == '{') ++depth;
      if (s[i] == '}') --depth;
      ++i;
    }
    if (depth != 0) return;
    const std::string content = s.substr(pos + open.size(), i - 1 - (pos + open.size()));
    s.replace(pos, i - pos, content);
  }
}

std::string collapse_whitespace(const std::string& s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(s[i]))) {
      out += s[i];
      continue;
    }
    size_t j = i;
    while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    // Keep one space between two letters so "\pi r" does not become "\pir".
    if (!out.empty() && j < s.size() && is_alpha(out.back()) && is_alpha(s[j])) out += ' ';
    i = j - 1;
  }
  return out;
}

void drop_trailing_periods(std::string& s) {
  while (!s.empty() && (s.back() == '.' || s.back() == ' ')) s.pop_back();
}

void drop_unit_words(std::string& s, const std::vector<std::string>& units) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& unit : units) {
      if (s.size() <= unit.size()) continue;
      if (s.compare(s.size() - unit.size(), unit.size(), unit) != 0) continue;
      const char before = s[s.size() - unit.size() - 1];
      if (is_alpha(before) || before == '\\') continue;
      s.erase(s.size() - unit.size());
      while (!s.empty() && s.back() == ' ') s.pop_back();
      changed = true;
      break;
    }
  }
}

}  // namespace

std::string normalize_latex(std::string_view expr, const LatexNormalizeOptions& options) {
  std::string s(expr);
  replace_all(s, "\\(", "");
  replace_all(s, "\\)", "");
  replace_all(s, "\\[", "");
  replace_all(s, "\\]", "");
  replace_all(s, "$", "");
  remove_command(s, "\\left");
  remove_command(s, "\\right");
  replace_all(s, "\\dfrac", "\\frac");
  replace_all(s, "\\tfrac", "\\frac");
  for (std::string_view wrapper : {"\\text", "\\textbf", "\\textrm", "\\mbox", "\\boxed"}) {
    unwrap_command(s, wrapper);
  }
  replace_all(s, "\\!", "");
  replace_all(s, "\\,", "");
  s = collapse_whitespace(s);
  drop_trailing_periods(s);
  replace_all(s, "^{\\circ}", "");
  replace_all(s, "^\\circ", "");
  replace_all(s, "\\circ", "");
  replace_all(s, "\xC2\xB0", "");  // U+00B0 DEGREE SIGN
  drop_unit_words(s, options.unit_words);
  drop_trailing_periods(s);
  static const std::regex single_group(R"(([\^_])\{([^{}\\])\})");
  s = std::regex_replace(s, single_group, "$1$2");
  return s;
}

// ---------------------------------------------------------------------------
// Expression trees

struct MathExpr::Node {
  Kind kind;
  Rational value;    // kNumber
  std::string name;  // kVariable
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;  // kRoot: rhs is the index
};

namespace {

using NodePtr = std::shared_ptr<const MathExpr::Node>;

NodePtr make_leaf_number(Rational v) {
  auto n = std::make_shared<MathExpr::Node>();
  n->kind = MathExpr::Kind::kNumber;
  n->value = std::move(v);
  return n;
}

NodePtr make_node(MathExpr::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<MathExpr::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_variable(std::string name) {
  auto n = std::make_shared<MathExpr::Node>();
  n->kind = MathExpr::Kind::kVariable;
  n->name = std::move(name);
  return n;
}

const std::set<std::string>& greek_letters() {
  static const std::set<std::string> names = {
      "alpha", "beta",  "gamma", "delta", "epsilon", "varepsilon", "zeta", "eta",
      "theta", "vartheta", "iota", "kappa", "lambda", "mu", "nu", "xi", "rho",
      "sigma", "tau", "upsilon", "phi", "varphi", "chi", "psi", "omega",
      "Gamma", "Delta", "Theta", "Lambda", "Xi", "Sigma", "Phi", "Psi", "Omega"};
  return names;
}

struct ParseFailure {};

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse_all() {
    NodePtr e = expression();
    skip_space();
    if (pos_ != s_.size()) throw ParseFailure{};
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= s_.size();
  }

  char peek() {
    skip_space();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  // Command name at the cursor without consuming it ("" if none).
  std::string peek_command() {
    skip_space();
    if (pos_ >= s_.size() || s_[pos_] != '\\') return "";
    size_t i = pos_ + 1;
    while (i < s_.size() && is_alpha(s_[i])) ++i;
    return std::string(s_.substr(pos_ + 1, i - pos_ - 1));
  }

  void consume_command(const std::string& name) { pos_ += 1 + name.size(); }

  void expect(char c) {
    if (peek() != c) throw ParseFailure{};
    ++pos_;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        lhs = make_node(MathExpr::Kind::kAdd, lhs, term());
      } else if (c == '-') {
        ++pos_;
        lhs = make_node(MathExpr::Kind::kSub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  bool starts_primary() {
    const char c = peek();
    if (c == '\0') return false;
    if (is_digit(c) || is_alpha(c) || c == '.' || c == '(' || c == '{' || c == '[') return true;
    if (c == '\\') {
      const std::string cmd = peek_command();
      return cmd == "frac" || cmd == "sqrt" || cmd == "pi" || greek_letters().count(cmd) != 0;
    }
    return false;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        lhs = make_node(MathExpr::Kind::kMul, lhs, unary());
      } else if (c == '/') {
        ++pos_;
        lhs = make_node(MathExpr::Kind::kDiv, lhs, unary());
      } else if (c == '\\' && (peek_command() == "cdot" || peek_command() == "times")) {
        consume_command(peek_command());
        lhs = make_node(MathExpr::Kind::kMul, lhs, unary());
      } else if (c == '\\' && peek_command() == "div") {
        consume_command("div");
        lhs = make_node(MathExpr::Kind::kDiv, lhs, unary());
      } else if (starts_primary()) {
        lhs = make_node(MathExpr::Kind::kMul, lhs, power());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return make_node(MathExpr::Kind::kNeg, unary());
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    // Chained exponents group to the right: 2^3^2 = 2^(3^2).
    std::vector<NodePtr> exponents;
    while (peek() == '^') {
      ++pos_;
      exponents.push_back(script_argument());
    }
    if (exponents.empty()) return base;
    NodePtr e = exponents.back();
    for (size_t i = exponents.size() - 1; i-- > 0;) {
      e = make_node(MathExpr::Kind::kPow, exponents[i], e);
    }
    return make_node(MathExpr::Kind::kPow, base, e);
  }

  // The argument of ^, \frac or \sqrt: a braced group or a single token.
  NodePtr script_argument() {
    const char c = peek();
    if (c == '{') {
      ++pos_;
      NodePtr e = expression();
      expect('}');
      return e;
    }
    if (is_digit(c)) {
      ++pos_;
      return make_leaf_number(Rational(c - '0'));
    }
    if (is_alpha(c)) {
      ++pos_;
      return make_variable(std::string(1, c));
    }
    if (c == '\\') {
      const std::string cmd = peek_command();
      if (cmd == "pi" || greek_letters().count(cmd) != 0) return primary();
    }
    if (c == '-') {
      ++pos_;
      return make_node(MathExpr::Kind::kNeg, script_argument());
    }
    throw ParseFailure{};
  }

  NodePtr number() {
    const size_t start = pos_;
    while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    std::string int_part(s_.substr(start, pos_ - start));
    std::string frac_part;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      const size_t fstart = pos_;
      while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
      frac_part = std::string(s_.substr(fstart, pos_ - fstart));
    }
    if (int_part.empty() && frac_part.empty()) throw ParseFailure{};
    if (frac_part.size() > 200 || int_part.size() > 200) throw ParseFailure{};
    // BigInt reads a leading 0 as an octal prefix.
    std::string digits = int_part + frac_part;
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
    BigInt numerator(digits.empty() ? "0" : digits);
    BigInt denominator = mp::pow(BigInt(10), static_cast<unsigned>(frac_part.size()));
    return make_leaf_number(Rational(numerator, denominator));
  }

  NodePtr primary() {
    const char c = peek();
    if (is_digit(c) || c == '.') return number();
    if (is_alpha(c)) {
      ++pos_;
      std::string name(1, c);
      if (peek() == '_') {
        ++pos_;
        name += "_" + subscript();
      }
      return make_variable(name);
    }
    if (c == '(' || c == '[' || c == '{') {
      const char close = c == '(' ? ')' : (c == '[' ? ']' : '}');
      ++pos_;
      NodePtr e = expression();
      expect(close);
      return e;
    }
    if (c == '\\') {
      const std::string cmd = peek_command();
      if (cmd == "frac") {
        consume_command(cmd);
        NodePtr num = script_argument();
        NodePtr den = script_argument();
        return make_node(MathExpr::Kind::kDiv, num, den);
      }
      if (cmd == "sqrt") {
        consume_command(cmd);
        NodePtr index = make_leaf_number(Rational(2));
        if (peek() == '[') {
          ++pos_;
          index = expression();
          expect(']');
        }
        return make_node(MathExpr::Kind::kRoot, script_argument(), index);
      }
      if (cmd == "pi") {
        consume_command(cmd);
        return make_node(MathExpr::Kind::kPi, nullptr);
      }
      if (greek_letters().count(cmd) != 0) {
        consume_command(cmd);
        return make_variable("\\" + cmd);
      }
    }
    throw ParseFailure{};
  }

  std::string subscript() {
    const char c = peek();
    if (c == '{') {
      const size_t start = ++pos_;
      int depth = 1;
      while (pos_ < s_.size() && depth > 0) {
        if (s_[pos_] == '{') ++depth;
        if (s_[pos_] == '}') --depth;
        ++pos_;
      }
      if (depth != 0) throw ParseFailure{};
      return std::string(s_.substr(start, pos_ - 1 - start));
    }
    if (is_digit(c) || is_alpha(c)) {
      ++pos_;
      return std::string(1, c);
    }
    throw ParseFailure{};
  }

  std::string_view s_;
  size_t pos_ = 0;
};

// Exact n-th root of a non-negative integer, if there is one.
std::optional<BigInt> exact_root(const BigInt& value, unsigned n) {
  if (value < 0) return std::nullopt;
  if (value == 0 || value == 1 || n == 1) return value;
  // Float estimate, then correct by searching the neighbourhood.
  const double approx = std::pow(static_cast<double>(value), 1.0 / n);
  if (!std::isfinite(approx) || approx > 1e15) return std::nullopt;
  const auto guess = static_cast<long long>(std::llround(approx));
  for (long long r = std::max(0LL, guess - 2); r <= guess + 2; ++r) {
    if (mp::pow(BigInt(r), n) == value) return BigInt(r);
  }
  return std::nullopt;
}

std::optional<Rational> rational_root(const Rational& v, unsigned n) {
  if (n == 0) return std::nullopt;
  const bool negative = v < 0;
  if (negative && n % 2 == 0) return std::nullopt;
  const BigInt num = mp::abs(mp::numerator(v));
  const BigInt den = mp::denominator(v);
  auto rn = exact_root(num, n);
  auto rd = exact_root(den, n);
  if (!rn || !rd) return std::nullopt;
  Rational r(*rn, *rd);
  return negative ? Rational(-r) : r;
}

std::optional<Rational> rational_pow(const Rational& base, const Rational& exponent) {
  const BigInt p = mp::numerator(exponent);
  const BigInt q = mp::denominator(exponent);
  if (q > 16 || mp::abs(p) > 4096) return std::nullopt;
  std::optional<Rational> rooted = base;
  if (q != 1) rooted = rational_root(base, static_cast<unsigned>(q));
  if (!rooted) return std::nullopt;
  if (*rooted == 0 && p < 0) return std::nullopt;
  // Keep results to a sane size.
  const auto bits = [](const BigInt& x) { return x == 0 ? 0u : mp::msb(mp::abs(x)) + 1; };
  const unsigned e = static_cast<unsigned>(mp::abs(p));
  if (static_cast<unsigned long long>(std::max(bits(mp::numerator(*rooted)), bits(mp::denominator(*rooted)))) * e > 100000ULL) {
    return std::nullopt;
  }
  Rational result(mp::pow(mp::numerator(*rooted), e), mp::pow(mp::denominator(*rooted), e));
  if (p < 0) result = Rational(1) / result;
  return result;
}

std::optional<Rational> exact(const MathExpr::Node& n) {
  using K = MathExpr::Kind;
  switch (n.kind) {
    case K::kNumber: return n.value;
    case K::kVariable:
    case K::kPi: return std::nullopt;
    case K::kNeg: {
      auto v = exact(*n.lhs);
      if (!v) return std::nullopt;
      return Rational(-*v);
    }
    default: break;
  }
  auto a = exact(*n.lhs);
  if (!a) return std::nullopt;
  auto b = exact(*n.rhs);
  if (!b) return std::nullopt;
  switch (n.kind) {
    case K::kAdd: return Rational(*a + *b);
    case K::kSub: return Rational(*a - *b);
    case K::kMul: return Rational(*a * *b);
    case K::kDiv:
      if (*b == 0) return std::nullopt;
      return Rational(*a / *b);
    case K::kPow: return rational_pow(*a, *b);
    case K::kRoot: {
      if (mp::denominator(*b) != 1 || *b <= 0 || *b > 64) return std::nullopt;
      return rational_root(*a, static_cast<unsigned>(mp::numerator(*b)));
    }
    default: return std::nullopt;
  }
}

double numeric(const MathExpr::Node& n, const std::map<std::string, double>& vars) {
  using K = MathExpr::Kind;
  switch (n.kind) {
    case K::kNumber: return n.value.convert_to<double>();
    case K::kVariable: return vars.at(n.name);
    case K::kPi: return M_PI;
    case K::kNeg: return -numeric(*n.lhs, vars);
    case K::kAdd: return numeric(*n.lhs, vars) + numeric(*n.rhs, vars);
    case K::kSub: return numeric(*n.lhs, vars) - numeric(*n.rhs, vars);
    case K::kMul: return numeric(*n.lhs, vars) * numeric(*n.rhs, vars);
    case K::kDiv: return numeric(*n.lhs, vars) / numeric(*n.rhs, vars);
    case K::kPow: return std::pow(numeric(*n.lhs, vars), numeric(*n.rhs, vars));
    case K::kRoot: {
      const double radicand = numeric(*n.lhs, vars);
      const double index = numeric(*n.rhs, vars);
      // Odd integer roots of negatives are real.
      if (radicand < 0 && std::fmod(index, 2.0) == 1.0) return -std::pow(-radicand, 1.0 / index);
      return std::pow(radicand, 1.0 / index);
    }
  }
  return std::nan("");
}

void collect_variables(const MathExpr::Node& n, std::set<std::string>& out) {
  if (n.kind == MathExpr::Kind::kVariable) out.insert(n.name);
  if (n.lhs) collect_variables(*n.lhs, out);
  if (n.rhs) collect_variables(*n.rhs, out);
}

bool close_enough(double a, double b, const EquivalenceOptions& o) {
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  const double diff = std::fabs(a - b);
  return diff <= o.relative_tolerance * std::max(std::fabs(a), std::fabs(b)) ||
         diff <= o.absolute_floor;
}

}  // namespace

MathExpr::MathExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

std::optional<MathExpr> MathExpr::parse(std::string_view latex) {
  try {
    Parser parser(latex);
    return MathExpr(parser.parse_all());
  } catch (const ParseFailure&) {
    return std::nullopt;
  }
}

MathExpr::Kind MathExpr::kind() const { return root_->kind; }

std::set<std::string> MathExpr::variables() const {
  std::set<std::string> out;
  collect_variables(*root_, out);
  return out;
}

std::optional<std::string> MathExpr::exact_value() const {
  auto v = exact(*root_);
  if (!v) return std::nullopt;
  return mp::numerator(*v).str() + "/" + mp::denominator(*v).str();
}

double MathExpr::evaluate(const std::vector<std::pair<std::string, double>>& assignment) const {
  std::map<std::string, double> vars(assignment.begin(), assignment.end());
  for (const auto& name : variables()) {
    if (!vars.count(name)) return std::nan("");
  }
  return numeric(*root_, vars);
}

bool symbolic_equivalent(std::string_view a, std::string_view b, const EquivalenceOptions& options) {
  const auto ea = MathExpr::parse(a);
  const auto eb = MathExpr::parse(b);
  if (!ea || !eb) return false;
  if (a == b) return true;

  std::set<std::string> vars = ea->variables();
  const auto vb = eb->variables();
  vars.insert(vb.begin(), vb.end());

  if (vars.empty()) {
    const auto xa = ea->exact_value();
    const auto xb = eb->exact_value();
    if (xa && xb) return *xa == *xb;
    return close_enough(ea->evaluate({}), eb->evaluate({}), options);
  }

  std::mt19937_64 rng(options.seed);
  int agreed = 0;
  for (int attempt = 0; attempt < options.sample_points * 4 && agreed < options.sample_points;
       ++attempt) {
    std::vector<std::pair<std::string, double>> point;
    for (const auto& name : vars) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      point.emplace_back(name, 0.25 + 3.75 * u);
    }
    const double va = ea->evaluate(point);
    const double vb2 = eb->evaluate(point);
    const bool fa = std::isfinite(va);
    const bool fb = std::isfinite(vb2);
    if (!fa && !fb) continue;  // outside both domains
    if (!close_enough(va, vb2, options)) return false;
    ++agreed;
  }
  return agreed >= options.sample_points;
}

VerdictRecord score_math(std::string_view candidate_text, std::string_view gold,
                         const LatexNormalizeOptions& options) {
  const auto answer = extract_tagged(candidate_text, "answer");
  if (!answer) return VerdictRecord::extraction_failed("no <answer> tags");
  const std::string cand = normalize_latex(*answer, options);
  const std::string ref = normalize_latex(gold, options);
  if (cand == ref) {
    return {1.0, true, VerdictMethod::kStringMatch, "normalized match: " + cand};
  }
  if (symbolic_equivalent(cand, ref)) {
    return {1.0, true, VerdictMethod::kSymbolicEquiv, cand + " == " + ref};
  }
  const bool parsed = MathExpr::parse(cand).has_value() && MathExpr::parse(ref).has_value();
  return {0.0, false, parsed ? VerdictMethod::kSymbolicEquiv : VerdictMethod::kStringMatch,
          cand + " != " + ref};
}

}  // namespace reflectbench
