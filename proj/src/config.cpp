#include "collar/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "collar/error.hpp"
#include "collar/expression.hpp"
#include "collar/verification.hpp"

namespace collar {

namespace {

// ---- raw document -------------------------------------------------------

struct Value {
  std::variant<double, bool, std::string, std::vector<Value>> data;
  std::string token;  // number text, kept for exact integer parsing
  int line = 0;
};

struct Entry {
  std::string key;
  Value value;
  int line = 0;
};

struct Table {
  std::string header;  // empty for the root table
  bool array = false;
  int line = 0;
  std::vector<Entry> entries;
};

[[noreturn]] void syntax(int line, const std::string& what) {
  throw Error(ErrorCode::ConfigSyntax, "line " + std::to_string(line) + ": " + what);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<Table> document() {
    std::vector<Table> tables(1);
    while (true) {
      skip_blank_lines();
      if (done()) break;
      if (peek() == '[') {
        tables.push_back(header());
      } else {
        tables.back().entries.push_back(entry());
      }
      end_of_line();
    }
    return tables;
  }

 private:
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  void skip_spaces() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
    if (peek() == '#') {
      while (!done() && peek() != '\n') ++pos_;
    }
  }

  void skip_blank_lines() {
    while (true) {
      skip_spaces();
      if (peek() != '\n') return;
      ++pos_;
      ++line_;
    }
  }

  void end_of_line() {
    skip_spaces();
    if (done()) return;
    if (peek() != '\n') syntax(line_, std::string("unexpected '") + peek() + "' after value");
    ++pos_;
    ++line_;
  }

  static bool bare(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string bare_key() {
    const std::size_t start = pos_;
    while (!done() && bare(peek())) ++pos_;
    if (pos_ == start) syntax(line_, "expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }

  Table header() {
    Table t;
    t.line = line_;
    ++pos_;
    if (peek() == '[') {
      t.array = true;
      ++pos_;
    }
    skip_spaces();
    t.header = bare_key();
    while (peek() == '.') {
      ++pos_;
      t.header += "." + bare_key();
    }
    skip_spaces();
    const int closing = t.array ? 2 : 1;
    for (int i = 0; i < closing; ++i) {
      if (peek() != ']') syntax(line_, "unterminated table header");
      ++pos_;
    }
    return t;
  }

  Entry entry() {
    Entry e;
    e.line = line_;
    e.key = bare_key();
    skip_spaces();
    if (peek() != '=') syntax(line_, "expected '=' after key '" + e.key + "'");
    ++pos_;
    skip_spaces();
    e.value = value();
    return e;
  }

  Value value() {
    Value v;
    v.line = line_;
    const char c = peek();
    if (c == '"') {
      v.data = string();
    } else if (c == '[') {
      v.data = array();
    } else if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      v.data = true;
    } else if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      v.data = false;
    } else {
      v.data = number(v.token);
    }
    return v;
  }

  std::string string() {
    ++pos_;
    std::string out;
    while (true) {
      if (done() || peek() == '\n') syntax(line_, "unterminated string");
      const char c = text_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (done()) syntax(line_, "unterminated string");
      const char e = text_[pos_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: syntax(line_, std::string("unknown escape \\") + e);
      }
    }
  }

  std::vector<Value> array() {
    const int open = line_;
    ++pos_;
    std::vector<Value> items;
    while (true) {
      skip_blank_lines();
      if (done()) syntax(open, "unterminated array");
      if (peek() == ']') {
        ++pos_;
        return items;
      }
      items.push_back(value());
      skip_blank_lines();
      if (done()) syntax(open, "unterminated array");
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != ']') {
        syntax(line_, "expected ',' or ']' in array");
      }
    }
  }

  double number(std::string& token) {
    const std::size_t start = pos_;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                       peek() == '-' || peek() == '.')) {
      ++pos_;
    }
    token = std::string(text_.substr(start, pos_ - start));
    if (token.empty()) syntax(line_, "expected a value");
    std::string_view body = token;
    double sign = 1.0;
    if (body.front() == '+' || body.front() == '-') {
      sign = body.front() == '-' ? -1.0 : 1.0;
      body.remove_prefix(1);
    }
    if (body == "inf") return sign * std::numeric_limits<double>::infinity();
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), x);
    if (ec != std::errc() || ptr != body.data() + body.size() || body.empty() ||
        !(std::isdigit(static_cast<unsigned char>(body.front())) || body.front() == '.')) {
      syntax(line_, "invalid value '" + token + "'");
    }
    return sign * x;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

// ---- typed access ---------------------------------------------------------

[[noreturn]] void semantic(const std::string& path, int line, const std::string& what) {
  throw Error(ErrorCode::ConfigSemantic,
              path + " (line " + std::to_string(line) + "): " + what);
}

struct Scope {
  std::string path;
  const Table* table;
  std::set<std::string> seen;

  const Entry* find(const std::string& key) {
    const Entry* hit = nullptr;
    for (const Entry& e : table->entries) {
      if (e.key != key) continue;
      if (hit) semantic(at(key), e.line, "duplicate key");
      hit = &e;
    }
    if (hit) seen.insert(key);
    return hit;
  }

  std::string at(const std::string& key) const { return path + "." + key; }

  /// Line of the key, or of the table header when the key is absent.
  int line_of(const std::string& key) const {
    for (const Entry& e : table->entries) {
      if (e.key == key) return e.line;
    }
    return table->line;
  }

  void reject_unknown(const std::set<std::string>& allowed) const {
    for (const Entry& e : table->entries) {
      if (!allowed.count(e.key)) {
        std::string list;
        for (const auto& k : allowed) list += (list.empty() ? "" : ", ") + k;
        semantic(at(e.key), e.line, "unknown or inapplicable key (allowed: " + list + ")");
      }
    }
  }

  double number(const Entry& e) const {
    if (const double* x = std::get_if<double>(&e.value.data)) return *x;
    semantic(at(e.key), e.line, "expected a number");
  }

  std::optional<double> number(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    return number(*e);
  }

  std::optional<long long> integer(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    const double x = number(*e);
    if (x != std::floor(x) || std::abs(x) > 1e15) semantic(at(key), e->line, "expected an integer");
    return static_cast<long long>(x);
  }

  std::optional<std::uint64_t> unsigned_integer(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    number(*e);
    std::uint64_t out = 0;
    const std::string& tok = e->value.token;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      semantic(at(key), e->line, "expected a non-negative integer");
    }
    return out;
  }

  std::optional<std::string> string(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    if (const auto* s = std::get_if<std::string>(&e->value.data)) return *s;
    semantic(at(key), e->line, "expected a string");
  }

  std::optional<bool> boolean(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    if (const bool* b = std::get_if<bool>(&e->value.data)) return *b;
    semantic(at(key), e->line, "expected true or false");
  }

  const std::vector<Value>* items(const Entry& e) const {
    if (const auto* a = std::get_if<std::vector<Value>>(&e.value.data)) return a;
    semantic(at(e.key), e.line, "expected an array");
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    for (const Value& v : *items(*e)) {
      const double* x = std::get_if<double>(&v.data);
      if (!x) semantic(at(key), v.line, "expected an array of numbers");
      out.push_back(*x);
    }
    if (out.empty()) semantic(at(key), e->line, "array must not be empty");
    return out;
  }

  std::optional<std::vector<std::string>> strings(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    std::vector<std::string> out;
    for (const Value& v : *items(*e)) {
      const auto* s = std::get_if<std::string>(&v.data);
      if (!s) semantic(at(key), v.line, "expected an array of strings");
      out.push_back(*s);
    }
    if (out.empty()) semantic(at(key), e->line, "array must not be empty");
    return out;
  }

  std::optional<std::vector<std::array<double, 2>>> pairs(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    std::vector<std::array<double, 2>> out;
    for (const Value& v : *items(*e)) {
      const auto* pair = std::get_if<std::vector<Value>>(&v.data);
      if (!pair || pair->size() != 2) semantic(at(key), v.line, "expected [r, R] pairs");
      const double* a = std::get_if<double>(&(*pair)[0].data);
      const double* b = std::get_if<double>(&(*pair)[1].data);
      if (!a || !b) semantic(at(key), v.line, "expected [r, R] pairs");
      out.push_back({*a, *b});
    }
    if (out.empty()) semantic(at(key), e->line, "array must not be empty");
    return out;
  }
};

const std::vector<std::string> kKinds = {"rigidity", "model", "product", "custom", "perturbed"};

std::set<std::string> manifold_keys(const std::string& kind) {
  std::set<std::string> keys{"kind", "n", "L"};
  if (kind == "rigidity" || kind == "perturbed" || kind == "custom") {
    keys.insert({"N", "kappa", "lambda"});
  }
  if (kind == "model") keys.insert({"kappa", "lambda"});
  if (kind != "custom") keys.insert("f0");
  if (kind == "product") keys.insert("N");
  if (kind == "perturbed") keys.insert({"seed", "amplitude"});
  if (kind == "custom") {
    keys.insert({"w", "f", "w_samples", "f_samples", "fiber_kappa", "fiber_volume",
                 "second_boundary"});
  }
  return keys;
}

ManifoldSpec read_manifold(Scope& s, std::string name) {
  ManifoldSpec m;
  m.name = std::move(name);
  m.kind = s.string("kind").value_or("rigidity");
  if (std::find(kKinds.begin(), kKinds.end(), m.kind) == kKinds.end()) {
    semantic(s.at("kind"), s.find("kind")->line,
             "unknown kind '" + m.kind + "' (known: rigidity, model, product, custom, perturbed)");
  }
  s.reject_unknown(manifold_keys(m.kind));
  if (auto n = s.integer("n")) m.n = static_cast<int>(*n);
  m.N = s.number("N");
  if (auto x = s.number("kappa")) m.kappa = *x;
  if (auto x = s.number("lambda")) m.lambda = *x;
  if (auto x = s.number("L")) m.L = *x;
  if (auto x = s.number("f0")) m.f0 = *x;
  if (auto x = s.string("w")) m.w = *x;
  if (auto x = s.string("f")) m.f = *x;
  if (auto x = s.numbers("w_samples")) m.w_samples = *x;
  if (auto x = s.numbers("f_samples")) m.f_samples = *x;
  m.fiber_kappa = s.number("fiber_kappa");
  m.fiber_volume = s.number("fiber_volume");
  if (auto x = s.boolean("second_boundary")) m.second_boundary = *x;
  if (auto x = s.unsigned_integer("seed")) m.seed = *x;
  if (auto x = s.number("amplitude")) m.amplitude = *x;

  const int line = s.table->line;
  if (m.n < 2) semantic(s.at("n"), s.line_of("n"), "n must be >= 2");
  const double N = m.effective_N();
  if (!(N >= m.n)) semantic(s.at("N"), s.line_of("N"), "N must satisfy N >= n");
  if (m.kind == "model" && m.N) semantic(s.at("N"), s.line_of("N"), "a model has N = n");
  if (!(m.L > 0.0) || !std::isfinite(m.L)) semantic(s.at("L"), s.line_of("L"), "L must be positive");
  if (m.kind == "rigidity" || m.kind == "model" || m.kind == "perturbed") {
    const double cbar = truncation_radius(m.kappa, m.lambda);
    if (m.L >= cbar) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "L must be < C_bar(kappa, lambda) = %.17g", cbar);
      semantic(s.at("L"), s.line_of("L"), buf);
    }
  }
  if (m.kind == "custom") {
    if (m.w.empty() == m.w_samples.empty()) {
      semantic(s.at("w"), s.line_of("w"), "give exactly one of w or w_samples");
    }
    if (!m.f.empty() && !m.f_samples.empty()) {
      semantic(s.at("f"), s.line_of("f"), "give at most one of f or f_samples");
    }
  }
  try {
    build_manifold(m);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigSemantic) throw;
    semantic(s.path, line, e.what());
  }
  return m;
}

const std::set<std::string> kCheckKeys = {"name", "manifold", "tolerance", "p", "N", "kappa",
                                          "lambda", "D", "a", "b", "radii", "pairs", "D_grid"};

CheckSpec read_check(Scope& s, const std::vector<ManifoldSpec>& manifolds) {
  s.reject_unknown(kCheckKeys);
  const int line = s.table->line;
  CheckSpec c;
  const auto name = s.string("name");
  if (!name) semantic(s.at("name"), s.line_of("name"), "missing check name");
  c.name = *name;
  const auto& known = known_checks();
  if (std::find(known.begin(), known.end(), c.name) == known.end()) {
    std::string list;
    for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
    semantic(s.at("name"), s.line_of("name"), "unknown check '" + c.name + "' (known: " + list + ")");
  }
  c.manifold = s.string("manifold").value_or("");
  for (const char* key : {"p", "N", "kappa", "lambda", "D", "a", "b"}) {
    if (auto x = s.number(key)) c.values[key] = *x;
  }
  if (auto x = s.numbers("radii")) c.radii = *x;
  if (auto x = s.pairs("pairs")) c.pairs = *x;
  if (auto x = s.numbers("D_grid")) c.D_grid = *x;
  c.tolerance = s.number("tolerance");
  if (c.tolerance && !(*c.tolerance >= 0.0)) {
    semantic(s.at("tolerance"), s.line_of("tolerance"), "tolerance must be >= 0");
  }

  auto need = [&](const char* key) {
    if (!c.values.count(key)) semantic(s.at(key), line, std::string("check needs ") + key);
  };
  auto forbid = [&](bool present, const char* key) {
    if (present) semantic(s.at(key), s.line_of(key), "not used by " + c.name);
  };
  if (c.values.count("p") && !(c.values["p"] > 1.0)) semantic(s.at("p"), s.line_of("p"), "p must be > 1");
  if (is_parameter_check(c.name)) {
    forbid(!c.manifold.empty(), "manifold");
    forbid(!c.radii.empty(), "radii");
    forbid(!c.pairs.empty(), "pairs");
    forbid(c.values.count("a"), "a");
    forbid(c.values.count("b"), "b");
    need("N");
    if (c.name == "kasue_eigen_bounds") {
      need("D");
      forbid(!c.D_grid.empty(), "D_grid");
      const double kappa = c.values.count("kappa") ? c.values["kappa"] : 0.0;
      const double lambda = c.values.count("lambda") ? c.values["lambda"] : 0.0;
      const double cbar = truncation_radius(kappa, lambda);
      if (!(c.values["D"] > 0.0) || c.values["D"] > cbar) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "D must lie in (0, C_bar(kappa, lambda) = %.17g]", cbar);
        semantic(s.at("D"), s.line_of("D"), buf);
      }
    } else {
      need("lambda");
      forbid(c.values.count("kappa"), "kappa");
      forbid(c.values.count("D") && !c.D_grid.empty(), "D");
    }
    return c;
  }
  if (c.manifold.empty()) semantic(s.at("manifold"), s.line_of("manifold"), c.name + " needs a manifold");
  if (!std::any_of(manifolds.begin(), manifolds.end(),
                   [&](const ManifoldSpec& m) { return m.name == c.manifold; })) {
    semantic(s.at("manifold"), s.line_of("manifold"), "undefined manifold '" + c.manifold + "'");
  }
  forbid(c.values.count("D"), "D");
  forbid(!c.D_grid.empty(), "D_grid");
  if (c.name == "domain_volume_estimate") {
    need("a");
    need("b");
  } else {
    forbid(c.values.count("a"), "a");
    forbid(c.values.count("b"), "b");
  }
  if (c.name != "eigenvalue_bound") forbid(c.values.count("p"), "p");
  if (c.name != "bishop_gromov") forbid(!c.pairs.empty(), "pairs");
  if (c.name != "heintze_karcher" && c.name != "volume_growth_equality") {
    forbid(!c.radii.empty(), "radii");
  }
  return c;
}

SweepSpec read_sweep(Scope& s) {
  s.reject_unknown({"p", "N", "kappa", "lambda", "D", "checks", "tolerance"});
  SweepSpec w;
  if (auto x = s.numbers("p")) w.p = *x;
  w.N = s.numbers("N").value_or(std::vector<double>{});
  w.kappa = s.numbers("kappa").value_or(std::vector<double>{0.0});
  w.lambda = s.numbers("lambda").value_or(std::vector<double>{0.0});
  w.D = s.numbers("D").value_or(std::vector<double>{});
  const auto checks = s.strings("checks");
  if (!checks) semantic(s.at("checks"), s.line_of("checks"), "sweep needs a checks list");
  w.checks = *checks;
  w.tolerance = s.number("tolerance");
  for (const auto& name : w.checks) {
    if (!is_parameter_check(name)) {
      semantic(s.at("checks"), s.line_of("checks"),
               "sweeps run kasue_eigen_bounds and spectrum_limit only, not '" + name + "'");
    }
  }
  if (w.N.empty()) semantic(s.at("N"), s.line_of("N"), "sweep needs an N grid");
  if (w.D.empty()) semantic(s.at("D"), s.line_of("D"), "sweep needs a D grid");
  for (double p : w.p) {
    if (!(p > 1.0)) semantic(s.at("p"), s.line_of("p"), "p must be > 1");
  }
  return w;
}

// ---- serialization --------------------------------------------------------

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string list(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + num(xs[i]);
  return out + "]";
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "theta_comparison", "heintze_karcher",       "bishop_gromov",
      "inscribed_radius", "eigenvalue_bound",      "kasue_eigen_bounds",
      "spectrum_limit",   "domain_volume_estimate", "volume_growth_equality",
  };
  return names;
}

bool is_parameter_check(std::string_view name) {
  return name == "kasue_eigen_bounds" || name == "spectrum_limit";
}

const ManifoldSpec* SuiteConfig::find_manifold(std::string_view name) const {
  for (const ManifoldSpec& m : manifolds) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

SuiteConfig parse_config(std::string_view text) {
  const std::vector<Table> tables = Reader(text).document();
  SuiteConfig config;
  if (!tables.front().entries.empty()) {
    semantic(tables.front().entries.front().key, tables.front().entries.front().line,
             "keys must appear inside a [section]");
  }
  std::set<std::string> singletons;
  int check_index = 0;
  for (std::size_t i = 1; i < tables.size(); ++i) {
    const Table& t = tables[i];
    const bool is_manifold = t.header.rfind("manifold.", 0) == 0;
    if (t.array != (t.header == "check")) {
      semantic(t.header, t.line, t.array ? "only [[check]] is an array table"
                                         : "checks are written as [[check]]");
    }
    if (!t.array && !singletons.insert(t.header).second) {
      semantic(t.header, t.line, "duplicate section");
    }
    if (t.header == "suite") {
      Scope s{"suite", &t, {}};
      s.reject_unknown({"grid", "tolerance", "gate_tolerance", "threads"});
      if (auto x = s.integer("grid")) config.suite.grid = static_cast<int>(*x);
      if (auto x = s.number("tolerance")) config.suite.tolerance = *x;
      if (auto x = s.number("gate_tolerance")) config.suite.gate_tolerance = *x;
      if (auto x = s.integer("threads")) config.suite.threads = static_cast<int>(*x);
      if (config.suite.grid < 64) semantic("suite.grid", t.line, "grid must be >= 64");
      if (!(config.suite.tolerance >= 0.0) || !(config.suite.gate_tolerance >= 0.0)) {
        semantic("suite.tolerance", t.line, "tolerances must be >= 0");
      }
      if (config.suite.threads < 0) semantic("suite.threads", t.line, "threads must be >= 0");
    } else if (t.header == "output") {
      Scope s{"output", &t, {}};
      s.reject_unknown({"json", "csv"});
      config.output.json = s.string("json").value_or("");
      config.output.csv = s.string("csv").value_or("");
    } else if (is_manifold) {
      const std::string name = t.header.substr(9);
      if (name.empty() || name.find('.') != std::string::npos) {
        semantic(t.header, t.line, "manifold names are single bare keys");
      }
      Scope s{t.header, &t, {}};
      config.manifolds.push_back(read_manifold(s, name));
    } else if (t.header == "check") {
      Scope s{"check[" + std::to_string(check_index++) + "]", &t, {}};
      config.checks.push_back(read_check(s, config.manifolds));
    } else if (t.header == "sweep") {
      Scope s{"sweep", &t, {}};
      config.sweep = read_sweep(s);
    } else {
      semantic(t.header, t.line,
               "unknown section (known: suite, output, manifold.NAME, [[check]], sweep)");
    }
  }
  return config;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize(const SuiteConfig& config) {
  std::ostringstream out;
  out << "[suite]\n"
      << "grid = " << config.suite.grid << "\n"
      << "tolerance = " << num(config.suite.tolerance) << "\n"
      << "gate_tolerance = " << num(config.suite.gate_tolerance) << "\n"
      << "threads = " << config.suite.threads << "\n";
  if (!config.output.json.empty() || !config.output.csv.empty()) {
    out << "\n[output]\n";
    if (!config.output.json.empty()) out << "json = " << quoted(config.output.json) << "\n";
    if (!config.output.csv.empty()) out << "csv = " << quoted(config.output.csv) << "\n";
  }
  for (const ManifoldSpec& m : config.manifolds) {
    const std::set<std::string> keys = manifold_keys(m.kind);
    out << "\n[manifold." << m.name << "]\n"
        << "kind = " << quoted(m.kind) << "\n"
        << "n = " << m.n << "\n";
    if (m.N) out << "N = " << num(*m.N) << "\n";
    if (keys.count("kappa")) out << "kappa = " << num(m.kappa) << "\n";
    if (keys.count("lambda")) out << "lambda = " << num(m.lambda) << "\n";
    out << "L = " << num(m.L) << "\n";
    if (keys.count("f0")) out << "f0 = " << num(m.f0) << "\n";
    if (!m.w.empty()) out << "w = " << quoted(m.w) << "\n";
    if (!m.f.empty()) out << "f = " << quoted(m.f) << "\n";
    if (!m.w_samples.empty()) out << "w_samples = " << list(m.w_samples) << "\n";
    if (!m.f_samples.empty()) out << "f_samples = " << list(m.f_samples) << "\n";
    if (m.fiber_kappa) out << "fiber_kappa = " << num(*m.fiber_kappa) << "\n";
    if (m.fiber_volume) out << "fiber_volume = " << num(*m.fiber_volume) << "\n";
    if (keys.count("second_boundary")) {
      out << "second_boundary = " << (m.second_boundary ? "true" : "false") << "\n";
    }
    if (keys.count("seed")) {
      out << "seed = " << m.seed << "\n"
          << "amplitude = " << num(m.amplitude) << "\n";
    }
  }
  for (const CheckSpec& c : config.checks) {
    out << "\n[[check]]\n"
        << "name = " << quoted(c.name) << "\n";
    if (!c.manifold.empty()) out << "manifold = " << quoted(c.manifold) << "\n";
    for (const auto& [key, value] : c.values) out << key << " = " << num(value) << "\n";
    if (!c.radii.empty()) out << "radii = " << list(c.radii) << "\n";
    if (!c.pairs.empty()) {
      out << "pairs = [";
      for (std::size_t i = 0; i < c.pairs.size(); ++i) {
        out << (i ? ", " : "") << "[" << num(c.pairs[i][0]) << ", " << num(c.pairs[i][1]) << "]";
      }
      out << "]\n";
    }
    if (!c.D_grid.empty()) out << "D_grid = " << list(c.D_grid) << "\n";
    if (c.tolerance) out << "tolerance = " << num(*c.tolerance) << "\n";
  }
  if (config.sweep) {
    const SweepSpec& w = *config.sweep;
    out << "\n[sweep]\n"
        << "p = " << list(w.p) << "\n"
        << "N = " << list(w.N) << "\n"
        << "kappa = " << list(w.kappa) << "\n"
        << "lambda = " << list(w.lambda) << "\n"
        << "D = " << list(w.D) << "\n"
        << "checks = [";
    for (std::size_t i = 0; i < w.checks.size(); ++i) out << (i ? ", " : "") << quoted(w.checks[i]);
    out << "]\n";
    if (w.tolerance) out << "tolerance = " << num(*w.tolerance) << "\n";
  }
  return out.str();
}

WarpedManifold build_manifold(const ManifoldSpec& m) {
  const std::string path = "manifold." + m.name;
  try {
    const double N = m.effective_N();
    if (m.kind == "rigidity") return make_rigidity_model(m.n, N, m.kappa, m.lambda, m.L, m.f0);
    if (m.kind == "model") return make_rigidity_model(m.n, m.n, m.kappa, m.lambda, m.L, m.f0);
    if (m.kind == "product") return make_product(m.n, m.L, m.f0);
    if (m.kind == "perturbed") {
      PerturbationSpec spec =
          draw_perturbation(ModelParams{m.n, N, m.kappa, m.lambda}, m.L, m.seed, m.amplitude);
      spec.f0 = m.f0;
      return make_perturbed(spec);
    }
    Profile w = m.w.empty() ? Profile::sampled(0.0, m.L, m.w_samples) : Profile::expression(m.w);
    Profile f = !m.f_samples.empty() ? Profile::sampled(0.0, m.L, m.f_samples)
                : m.f.empty()        ? Profile::constant(0.0)
                                     : Profile::expression(m.f);
    const FiberSpec fiber{m.n - 1, m.fiber_kappa.value_or(1.0),
                          m.fiber_volume.value_or(unit_sphere_volume(m.n - 1))};
    return build(m.n, fiber, m.L, std::move(w), std::move(f), m.second_boundary);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigSemantic) throw;
    throw Error(ErrorCode::ConfigSemantic, path + ": " + e.what());
  }
}

}  // namespace collar
