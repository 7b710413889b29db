#include "hyperrelax/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace hyperrelax {

namespace {

class Parser {
 public:
  Parser(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  TomlValue value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"') return string_value();
    if (c == '[') return array_value();
    if (s_.compare(pos_, 4, "true") == 0) return bool_value(true, 4);
    if (s_.compare(pos_, 5, "false") == 0) return bool_value(false, 5);
    return number_value();
  }

  void expect_end() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] != '#') fail("unexpected trailing characters");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(fmt::format("line {}: {}", line_, what));
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  TomlValue bool_value(bool b, std::size_t len) {
    pos_ += len;
    TomlValue v;
    v.kind = TomlValue::Kind::boolean;
    v.boolean = b;
    return v;
  }

  TomlValue string_value() {
    TomlValue v;
    v.kind = TomlValue::Kind::string;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') {
        if (++pos_ >= s_.size()) break;
        switch (s_[pos_]) {
          case 'n': v.text += '\n'; break;
          case 't': v.text += '\t'; break;
          case '"': v.text += '"'; break;
          case '\\': v.text += '\\'; break;
          default: fail("unsupported escape sequence");
        }
      } else {
        v.text += s_[pos_];
      }
      ++pos_;
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  TomlValue array_value() {
    TomlValue v;
    v.kind = TomlValue::Kind::array;
    ++pos_;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(value());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in array");
    }
  }

  TomlValue number_value() {
    std::size_t end = pos_;
    while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                               s_[end] == '-' || s_[end] == '+' || s_[end] == '_'))
      ++end;
    std::string tok(s_.substr(pos_, end - pos_));
    std::erase(tok, '_');
    TomlValue v;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && tok[0] == '+') ++first;
    const auto res = std::from_chars(first, last, v.number);
    if (tok.empty() || res.ec != std::errc() || res.ptr != last) fail(fmt::format("bad value '{}'", tok));
    v.integer = tok.find_first_of(".eE") == std::string::npos;
    pos_ = end;
    return v;
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

class Reader {
 public:
  explicit Reader(const TomlDocument& d) : doc_(d) {
    for (const auto& [table, keys] : d) {
      if (!kAllowed.contains(table)) throw ConfigError(fmt::format("unknown table [{}]", table));
      for (const auto& [k, v] : keys) unused_.insert(table + "." + k);
    }
  }

  const TomlValue* find(const std::string& table, const std::string& key) {
    const auto t = doc_.find(table);
    if (t == doc_.end()) return nullptr;
    const auto k = t->second.find(key);
    if (k == t->second.end()) return nullptr;
    unused_.erase(table + "." + key);
    return &k->second;
  }

  bool number(const std::string& table, const std::string& key, double& out) {
    const TomlValue* v = find(table, key);
    if (!v) return false;
    if (v->kind != TomlValue::Kind::number) throw ConfigError(fmt::format("{}.{} must be a number", table, key));
    out = v->number;
    return true;
  }

  template <class Int>
  bool integer(const std::string& table, const std::string& key, Int& out) {
    const TomlValue* v = find(table, key);
    if (!v) return false;
    if (v->kind != TomlValue::Kind::number || !v->integer)
      throw ConfigError(fmt::format("{}.{} must be an integer", table, key));
    if (std::is_unsigned_v<Int> && v->number < 0)
      throw ConfigError(fmt::format("{}.{} must be nonnegative", table, key));
    out = static_cast<Int>(v->number);
    return true;
  }

  bool string(const std::string& table, const std::string& key, std::string& out) {
    const TomlValue* v = find(table, key);
    if (!v) return false;
    if (v->kind != TomlValue::Kind::string) throw ConfigError(fmt::format("{}.{} must be a string", table, key));
    out = v->text;
    return true;
  }

  bool boolean(const std::string& table, const std::string& key, bool& out) {
    const TomlValue* v = find(table, key);
    if (!v) return false;
    if (v->kind != TomlValue::Kind::boolean) throw ConfigError(fmt::format("{}.{} must be true or false", table, key));
    out = v->boolean;
    return true;
  }

  bool numbers(const std::string& table, const std::string& key, std::vector<double>& out) {
    const TomlValue* v = find(table, key);
    if (!v) return false;
    if (v->kind != TomlValue::Kind::array) throw ConfigError(fmt::format("{}.{} must be an array", table, key));
    out.clear();
    for (const TomlValue& i : v->items) {
      if (i.kind != TomlValue::Kind::number) throw ConfigError(fmt::format("{}.{} must hold numbers", table, key));
      out.push_back(i.number);
    }
    return true;
  }

  bool strings(const std::string& table, const std::string& key, std::vector<std::string>& out) {
    const TomlValue* v = find(table, key);
    if (!v) return false;
    if (v->kind != TomlValue::Kind::array) throw ConfigError(fmt::format("{}.{} must be an array", table, key));
    out.clear();
    for (const TomlValue& i : v->items) {
      if (i.kind != TomlValue::Kind::string) throw ConfigError(fmt::format("{}.{} must hold strings", table, key));
      out.push_back(i.text);
    }
    return true;
  }

  void finish() const {
    if (!unused_.empty()) throw ConfigError(fmt::format("unknown key {}", *unused_.begin()));
  }

 private:
  static inline const std::set<std::string> kAllowed = {"model", "grid", "operators", "time", "study", "output"};
  const TomlDocument& doc_;
  std::set<std::string> unused_;
};

}  // namespace

TomlDocument parse_toml(std::string_view text) {
  TomlDocument doc;
  std::string table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      const auto close = line.find(']');
      if (close == std::string::npos) throw ConfigError(fmt::format("line {}: unterminated table header", line_no));
      table = trim(std::string_view(line).substr(1, close - 1));
      if (!valid_key(table)) throw ConfigError(fmt::format("line {}: bad table name", line_no));
      Parser(std::string_view(line).substr(close + 1), line_no).expect_end();
      if (doc.contains(table)) throw ConfigError(fmt::format("line {}: duplicate table [{}]", line_no, table));
      doc[table];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected key = value", line_no));
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (!valid_key(key)) throw ConfigError(fmt::format("line {}: bad key '{}'", line_no, key));
    Parser p(std::string_view(line).substr(eq + 1), line_no);
    TomlValue v = p.value();
    p.expect_end();
    if (!doc[table].emplace(key, std::move(v)).second)
      throw ConfigError(fmt::format("line {}: duplicate key '{}'", line_no, key));
  }
  return doc;
}

StudyConfig study_config_from_toml(const TomlDocument& doc) {
  Reader r(doc);
  StudyConfig c;
  std::string family, preset = "desk";
  r.string("model", "preset", preset);
  if (preset != "desk" && preset != "published") throw ConfigError("model.preset must be \"desk\" or \"published\"");
  if (r.string("model", "family", family)) {
    try {
      c = preset == "published" ? published_config(family) : desk_config(family);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (r.string("model", "hyper", c.hyper_model) && family.empty()) c.params = default_params(c.hyper_model);
  r.string("model", "limit", c.limit_model);
  if (family.empty() && c.limit_model.empty() && !c.hyper_model.empty()) {
    if (!is_model_name(c.hyper_model)) throw ConfigError(fmt::format("unknown model '{}'", c.hyper_model));
    if (auto p = limit_partner(c.hyper_model)) c.limit_model = *p;
  }
  r.number("model", "mu", c.params.mu);
  r.number("model", "sigma", c.params.sigma);
  r.integer("model", "sigma0", c.params.sigma0);
  r.integer("model", "m", c.params.m);
  std::string init;
  if (r.string("model", "kdv_init", init)) {
    if (init == "printed") c.params.kdv_init = KdvInit::printed;
    else if (init == "equilibrium") c.params.kdv_init = KdvInit::equilibrium;
    else throw ConfigError("model.kdv_init must be \"printed\" or \"equilibrium\"");
  }
  r.string("model", "initial", c.initial_condition);

  r.number("grid", "left", c.left);
  r.number("grid", "right", c.right);
  r.integer("grid", "n", c.n);
  r.integer("operators", "order", c.order);

  r.number("time", "dt", c.dt);
  if (r.number("time", "T", c.T)) c.traversals = 0.0;
  r.number("time", "traversals", c.traversals);
  std::string mode;
  if (r.string("time", "mode", mode)) {
    if (mode == "imex") c.mode = StepMode::imex;
    else if (mode == "explicit") c.mode = StepMode::explicit_only;
    else throw ConfigError("time.mode must be \"imex\" or \"explicit\"");
  }

  r.numbers("study", "tau_list", c.tau_list);
  std::string ref;
  if (r.string("study", "reference", ref)) {
    if (ref == "limit_numeric") c.reference = ErrorReference::limit_numeric;
    else if (ref == "exact") c.reference = ErrorReference::exact;
    else throw ConfigError("study.reference must be \"limit_numeric\" or \"exact\"");
  }
  r.boolean("study", "relaxation", c.relaxation);
  r.integer("study", "samples_per_traversal", c.samples_per_traversal);

  r.string("output", "dir", c.output_dir);
  if (r.strings("output", "formats", c.formats))
    for (const std::string& f : c.formats)
      if (f != "csv" && f != "svg") throw ConfigError(fmt::format("unknown output format '{}'", f));
  r.finish();

  try {
    validate(c);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return study_config_from_toml(parse_toml(ss.str()));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace hyperrelax
