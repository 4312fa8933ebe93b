#include "causalbounds/cli/config.hpp"

#include <cmath>

#include "causalbounds/csv.hpp"
#include "causalbounds/error.hpp"

namespace causalbounds::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool bare_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-';
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw DataFormatError("config line " + std::to_string(line) + ": " + msg,
                        static_cast<std::size_t>(line));
}

class ValueParser {
 public:
  ValueParser(std::string_view s, int line) : s_(s), line_(line) {}

  ConfigValue parse() {
    skip_ws();
    ConfigValue v = scalar_or_array();
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '#') pos_ = s_.size();
    if (pos_ != s_.size()) fail(line_, "unexpected text after value");
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  ConfigValue scalar_or_array() {
    if (pos_ >= s_.size()) fail(line_, "missing value");
    if (s_[pos_] == '[') return array();
    if (s_[pos_] == '"') return quoted();
    return bare();
  }

  ConfigValue array() {
    ++pos_;
    std::vector<double> nums;
    std::vector<std::string> strs;
    for (;;) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        break;
      }
      ConfigValue item = scalar_or_array();
      if (auto* d = std::get_if<double>(&item)) {
        nums.push_back(*d);
      } else if (auto* str = std::get_if<std::string>(&item)) {
        strs.push_back(*str);
      } else {
        fail(line_, "arrays may hold only numbers or strings");
      }
      if (!nums.empty() && !strs.empty()) fail(line_, "array mixes numbers and strings");
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        break;
      }
      fail(line_, "expected ',' or ']' in array");
    }
    if (!strs.empty()) return strs;
    return nums;
  }

  ConfigValue quoted() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        const char e = s_[pos_++];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(line_, std::string("unsupported escape \\") + e);
        }
      } else {
        out.push_back(c);
      }
    }
    if (pos_ >= s_.size()) fail(line_, "unterminated string");
    ++pos_;
    return out;
  }

  ConfigValue bare() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != ' ' &&
           s_[pos_] != '\t' && s_[pos_] != '#') {
      ++pos_;
    }
    const auto tok = s_.substr(start, pos_ - start);
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (auto v = parse_number(tok)) return *v;
    fail(line_, "cannot parse value '" + std::string(tok) + "'");
  }

  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;
};

template <class T>
const T* typed(const Config& c, std::string_view section, std::string_view key, const char* what) {
  const auto* sec = c.section(section);
  if (!sec) return nullptr;
  const auto it = sec->find(key);
  if (it == sec->end()) return nullptr;
  const T* v = std::get_if<T>(&it->second.value);
  if (!v) {
    fail(it->second.line, "[" + std::string(section) + "] " + std::string(key) + " must be " + what);
  }
  return v;
}

}  // namespace

const Config::Section* Config::section(std::string_view name) const {
  const auto it = sections.find(name);
  return it == sections.end() ? nullptr : &it->second;
}

bool Config::has(std::string_view sec, std::string_view key) const {
  const auto* s = section(sec);
  return s && s->find(key) != s->end();
}

std::optional<double> Config::number(std::string_view sec, std::string_view key) const {
  if (const auto* v = typed<double>(*this, sec, key, "a number")) return *v;
  return std::nullopt;
}

std::optional<std::string> Config::string(std::string_view sec, std::string_view key) const {
  if (const auto* v = typed<std::string>(*this, sec, key, "a string")) return *v;
  return std::nullopt;
}

std::optional<bool> Config::boolean(std::string_view sec, std::string_view key) const {
  if (const auto* v = typed<bool>(*this, sec, key, "true or false")) return *v;
  return std::nullopt;
}

std::optional<std::vector<std::string>> Config::strings(std::string_view sec, std::string_view key) const {
  const auto* s = section(sec);
  if (!s) return std::nullopt;
  const auto it = s->find(key);
  if (it == s->end()) return std::nullopt;
  // An empty array parses as numeric.
  if (const auto* d = std::get_if<std::vector<double>>(&it->second.value); d && d->empty()) {
    return std::vector<std::string>{};
  }
  if (const auto* v = std::get_if<std::vector<std::string>>(&it->second.value)) return *v;
  fail(it->second.line, "[" + std::string(sec) + "] " + std::string(key) + " must be an array of strings");
}

std::optional<Interval> Config::interval(std::string_view sec, std::string_view key) const {
  const auto* s = section(sec);
  if (!s) return std::nullopt;
  const auto it = s->find(key);
  if (it == s->end()) return std::nullopt;
  const int line = it->second.line;
  if (const auto* d = std::get_if<double>(&it->second.value)) return Interval(*d, *d);
  if (const auto* v = std::get_if<std::vector<double>>(&it->second.value); v && v->size() == 2) {
    if ((*v)[0] > (*v)[1]) fail(line, std::string(key) + " range has lo > hi");
    return Interval((*v)[0], (*v)[1]);
  }
  fail(line, std::string(key) + " must be a number or a [lo, hi] pair");
}

std::vector<std::string> Config::unknown_keys(std::string_view sec,
                                              const std::vector<std::string_view>& allowed) const {
  std::vector<std::string> out;
  if (const auto* s = section(sec)) {
    for (const auto& [k, v] : *s) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == k;
      if (!ok) out.push_back(k);
    }
  }
  return out;
}

Config parse_config(std::string_view text) {
  Config cfg;
  std::string current;
  cfg.sections[current];
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string_view::npos) fail(line_no, "unterminated section header");
      const auto rest = trim(line.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') fail(line_no, "text after section header");
      const auto name = trim(line.substr(1, close - 1));
      if (name.empty()) fail(line_no, "empty section name");
      for (char c : name) {
        if (!bare_key_char(c)) fail(line_no, "invalid section name '" + std::string(name) + "'");
      }
      current = std::string(name);
      if (cfg.sections.count(current) && !cfg.sections[current].empty()) {
        fail(line_no, "section [" + current + "] appears twice");
      }
      cfg.sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) fail(line_no, "empty key");
    for (char c : key) {
      if (!bare_key_char(c)) fail(line_no, "invalid key '" + std::string(key) + "'");
    }
    auto& sec = cfg.sections[current];
    if (sec.count(key)) fail(line_no, "duplicate key '" + std::string(key) + "'");
    sec.emplace(std::string(key), ConfigEntry{ValueParser(line.substr(eq + 1), line_no).parse(), line_no});
  }
  return cfg;
}

Config read_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

pkpd::PkpdConfig pkpd_config_from(const Config& cfg) {
  auto reject_unknown = [&](std::string_view sec, const std::vector<std::string_view>& allowed) {
    const auto extra = cfg.unknown_keys(sec, allowed);
    if (!extra.empty()) {
      throw DomainError("unknown key '" + extra.front() + "' in [" + std::string(sec) + "]");
    }
  };
  reject_unknown("model", {"dose_mg", "threshold"});
  reject_unknown("parameters", {"theta1", "lambda0", "lambda1", "lambda2", "lambda3"});

  pkpd::PkpdConfig out;
  if (auto v = cfg.number("model", "dose_mg")) out.dose_mg = *v;
  if (auto v = cfg.number("model", "threshold")) out.threshold = *v;
  if (auto v = cfg.interval("parameters", "theta1")) out.theta1 = *v;
  if (auto v = cfg.interval("parameters", "lambda0")) out.lambda0 = *v;
  if (auto v = cfg.interval("parameters", "lambda1")) out.lambda1 = *v;
  if (auto v = cfg.interval("parameters", "lambda2")) out.lambda2 = *v;
  if (auto v = cfg.interval("parameters", "lambda3")) out.lambda3 = *v;
  out.validate();
  return out;
}

void apply_search_section(const Config& cfg, SearchConfig& search) {
  const auto extra = cfg.unknown_keys(
      "search", {"grid_points_per_dim", "multistart_count", "local_refine", "refine_tolerance", "seed"});
  if (!extra.empty()) throw DomainError("unknown key '" + extra.front() + "' in [search]");
  auto count = [&](std::string_view key) -> std::optional<std::uint64_t> {
    const auto v = cfg.number("search", key);
    if (!v) return std::nullopt;
    if (*v < 0 || std::floor(*v) != *v) throw DomainError("[search] " + std::string(key) + " must be a count");
    return static_cast<std::uint64_t>(*v);
  };
  if (auto v = count("grid_points_per_dim")) search.grid_points_per_dim = *v;
  if (auto v = count("multistart_count")) search.multistart_count = *v;
  if (auto v = count("seed")) search.seed = *v;
  if (auto v = cfg.boolean("search", "local_refine")) search.local_refine = *v;
  if (auto v = cfg.number("search", "refine_tolerance")) search.refine_tolerance = *v;
  search.validate();
}

ColumnMap column_map_from(const Config& cfg) {
  const auto extra = cfg.unknown_keys("data", {"value_column", "weight_column", "missing_codes", "delimiter"});
  if (!extra.empty()) throw DomainError("unknown key '" + extra.front() + "' in [data]");
  ColumnMap m;
  const auto value = cfg.string("data", "value_column");
  if (!value) throw DomainError("config lacks [data] value_column");
  m.value_column = *value;
  if (auto w = cfg.string("data", "weight_column"); w && !w->empty()) m.weight_column = *w;
  if (auto codes = cfg.strings("data", "missing_codes")) m.missing_codes = *codes;
  if (auto d = cfg.string("data", "delimiter")) {
    if (*d == "\\t" || *d == "\t") {
      m.delimiter = '\t';
    } else if (d->size() == 1) {
      m.delimiter = d->front();
    } else {
      throw DomainError("[data] delimiter must be a single character");
    }
  }
  m.validate();
  return m;
}

}  // namespace causalbounds::cli
