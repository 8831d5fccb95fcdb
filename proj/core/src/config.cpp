#include "csege/config.hpp"

#include "csege/error.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>

namespace csege {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_bare_key(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

[[noreturn]] void syntax_error(int line, const std::string& msg) {
  throw ConfigError(fmt::format("config line {}: {}", line, msg));
}

// Drops a trailing comment, respecting double-quoted strings.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && quoted) {
      ++i;
    } else if (s[i] == '"') {
      quoted = !quoted;
    } else if (s[i] == '#' && !quoted) {
      return s.substr(0, i);
    }
  }
  return s;
}

std::optional<double> parse_number(std::string_view token, bool& is_integer) {
  std::string cleaned;
  for (std::size_t i = 0; i < token.size(); ++i) {
    const char c = token[i];
    if (c == '_') {
      const bool ok = i > 0 && i + 1 < token.size() &&
                      std::isdigit(static_cast<unsigned char>(token[i - 1])) &&
                      std::isdigit(static_cast<unsigned char>(token[i + 1]));
      if (!ok) return std::nullopt;
      continue;
    }
    cleaned += c;
  }
  if (!cleaned.empty() && cleaned.front() == '+') cleaned.erase(0, 1);
  if (cleaned.empty()) return std::nullopt;
  is_integer = cleaned.find_first_of(".eEinfa") == std::string::npos;
  double value = 0.0;
  const char* end = cleaned.data() + cleaned.size();
  auto [ptr, ec] = std::from_chars(cleaned.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

ConfigValue parse_scalar(std::string_view token, int line) {
  if (token.empty()) syntax_error(line, "missing value");
  if (token.front() == '"') {
    if (token.size() < 2 || token.back() != '"') syntax_error(line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < token.size(); ++i) {
      char c = token[i];
      if (c == '\\') {
        if (i + 2 >= token.size()) syntax_error(line, "dangling escape");
        const char e = token[++i];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: syntax_error(line, fmt::format("unsupported escape \\{}", e));
        }
      } else if (c == '"') {
        syntax_error(line, "unexpected quote inside string");
      }
      out += c;
    }
    return out;
  }
  if (token == "true") return true;
  if (token == "false") return false;
  bool is_integer = false;
  const auto number = parse_number(token, is_integer);
  if (!number) syntax_error(line, fmt::format("cannot parse value '{}'", token));
  if (is_integer) {
    std::string digits;
    for (char c : token) {
      if (c != '_' && c != '+') digits += c;
    }
    std::int64_t i = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), i);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      syntax_error(line, fmt::format("integer '{}' out of range", token));
    }
    return i;
  }
  return *number;
}

ConfigValue parse_value(std::string_view token, int line) {
  token = trim(token);
  if (!token.empty() && token.front() == '[') {
    if (token.back() != ']') syntax_error(line, "unterminated array");
    std::vector<double> values;
    std::string_view body = trim(token.substr(1, token.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      const std::string_view item = trim(body.substr(0, comma));
      if (!item.empty()) {
        const ConfigValue v = parse_scalar(item, line);
        if (const auto* d = std::get_if<double>(&v)) {
          values.push_back(*d);
        } else if (const auto* i = std::get_if<std::int64_t>(&v)) {
          values.push_back(static_cast<double>(*i));
        } else {
          syntax_error(line, "arrays may only contain numbers");
        }
      } else if (comma != std::string_view::npos) {
        syntax_error(line, "empty array element");
      }
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
    }
    return values;
  }
  return parse_scalar(token, line);
}

std::string type_name(const ConfigValue& v) {
  switch (v.index()) {
    case 0: return "boolean";
    case 1: return "integer";
    case 2: return "float";
    case 3: return "string";
    default: return "array";
  }
}

class SectionReader {
 public:
  SectionReader(std::string section, std::map<std::string, const ConfigEntry*> entries)
      : section_(std::move(section)), entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  const ConfigEntry* get(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    used_.insert(key);
    return it->second;
  }

  [[noreturn]] void type_error(const ConfigEntry& e, std::string_view expected) const {
    throw ConfigError(fmt::format("config [{}].{} (line {}): expected {}, got {}", section_, e.key,
                                  e.line, expected, type_name(e.value)));
  }

  [[noreturn]] void value_error(const ConfigEntry& e, const std::string& msg) const {
    throw ConfigError(fmt::format("config [{}].{} (line {}): {}", section_, e.key, e.line, msg));
  }

  std::optional<double> number(const std::string& key) {
    const ConfigEntry* e = get(key);
    if (!e) return std::nullopt;
    if (const auto* d = std::get_if<double>(&e->value)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&e->value)) return static_cast<double>(*i);
    type_error(*e, "number");
  }

  std::optional<std::int64_t> integer(const std::string& key, std::int64_t lo, std::int64_t hi) {
    const ConfigEntry* e = get(key);
    if (!e) return std::nullopt;
    const auto* i = std::get_if<std::int64_t>(&e->value);
    if (!i) type_error(*e, "integer");
    if (*i < lo || *i > hi) value_error(*e, fmt::format("must be in [{}, {}], got {}", lo, hi, *i));
    return *i;
  }

  std::optional<std::string> string(const std::string& key) {
    const ConfigEntry* e = get(key);
    if (!e) return std::nullopt;
    const auto* s = std::get_if<std::string>(&e->value);
    if (!s) type_error(*e, "string");
    return *s;
  }

  std::optional<bool> boolean(const std::string& key) {
    const ConfigEntry* e = get(key);
    if (!e) return std::nullopt;
    const auto* b = std::get_if<bool>(&e->value);
    if (!b) type_error(*e, "boolean");
    return *b;
  }

  std::optional<std::vector<double>> array(const std::string& key) {
    const ConfigEntry* e = get(key);
    if (!e) return std::nullopt;
    const auto* a = std::get_if<std::vector<double>>(&e->value);
    if (!a) type_error(*e, "array of numbers");
    return *a;
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : entries_) {
      if (!used_.count(key)) {
        throw ConfigError(fmt::format("config [{}].{} (line {}): unknown key", section_, key,
                                      entry->line));
      }
    }
  }

  template <typename Parse>
  auto parsed(const std::string& key, Parse&& parse) -> std::optional<decltype(parse(""))> {
    const ConfigEntry* e = get(key);
    if (!e) return std::nullopt;
    const auto* s = std::get_if<std::string>(&e->value);
    if (!s) type_error(*e, "string");
    try {
      return parse(*s);
    } catch (const ConfigError& err) {
      value_error(*e, err.what());
    }
  }

 private:
  std::string section_;
  std::map<std::string, const ConfigEntry*> entries_;
  std::set<std::string> used_;
};

ExperimentSpec read_experiment(SectionReader& in, const std::string& name) {
  ExperimentSpec spec;
  spec.name = name;
  // Informational keys written into CSV metadata headers.
  in.get("csege_version");

  if (auto v = in.parsed("kind", [](std::string_view s) { return parse_experiment_kind(s); })) {
    spec.kind = *v;
  } else {
    throw ConfigError(fmt::format("config [{}]: missing required key 'kind'", name));
  }
  constexpr std::int64_t kIntMax = std::numeric_limits<int>::max();
  if (auto v = in.integer("l", 1, kMaxLevels)) spec.basis.levels = static_cast<int>(*v);
  if (auto v = in.integer("n", 1, kMaxLevels)) spec.basis.particles = static_cast<int>(*v);
  if (auto v = in.integer("k", 1, kMaxLevels)) spec.k = static_cast<int>(*v);
  if (auto v = in.integer("k_prime", 1, kMaxLevels)) spec.k_prime = static_cast<int>(*v);
  if (auto v = in.parsed("ensemble", [](std::string_view s) { return parse_ensemble_kind(s); })) {
    spec.ensemble = *v;
  }
  if (auto v = in.parsed("construction",
                         [](std::string_view s) { return parse_cs_construction(s); })) {
    spec.construction = *v;
  }
  if (auto v = in.integer("realizations", 1, kIntMax)) spec.realizations = static_cast<int>(*v);
  if (auto v = in.integer("seed", 0, std::numeric_limits<std::int64_t>::max())) {
    spec.master_seed = static_cast<std::uint64_t>(*v);
  }
  if (auto v = in.number("eta")) spec.eta = *v;
  if (auto v = in.number("nu")) spec.nu = *v;
  if (auto v = in.number("atol")) spec.quad.atol = *v;
  if (auto v = in.number("rtol")) spec.quad.rtol = *v;
  if (auto v = in.integer("max_depth", 1, 60)) spec.quad.max_depth = static_cast<int>(*v);
  if (auto v = in.integer("initial_panels", 1, 1 << 24)) {
    spec.quad.initial_panels = static_cast<int>(*v);
  }

  const bool generated = in.has("grid_start") || in.has("grid_stop") || in.has("grid_points");
  if (in.has("grid") && generated) {
    throw ConfigError(fmt::format(
        "config [{}]: give either 'grid' or 'grid_start/grid_stop/grid_points', not both", name));
  }
  if (auto g = in.array("grid")) {
    spec.grid = *g;
  } else if (generated) {
    const auto start = in.number("grid_start");
    const auto stop = in.number("grid_stop");
    const auto points = in.integer("grid_points", 1, 1 << 20);
    if (!start || !stop || !points) {
      throw ConfigError(fmt::format(
          "config [{}]: grid_start, grid_stop and grid_points must be given together", name));
    }
    const std::string scale = in.string("grid_scale").value_or("linear");
    if (scale == "linear") {
      spec.grid = linear_grid(*start, *stop, static_cast<std::size_t>(*points));
    } else if (scale == "log") {
      spec.grid = log_grid(*start, *stop, static_cast<std::size_t>(*points));
    } else {
      throw ConfigError(fmt::format("config [{}].grid_scale: expected \"linear\" or \"log\", got "
                                    "\"{}\"", name, scale));
    }
    if (in.boolean("grid_prepend_zero").value_or(false)) spec.grid.insert(spec.grid.begin(), 0.0);
  } else {
    spec.grid = default_grid(spec.kind);
  }
  in.reject_unknown();
  return spec;
}

}  // namespace

std::string format_double(double x) { return fmt::format("{}", x); }

ConfigDocument parse_config(std::string_view text) {
  ConfigDocument doc;
  doc.sections.push_back(ConfigSection{});
  std::set<std::string> section_names;
  std::set<std::string> keys;

  int line_no = 0;
  std::string pending;  // multi-line array accumulator
  int pending_line = 0;
  std::string pending_key;

  auto add_entry = [&](const std::string& key, std::string_view raw, int line) {
    if (!keys.insert(key).second) syntax_error(line, fmt::format("duplicate key '{}'", key));
    doc.sections.back().entries.push_back(ConfigEntry{key, parse_value(raw, line), line});
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    const std::string_view line = trim(strip_comment(raw));

    if (!pending_key.empty()) {
      pending += ' ';
      pending += line;
      if (line.find(']') != std::string_view::npos) {
        add_entry(pending_key, pending, pending_line);
        pending_key.clear();
        pending.clear();
      }
      continue;
    }
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') syntax_error(line_no, "malformed section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!is_bare_key(name)) syntax_error(line_no, fmt::format("invalid section name '{}'", name));
      if (!section_names.insert(name).second) {
        syntax_error(line_no, fmt::format("duplicate section [{}]", name));
      }
      doc.sections.push_back(ConfigSection{name, {}});
      keys.clear();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) syntax_error(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (!is_bare_key(key)) syntax_error(line_no, fmt::format("invalid key '{}'", key));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!value.empty() && value.front() == '[' && value.find(']') == std::string_view::npos) {
      pending_key = key;
      pending = std::string(value);
      pending_line = line_no;
      continue;
    }
    add_entry(key, value, line_no);
  }
  if (!pending_key.empty()) syntax_error(pending_line, "unterminated array");
  return doc;
}

std::vector<ExperimentSpec> experiments_from_config(const ConfigDocument& doc) {
  std::vector<ExperimentSpec> out;
  const ConfigSection* defaults = nullptr;
  for (const ConfigSection& s : doc.sections) {
    if (s.name.empty()) {
      defaults = &s;
      continue;
    }
    std::map<std::string, const ConfigEntry*> merged;
    if (defaults) {
      for (const ConfigEntry& e : defaults->entries) merged[e.key] = &e;
    }
    for (const ConfigEntry& e : s.entries) merged[e.key] = &e;
    SectionReader reader(s.name, std::move(merged));
    out.push_back(read_experiment(reader, s.name));
  }
  if (out.empty()) throw ConfigError("config defines no experiments (no [section] found)");
  return out;
}

std::vector<ExperimentSpec> load_experiments(std::string_view text) {
  return experiments_from_config(parse_config(text));
}

std::string experiment_to_config(const ExperimentSpec& spec) {
  std::vector<std::string> grid;
  grid.reserve(spec.grid.size());
  for (double g : spec.grid) grid.push_back(format_double(g));
  std::string s = fmt::format("[{}]\n", spec.name);
  s += fmt::format("kind = \"{}\"\n", to_string(spec.kind));
  s += fmt::format("l = {}\n", spec.basis.levels);
  s += fmt::format("n = {}\n", spec.basis.particles);
  s += fmt::format("k = {}\n", spec.k);
  s += fmt::format("k_prime = {}\n", spec.k_prime);
  s += fmt::format("ensemble = \"{}\"\n", to_string(spec.ensemble));
  s += fmt::format("construction = \"{}\"\n", to_string(spec.construction));
  s += fmt::format("realizations = {}\n", spec.realizations);
  s += fmt::format("seed = {}\n", spec.master_seed);
  s += fmt::format("eta = {}\n", format_double(spec.eta));
  s += fmt::format("nu = {}\n", format_double(spec.nu));
  s += fmt::format("atol = {}\n", format_double(spec.quad.atol));
  s += fmt::format("rtol = {}\n", format_double(spec.quad.rtol));
  s += fmt::format("max_depth = {}\n", spec.quad.max_depth);
  s += fmt::format("initial_panels = {}\n", spec.quad.initial_panels);
  s += fmt::format("grid = [{}]\n", fmt::join(grid, ", "));
  return s;
}

std::string experiments_to_config(const std::vector<ExperimentSpec>& specs) {
  std::string s;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (i > 0) s += '\n';
    s += experiment_to_config(specs[i]);
  }
  return s;
}

}  // namespace csege
