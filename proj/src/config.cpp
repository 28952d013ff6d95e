#include "graffito/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace graffito {

std::string_view to_string(InitialPreset p) {
  switch (p) {
    case InitialPreset::OffsetGaussians: return "offset_gaussians";
    case InitialPreset::PureGaussians: return "pure_gaussians";
    case InitialPreset::Constant: return "constant";
  }
  return "offset_gaussians";
}

InitialPreset initial_preset_from_string(std::string_view name) {
  if (name == "offset_gaussians") return InitialPreset::OffsetGaussians;
  if (name == "pure_gaussians") return InitialPreset::PureGaussians;
  if (name == "constant") return InitialPreset::Constant;
  throw std::invalid_argument("unknown initial condition '" + std::string(name) +
                              "' (expected offset_gaussians, pure_gaussians or constant)");
}

ConfigError::ConfigError(const std::string& message, std::size_t line, std::size_t column, std::string key)
    : std::runtime_error([&] {
        std::string where;
        if (line > 0) where = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
        return where + message;
      }()),
      line_(line),
      column_(column),
      key_(std::move(key)) {}

InitialCondition RunConfig::initial_condition() const {
  InitialCondition ic;
  switch (initial) {
    case InitialPreset::OffsetGaussians: ic = InitialCondition::offset_gaussians(); break;
    case InitialPreset::PureGaussians: ic = InitialCondition::pure_gaussians(); break;
    case InitialPreset::Constant: ic = InitialCondition::constant(constant_u, constant_v); break;
  }
  return initial_scale == 1.0 ? ic : ic.scaled(initial_scale);
}

namespace {

// ---- value codecs ----------------------------------------------------------

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view s) {
  std::string lower(trim(s));
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "true" || lower == "yes" || lower == "on" || lower == "1") return true;
  if (lower == "false" || lower == "no" || lower == "off" || lower == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(trim(s)) + "'");
}

template <class T, class Parse>
std::vector<T> parse_list(std::string_view s, Parse parse) {
  std::vector<T> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(parse(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : std::to_string(v);
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

template <class T, class Format>
std::string format_list(const std::vector<T>& xs, Format format) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ", ";
    out += format(xs[i]);
  }
  return out;
}

// ---- key table -------------------------------------------------------------

struct Key {
  std::string_view section;
  std::string_view name;
  std::function<void(RunConfig&, std::string_view)> set;
  // Shorthand keys (setting several fields) have no renderer.
  std::function<std::string(const RunConfig&)> get;
};

#define GRAFFITO_DOUBLE_KEY(sec, key, field)                                        \
  Key {                                                                             \
    sec, key, [](RunConfig& c, std::string_view v) { c.field = parse_double(v); }, \
        [](const RunConfig& c) { return format_double(c.field); }                   \
  }
#define GRAFFITO_BOOL_KEY(sec, key, field)                                        \
  Key {                                                                           \
    sec, key, [](RunConfig& c, std::string_view v) { c.field = parse_bool(v); }, \
        [](const RunConfig& c) { return format_bool(c.field); }                   \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      GRAFFITO_DOUBLE_KEY("model", "d_u", params.d_u),
      GRAFFITO_DOUBLE_KEY("model", "d_v", params.d_v),
      GRAFFITO_DOUBLE_KEY("model", "chi_u", params.chi_u),
      GRAFFITO_DOUBLE_KEY("model", "chi_v", params.chi_v),
      Key{"model", "d",
          [](RunConfig& c, std::string_view v) { c.params.d_u = c.params.d_v = parse_double(v); }, nullptr},
      Key{"model", "chi",
          [](RunConfig& c, std::string_view v) { c.params.chi_u = c.params.chi_v = parse_double(v); }, nullptr},
      Key{"model", "rate_f",
          [](RunConfig& c, std::string_view v) { c.params.rate_f.kind = rate_kind_from_string(trim(v)); },
          [](const RunConfig& c) { return std::string(to_string(c.params.rate_f.kind)); }},
      Key{"model", "rate_g",
          [](RunConfig& c, std::string_view v) { c.params.rate_g.kind = rate_kind_from_string(trim(v)); },
          [](const RunConfig& c) { return std::string(to_string(c.params.rate_g.kind)); }},
      Key{"model", "initial_condition",
          [](RunConfig& c, std::string_view v) { c.initial = initial_preset_from_string(trim(v)); },
          [](const RunConfig& c) { return std::string(to_string(c.initial)); }},
      GRAFFITO_DOUBLE_KEY("model", "initial_scale", initial_scale),
      GRAFFITO_DOUBLE_KEY("model", "constant_u", constant_u),
      GRAFFITO_DOUBLE_KEY("model", "constant_v", constant_v),

      GRAFFITO_DOUBLE_KEY("time", "t_end", time.t_end),
      GRAFFITO_DOUBLE_KEY("time", "dt", time.dt),
      GRAFFITO_DOUBLE_KEY("time", "theta", time.theta),
      Key{"time", "scheme", [](RunConfig& c, std::string_view v) { c.time.scheme = scheme_from_string(trim(v)); },
          [](const RunConfig& c) { return std::string(to_string(c.time.scheme)); }},
      GRAFFITO_DOUBLE_KEY("time", "fp_tolerance", time.fp_tolerance),
      Key{"time", "fp_max_iter", [](RunConfig& c, std::string_view v) { c.time.fp_max_iter = parse_int(v); },
          [](const RunConfig& c) { return std::to_string(c.time.fp_max_iter); }},
      GRAFFITO_BOOL_KEY("time", "prelimiting", time.prelimiting),
      Key{"time", "study_dts",
          [](RunConfig& c, std::string_view v) { c.study_dts = parse_list<double>(v, parse_double); },
          [](const RunConfig& c) { return format_list(c.study_dts, format_double); }},

      GRAFFITO_DOUBLE_KEY("mesh", "x_min", domain.x_min),
      GRAFFITO_DOUBLE_KEY("mesh", "x_max", domain.x_max),
      GRAFFITO_DOUBLE_KEY("mesh", "y_min", domain.y_min),
      GRAFFITO_DOUBLE_KEY("mesh", "y_max", domain.y_max),
      Key{"mesh", "refinement", [](RunConfig& c, std::string_view v) { c.refinement_level = parse_int(v); },
          [](const RunConfig& c) { return std::to_string(c.refinement_level); }},
      Key{"mesh", "study_levels",
          [](RunConfig& c, std::string_view v) { c.study_levels = parse_list<int>(v, parse_int); },
          [](const RunConfig& c) {
            return format_list(c.study_levels, [](int l) { return std::to_string(l); });
          }},

      Key{"output", "directory", [](RunConfig& c, std::string_view v) { c.output_dir = std::string(trim(v)); },
          [](const RunConfig& c) { return c.output_dir; }},
      Key{"output", "sample_times",
          [](RunConfig& c, std::string_view v) { c.sample_times = parse_list<double>(v, parse_double); },
          [](const RunConfig& c) { return format_list(c.sample_times, format_double); }},
      GRAFFITO_BOOL_KEY("output", "fields", outputs.fields),
      GRAFFITO_BOOL_KEY("output", "diagonal", outputs.diagonal),
      GRAFFITO_BOOL_KEY("output", "classification", outputs.classification),
      GRAFFITO_BOOL_KEY("output", "lyapunov", outputs.lyapunov),
      GRAFFITO_BOOL_KEY("output", "summary", outputs.summary),
      GRAFFITO_DOUBLE_KEY("output", "lyapunov_c", lyapunov_c),
      GRAFFITO_DOUBLE_KEY("output", "steady_threshold", steady_threshold),
      GRAFFITO_DOUBLE_KEY("output", "steady_window", steady_window),
      GRAFFITO_DOUBLE_KEY("output", "expected_blowup_by", expected_blowup_by),
  };
  return table;
}

#undef GRAFFITO_DOUBLE_KEY
#undef GRAFFITO_BOOL_KEY

constexpr std::string_view kSections[] = {"model", "time", "mesh", "output"};

const Key* find_key(std::string_view section, std::string_view name) {
  for (const auto& k : keys()) {
    if (k.name == name && (section.empty() || k.section == section)) return &k;
  }
  return nullptr;
}

const Key* find_key_anywhere(std::string_view name) { return find_key({}, name); }

bool near_multiple(double t, double dt) {
  const double r = t / dt;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r);
}

[[noreturn]] void invalid(const std::string& key, const std::string& message) {
  throw ConfigError(key + ": " + message, 0, 0, key);
}

}  // namespace

void RunConfig::validate() const {
  const auto check_positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) invalid(key, "must be positive and finite");
  };
  check_positive(params.d_u, "model.d_u");
  check_positive(params.d_v, "model.d_v");
  if (!(params.chi_u >= 0.0) || !std::isfinite(params.chi_u)) invalid("model.chi_u", "must be nonnegative");
  if (!(params.chi_v >= 0.0) || !std::isfinite(params.chi_v)) invalid("model.chi_v", "must be nonnegative");
  check_positive(initial_scale, "model.initial_scale");
  if (!(constant_u >= 0.0)) invalid("model.constant_u", "must be nonnegative");
  if (!(constant_v >= 0.0)) invalid("model.constant_v", "must be nonnegative");

  check_positive(time.dt, "time.dt");
  if (!(time.theta >= 0.0 && time.theta <= 1.0)) invalid("time.theta", "must lie in [0, 1]");
  if (!(time.t_end >= 0.0) || !std::isfinite(time.t_end)) invalid("time.t_end", "must be nonnegative");
  if (!near_multiple(time.t_end, time.dt)) invalid("time.dt", "t_end must be a whole number of steps");
  check_positive(time.fp_tolerance, "time.fp_tolerance");
  if (time.fp_max_iter < 1) invalid("time.fp_max_iter", "must be at least 1");
  for (const double dt : study_dts) {
    if (!(dt > 0.0)) invalid("time.study_dts", "entries must be positive");
    if (!near_multiple(time.t_end, dt)) invalid("time.study_dts", "t_end must be a whole number of steps");
  }

  if (!(domain.x_max > domain.x_min) || !std::isfinite(domain.x_min) || !std::isfinite(domain.x_max)) {
    invalid("mesh.x_max", "must exceed x_min");
  }
  if (!(domain.y_max > domain.y_min) || !std::isfinite(domain.y_min) || !std::isfinite(domain.y_max)) {
    invalid("mesh.y_max", "must exceed y_min");
  }
  const auto check_level = [](int l, const char* key) {
    if (l < 0 || l > kMaxRefinementLevel) {
      invalid(key, "must lie in [0, " + std::to_string(kMaxRefinementLevel) + "]");
    }
  };
  check_level(refinement_level, "mesh.refinement");
  for (const int l : study_levels) check_level(l, "mesh.study_levels");

  if (output_dir.empty()) invalid("output.directory", "must not be empty");
  for (const double t : sample_times) {
    if (!(t >= 0.0) || t > time.t_end * (1.0 + 1e-12)) invalid("output.sample_times", "times must lie in [0, t_end]");
  }
  check_positive(lyapunov_c, "output.lyapunov_c");
  check_positive(steady_threshold, "output.steady_threshold");
  check_positive(steady_window, "output.steady_window");
  if (!(expected_blowup_by >= 0.0)) invalid("output.expected_blowup_by", "must be nonnegative");
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::string section;
  std::set<std::pair<std::string_view, std::string_view>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
      if (eol == text.size()) break;
      continue;
    }
    const std::size_t col = first + 1;
    if (line[first] == '[') {
      const std::size_t close = line.find(']', first);
      if (close == std::string_view::npos) throw ConfigError("unterminated section header", line_no, col);
      if (!trim(line.substr(close + 1)).empty()) {
        throw ConfigError("unexpected text after section header", line_no, close + 2);
      }
      const std::string_view name = trim(line.substr(first + 1, close - first - 1));
      if (std::find(std::begin(kSections), std::end(kSections), name) == std::end(kSections)) {
        throw ConfigError("unknown section [" + std::string(name) + "]", line_no, col);
      }
      section = std::string(name);
      if (eol == text.size()) break;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no, col);
    const std::string_view name = trim(line.substr(0, eq));
    if (name.empty()) throw ConfigError("missing key before '='", line_no, col);
    const Key* key = section.empty() ? find_key_anywhere(name) : find_key(section, name);
    if (key == nullptr) {
      const Key* elsewhere = find_key_anywhere(name);
      const std::string msg = elsewhere != nullptr
                                  ? "key '" + std::string(name) + "' belongs to section [" +
                                        std::string(elsewhere->section) + "]"
                                  : "unknown key '" + std::string(name) + "'";
      throw ConfigError(msg, line_no, col, std::string(name));
    }
    if (!seen.insert({key->section, key->name}).second) {
      throw ConfigError("duplicate key '" + std::string(name) + "'", line_no, col, std::string(name));
    }
    const std::string_view raw = line.substr(eq + 1);
    const std::size_t lead = raw.find_first_not_of(" \t");
    const std::size_t value_col = eq + 2 + (lead == std::string_view::npos ? 0 : lead);
    try {
      key->set(config, raw);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(key->section) + "." + std::string(key->name) + ": " + e.what(), line_no,
                        value_col, std::string(key->section) + "." + std::string(key->name));
    }
    if (eol == text.size()) break;
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what(), 0, 0, e.key());
  }
}

void apply_override(RunConfig& config, std::string_view key, std::string_view value) {
  std::string_view section;
  std::string_view name = trim(key);
  if (const std::size_t dot = name.find('.'); dot != std::string_view::npos) {
    section = name.substr(0, dot);
    name = name.substr(dot + 1);
  }
  const Key* k = find_key(section, name);
  if (k == nullptr) throw ConfigError("unknown key '" + std::string(key) + "'", 0, 0, std::string(key));
  try {
    k->set(config, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(key) + ": " + e.what(), 0, 0, std::string(key));
  }
  config.validate();
}

std::string render_config(const RunConfig& config) {
  std::ostringstream out;
  for (const std::string_view section : kSections) {
    if (section != kSections[0]) out << '\n';
    out << '[' << section << "]\n";
    for (const auto& k : keys()) {
      if (k.section != section || !k.get) continue;
      out << k.name << " = " << k.get(config) << '\n';
    }
  }
  return out.str();
}

}  // namespace graffito
