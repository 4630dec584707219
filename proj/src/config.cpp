#include "bohm/config.hpp"

#include "bohm/frame_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace bohm {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename Int>
Int parse_int(const std::string& text) {
  Int v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not an integer: '" + text + "'");
  return v;
}

std::string format_axis(const Vector3& a) {
  return format_double(a.x()) + " " + format_double(a.y()) + " " + format_double(a.z());
}

struct KeySpec {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define BOHM_DOUBLE_KEY(name, member)                                                         \
  {                                                                                           \
    name, {                                                                                   \
      [](ExperimentConfig& c, const std::string& v) { c.member = parse_double(v); },          \
          [](const ExperimentConfig& c) { return format_double(c.member); }                   \
    }                                                                                         \
  }
#define BOHM_INT_KEY(name, member, type)                                                      \
  {                                                                                           \
    name, {                                                                                   \
      [](ExperimentConfig& c, const std::string& v) { c.member = parse_int<type>(v); },       \
          [](const ExperimentConfig& c) { return std::to_string(c.member); }                  \
    }                                                                                         \
  }

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = {
      {"scenario",
       {[](ExperimentConfig& c, const std::string& v) { c.scenario = parse_scenario(v); },
        [](const ExperimentConfig& c) { return to_string(c.scenario); }}},
      BOHM_INT_KEY("seed", seed, std::uint64_t),
      BOHM_INT_KEY("trials", n_trials, long),
      {"spin.alpha",
       {[](ExperimentConfig& c, const std::string& v) { c.alpha = parse_complex(v); },
        [](const ExperimentConfig& c) { return format_complex(c.alpha); }}},
      {"spin.beta",
       {[](ExperimentConfig& c, const std::string& v) { c.beta = parse_complex(v); },
        [](const ExperimentConfig& c) { return format_complex(c.beta); }}},
      {"spin.axes",
       {[](ExperimentConfig& c, const std::string& v) { c.axes = parse_axes(v); },
        [](const ExperimentConfig& c) {
          if (c.axes.empty()) return std::string("none");
          std::string out;
          for (std::size_t i = 0; i < c.axes.size(); ++i) out += (i ? "; " : "") + format_axis(c.axes[i]);
          return out;
        }}},
      BOHM_DOUBLE_KEY("grid.x_min", x_min),
      BOHM_DOUBLE_KEY("grid.x_max", x_max),
      BOHM_INT_KEY("grid.n_points", n_points, int),
      BOHM_DOUBLE_KEY("packet.center", packet_center),
      BOHM_DOUBLE_KEY("packet.width", packet_width),
      BOHM_DOUBLE_KEY("packet.momentum", packet_momentum),
      BOHM_DOUBLE_KEY("magnet.mu_b", magnet.mu_b),
      BOHM_DOUBLE_KEY("magnet.tau", magnet.tau),
      BOHM_DOUBLE_KEY("evolution.dt", dt),
      BOHM_DOUBLE_KEY("evolution.detection_time", detection_time),
      BOHM_DOUBLE_KEY("evolution.duration", duration),
      BOHM_INT_KEY("evolution.frame_stride", frame_stride, int),
      BOHM_INT_KEY("evolution.substeps", substeps, int),
      BOHM_INT_KEY("evolution.record_frames", record_frames, int),
      {"potential.kind",
       {[](ExperimentConfig& c, const std::string& v) {
          if (v == "free") c.potential = PotentialSpec::Kind::free;
          else if (v == "harmonic") c.potential = PotentialSpec::Kind::harmonic;
          else throw std::invalid_argument("potential.kind must be free or harmonic, got '" + v + "'");
        },
        [](const ExperimentConfig& c) { return to_string(c.potential); }}},
      BOHM_DOUBLE_KEY("potential.omega", omega),
      BOHM_DOUBLE_KEY("potential.center", potential_center),
      BOHM_INT_KEY("equilibrium.bins", n_bins, int),
      {"equilibrium.initial",
       {[](ExperimentConfig& c, const std::string& v) {
          if (v == "equilibrium") c.initial = InitialDistribution::equilibrium;
          else if (v == "uniform") c.initial = InitialDistribution::uniform;
          else throw std::invalid_argument("equilibrium.initial must be equilibrium or uniform, got '" + v + "'");
        },
        [](const ExperimentConfig& c) {
          return std::string(c.initial == InitialDistribution::equilibrium ? "equilibrium" : "uniform");
        }}},
      BOHM_DOUBLE_KEY("pointer.width", pointer_width),
      BOHM_DOUBLE_KEY("pointer.shift", pointer_shift),
  };
  return table;
}

#undef BOHM_DOUBLE_KEY
#undef BOHM_INT_KEY

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string suggest(const std::string& key) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& [name, spec] : key_table()) {
    const std::size_t d = edit_distance(key, name);
    if (d < best_d) {
      best_d = d;
      best = name;
    }
  }
  return best;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s += ch;
  if (s.empty()) throw std::invalid_argument("empty complex number");
  if (s.back() != 'i') return {parse_double(s), 0.0};
  s.pop_back();
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t);
  };
  if (split == std::string::npos) return {0.0, imag_part(s)};
  return {parse_double(s.substr(0, split)), imag_part(s.substr(split))};
}

std::string format_complex(Complex value) {
  if (value.imag() == 0.0) return format_double(value.real());
  const std::string im = format_double(value.imag());
  return format_double(value.real()) + (value.imag() < 0 || im[0] == '-' ? "" : "+") + im + "i";
}

std::vector<Vector3> parse_axes(std::string_view text) {
  std::vector<Vector3> axes;
  if (trim(text) == "none") return axes;
  std::string token;
  auto flush = [&] {
    const std::string t = trim(token);
    token.clear();
    if (t.empty()) throw std::invalid_argument("empty axis in list");
    const bool negative = t[0] == '-' && t.size() == 2;
    const std::string name = negative ? t.substr(1) : t;
    if (name == "x" || name == "y" || name == "z") {
      axes.push_back((negative ? -1.0 : 1.0) * unit_vector(parse_axis(name)));
      return;
    }
    std::istringstream in(t);
    std::string a, b, c, extra;
    if (!(in >> a >> b >> c) || (in >> extra)) throw std::invalid_argument("axis '" + t + "' is neither x|y|z nor a triple");
    axes.emplace_back(parse_double(a), parse_double(b), parse_double(c));
  };
  for (char ch : text) {
    if (ch == ',' || ch == ';') flush();
    else token += ch;
  }
  flush();
  return axes;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [name, spec] : key_table()) keys.push_back(name);
  return keys;
}

ExperimentConfig parse_config(std::string_view text, std::optional<Scenario> scenario) {
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, Entry> entries;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (!key_table().count(full))
      throw ConfigError(where + "unknown key '" + full + "' (did you mean '" + suggest(full) + "'?)");
    if (auto it = entries.find(full); it != entries.end())
      throw ConfigError(where + "duplicate key '" + full + "' (first set on line " + std::to_string(it->second.line) + ")");
    entries[full] = {value, line_no};
  }

  Scenario chosen = scenario.value_or(Scenario::stern_gerlach);
  if (auto it = entries.find("scenario"); it != entries.end()) {
    Scenario from_text;
    try {
      from_text = parse_scenario(it->second.value);
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(it->second.line) + ": " + e.what());
    }
    if (scenario && *scenario != from_text)
      throw ConfigError("config scenario '" + to_string(from_text) + "' conflicts with requested '" +
                        to_string(*scenario) + "'");
    chosen = from_text;
  }

  ExperimentConfig config = default_config(chosen);
  for (const auto& [key, entry] : entries) {
    try {
      key_table().at(key).set(config, entry.value);
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(entry.line) + ": " + key + ": " + e.what());
    }
  }
  try {
    config.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return config;
}

std::string canonical_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [name, spec] : key_table()) out += name + " = " + spec.get(config) + "\n";
  return out;
}

std::string content_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ExperimentConfig& config) { return content_hash(canonical_config(config)); }

}  // namespace bohm
