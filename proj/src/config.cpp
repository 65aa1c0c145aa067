#include "matdist/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace matdist {

namespace {

struct Value {
  enum class Kind { Number, String, Bool, NumberArray, StringArray } kind = Kind::Number;
  double num = 0.0;
  std::string str;
  bool flag = false;
  std::vector<double> nums;
  std::vector<std::string> strs;
  int line = 0;
  bool used = false;
};

using FlatMap = std::map<std::string, Value>;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool parse_number(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

Value parse_value(const std::string& raw, int line) {
  Value v;
  v.line = line;
  const std::string s = trim(raw);
  if (s.empty()) throw ConfigError("missing value", line);

  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"')
      throw ConfigError("unterminated string: " + s, line);
    v.kind = Value::Kind::String;
    v.str = s.substr(1, s.size() - 2);
    return v;
  }
  if (s == "true" || s == "false") {
    v.kind = Value::Kind::Bool;
    v.flag = s == "true";
    return v;
  }
  if (s.front() == '[') {
    if (s.back() != ']') throw ConfigError("unterminated array: " + s, line);
    const std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string item;
    bool first = true;
    while (std::getline(ss, item, ',')) {
      const std::string it = trim(item);
      if (it.empty()) {
        if (first && trim(body).empty()) break;  // empty array
        throw ConfigError("empty array element", line);
      }
      if (it.front() == '"') {
        if (it.size() < 2 || it.back() != '"')
          throw ConfigError("unterminated string in array: " + it, line);
        v.kind = Value::Kind::StringArray;
        v.strs.push_back(it.substr(1, it.size() - 2));
      } else {
        double num = 0.0;
        if (!parse_number(it, num))
          throw ConfigError("bad array element '" + it + "'", line);
        v.kind = Value::Kind::NumberArray;
        v.nums.push_back(num);
      }
      first = false;
    }
    if (!v.strs.empty() && !v.nums.empty())
      throw ConfigError("mixed array element types", line);
    if (v.strs.empty() && v.nums.empty()) v.kind = Value::Kind::NumberArray;
    return v;
  }
  if (parse_number(s, v.num)) {
    v.kind = Value::Kind::Number;
    return v;
  }
  throw ConfigError("cannot parse value '" + s + "'", line);
}

FlatMap parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);

  FlatMap map;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header: " + s, line_no);
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", line_no);
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value', got '" + s + "'", line_no);
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key", line_no);
    const std::string full = section.empty() ? key : section + "." + key;
    if (map.count(full)) throw ConfigError("duplicate key '" + full + "'", line_no);
    map.emplace(full, parse_value(s.substr(eq + 1), line_no));
  }
  return map;
}

class Extractor {
 public:
  explicit Extractor(FlatMap map) : map_(std::move(map)) {}

  bool has(const std::string& key) const { return map_.count(key) > 0; }

  double number(const std::string& key, double fallback) {
    const Value* v = take(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::Number)
      throw ConfigError("'" + key + "' must be a number", v->line);
    return v->num;
  }

  int integer(const std::string& key, int fallback) {
    const double d = number(key, static_cast<double>(fallback));
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
      throw ConfigError("'" + key + "' must be an integer", line_of(key));
    return i;
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const Value* v = take(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::String)
      throw ConfigError("'" + key + "' must be a quoted string", v->line);
    return v->str;
  }

  bool boolean(const std::string& key, bool fallback) {
    const Value* v = take(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::Bool)
      throw ConfigError("'" + key + "' must be true or false", v->line);
    return v->flag;
  }

  Vec3 vec3(const std::string& key, const Vec3& fallback) {
    const Value* v = take(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::NumberArray || v->nums.size() != 3)
      throw ConfigError("'" + key + "' must be an array of three numbers", v->line);
    return Vec3(v->nums[0], v->nums[1], v->nums[2]);
  }

  std::vector<std::string> strings(const std::string& key,
                                   const std::vector<std::string>& fallback) {
    const Value* v = take(key);
    if (!v) return fallback;
    if (v->kind == Value::Kind::NumberArray && v->nums.empty()) return {};
    if (v->kind != Value::Kind::StringArray)
      throw ConfigError("'" + key + "' must be an array of strings", v->line);
    return v->strs;
  }

  /// Every key under `prefix.` as a number map (law parameters).
  LawParams number_map(const std::string& prefix) {
    LawParams out;
    for (auto& [key, value] : map_) {
      if (key.rfind(prefix + ".", 0) != 0) continue;
      if (value.kind != Value::Kind::Number)
        throw ConfigError("'" + key + "' must be a number", value.line);
      value.used = true;
      out[key.substr(prefix.size() + 1)] = value.num;
    }
    return out;
  }

  void reject_unused() const {
    for (const auto& [key, value] : map_)
      if (!value.used) throw ConfigError("unknown config key '" + key + "'", value.line);
  }

 private:
  const Value* take(const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }
  int line_of(const std::string& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? 0 : it->second.line;
  }

  FlatMap map_;
};

AxisRange pinned_or_range(Extractor& ex, const std::string& axis, const AxisRange& fallback,
                          bool allow_pin) {
  AxisRange r = fallback;
  const bool has_range = ex.has("grid." + axis + "_min") || ex.has("grid." + axis + "_max") ||
                         ex.has("grid." + axis + "_count");
  const bool has_pin = allow_pin && ex.has("grid." + axis);
  if (has_range && has_pin)
    throw ConfigError("grid: give either '" + axis + "' or '" + axis + "_min/_max/_count'", 0);
  if (has_pin) {
    const double v = ex.number("grid." + axis, 0.0);
    return AxisRange{v, v, 1};
  }
  r.lo = ex.number("grid." + axis + "_min", fallback.lo);
  r.hi = ex.number("grid." + axis + "_max", fallback.hi);
  r.count = ex.integer("grid." + axis + "_count", fallback.count);
  if (r.count < 1) throw ConfigError("grid: '" + axis + "_count' must be >= 1", 0);
  return r;
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  Extractor ex(parse_file(path));
  RunConfig cfg;

  cfg.law_name = ex.string("law.name", "");
  if (cfg.law_name.empty()) throw ConfigError("missing required key 'law.name'", 0);
  cfg.law_params = ex.number_map("law.params");

  cfg.t = pinned_or_range(ex, "t", cfg.t, true);
  cfg.x1 = pinned_or_range(ex, "x1", cfg.x1, true);
  cfg.x2 = pinned_or_range(ex, "x2", cfg.x2, true);
  cfg.x3 = pinned_or_range(ex, "x3", cfg.x3, true);

  cfg.sampling.n_f = ex.integer("sampling.n_f", cfg.sampling.n_f);
  cfg.sampling.seed = static_cast<std::uint64_t>(
      ex.number("sampling.seed", static_cast<double>(cfg.sampling.seed)));
  cfg.sampling.spread = ex.number("sampling.spread", cfg.sampling.spread);
  cfg.sampling.tau_rank = ex.number("sampling.tau_rank", cfg.sampling.tau_rank);
  cfg.sampling.tau_accept = ex.number("sampling.tau_accept", cfg.sampling.tau_accept);
  cfg.sampling.n_validation = ex.integer("sampling.n_validation", cfg.sampling.n_validation);

  cfg.iso.tau_iso = ex.number("sampling.tau_iso", cfg.iso.tau_iso);
  cfg.iso.n_starts = ex.integer("sampling.n_starts", cfg.iso.n_starts);
  cfg.iso.max_iters = ex.integer("sampling.max_iters", cfg.iso.max_iters);
  cfg.iso.n_f = cfg.sampling.n_f;
  cfg.iso.n_validation =
      cfg.sampling.n_validation > 0 ? cfg.sampling.n_validation : cfg.sampling.n_f;
  cfg.iso.spread = cfg.sampling.spread;
  cfg.iso.seed = cfg.sampling.seed;

  if (!(cfg.sampling.spread > 0.0) || !(cfg.sampling.tau_rank > 0.0) ||
      !(cfg.sampling.tau_accept > 0.0) || !(cfg.iso.tau_iso > 0.0))
    throw ConfigError("sampling: spread and tolerances must be positive", 0);
  if (cfg.sampling.n_f < 1) throw ConfigError("sampling: n_f must be >= 1", 0);

  cfg.isomorphism.probe = ex.boolean("isomorphism.probe", false);
  cfg.isomorphism.from.t = ex.number("isomorphism.from_t", 0.0);
  cfg.isomorphism.from.x = ex.vec3("isomorphism.from_x", Vec3::Zero());
  cfg.isomorphism.to.t = ex.number("isomorphism.to_t", 0.0);
  cfg.isomorphism.to.x = ex.vec3("isomorphism.to_x", Vec3::Zero());

  const std::string variant = ex.string("trace.variant", "state_t");
  if (variant == "state_t")
    cfg.trace.variant = LeafVariant::StateT;
  else if (variant == "body_material")
    cfg.trace.variant = LeafVariant::BodyMaterial;
  else
    throw ConfigError("trace.variant must be 'state_t' or 'body_material'", 0);
  cfg.trace.seed.t = ex.number("trace.seed_t", 0.0);
  cfg.trace.seed.x = ex.vec3("trace.seed_x", Vec3::Zero());
  cfg.trace.steps = ex.integer("trace.steps", cfg.trace.steps);
  cfg.trace.step_size = ex.number("trace.step_size", cfg.trace.step_size);
  if (cfg.trace.steps < 1 || !(cfg.trace.step_size > 0.0))
    throw ConfigError("trace: steps must be >= 1 and step_size positive", 0);

  cfg.remodel.process_csv = ex.string("remodel.process_csv", "");
  cfg.remodel.particle = ex.vec3("remodel.particle", Vec3::Zero());
  cfg.remodel.rho0 = ex.number("remodel.rho0", 1.0);

  cfg.out_dir = ex.string("output.dir", cfg.out_dir);
  const std::vector<std::string> formats = ex.strings("output.formats", {"json", "csv"});
  cfg.emit_json = false;
  cfg.emit_csv = false;
  for (const std::string& f : formats) {
    if (f == "json")
      cfg.emit_json = true;
    else if (f == "csv")
      cfg.emit_csv = true;
    else
      throw ConfigError("output.formats: unknown format '" + f + "'", 0);
  }
  if (formats.empty()) throw ConfigError("output.formats must not be empty", 0);

  ex.reject_unused();
  return cfg;
}

Grid make_grid(const RunConfig& cfg) {
  Grid g;
  g.t_values = Grid::linspace(cfg.t.lo, cfg.t.hi, cfg.t.count);
  g.x1_values = Grid::linspace(cfg.x1.lo, cfg.x1.hi, cfg.x1.count);
  g.x2_values = Grid::linspace(cfg.x2.lo, cfg.x2.hi, cfg.x2.count);
  g.x3_values = Grid::linspace(cfg.x3.lo, cfg.x3.hi, cfg.x3.count);
  return g;
}

ConstitutiveLaw law_from_config(const RunConfig& cfg) {
  return make_builtin(cfg.law_name, cfg.law_params);
}

}  // namespace matdist
