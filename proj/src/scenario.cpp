#include "csa/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace csa {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  int line = 0;  // header line
  std::vector<std::pair<std::string, Entry>> entries;  // file order
  bool used = false;
};

struct RawFile {
  std::string path;
  std::vector<std::pair<std::string, Section>> sections;  // file order

  [[noreturn]] void fail(int line, const std::string& message) const {
    std::ostringstream os;
    os << path << ':' << line << ": " << message;
    throw ScenarioError(os.str());
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ScenarioError(path + ": " + message);
  }

  Section* find(const std::string& name) {
    for (auto& [n, s] : sections)
      if (n == name) {
        s.used = true;
        return &s;
      }
    return nullptr;
  }
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

RawFile tokenize(const std::string& text, const std::string& path) {
  RawFile raw;
  raw.path = path;
  std::istringstream in(text);
  std::string line;
  Section* current = nullptr;
  std::string current_name;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') raw.fail(lineno, "unterminated section header");
      const std::string name = trim(std::string_view(body).substr(1, body.size() - 2));
      if (name.empty()) raw.fail(lineno, "empty section name");
      for (const auto& [n, s] : raw.sections)
        if (n == name) raw.fail(lineno, "section [" + name + "] appears twice");
      raw.sections.emplace_back(name, Section{lineno, {}, false});
      current = &raw.sections.back().second;
      current_name = name;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) raw.fail(lineno, "expected 'key = value'");
    if (!current) raw.fail(lineno, "key outside any section");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) raw.fail(lineno, "empty key");
    if (value.empty()) raw.fail(lineno, "key '" + key + "' has no value");
    for (const auto& [k, e] : current->entries)
      if (k == key)
        raw.fail(lineno, "duplicate key '" + key + "' in [" + current_name + "]");
    current->entries.emplace_back(key, Entry{value, lineno, false});
  }
  return raw;
}

class Reader {
 public:
  Reader(RawFile& raw, const std::string& name, Section* section, const char* hint = "")
      : raw_(raw), name_(name), section_(section), hint_(hint) {}

  bool present() const { return section_ != nullptr; }

  Entry* find(const std::string& key) {
    if (!section_) return nullptr;
    for (auto& [k, e] : section_->entries)
      if (k == key) {
        e.used = true;
        return &e;
      }
    return nullptr;
  }

  Entry& require(const std::string& key) {
    Entry* e = find(key);
    if (!e) {
      if (!section_) raw_.fail("missing required section [" + name_ + "]" + hint_);
      raw_.fail(section_->line,
                "[" + name_ + "] is missing required key '" + key + "'" + hint_);
    }
    return *e;
  }

  double number(const Entry& e, const std::string& key) {
    const char* begin = e.value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
      raw_.fail(e.line, "key '" + key + "' has a malformed number: '" + e.value + "'");
    return v;
  }

  double required_number(const std::string& key) { return number(require(key), key); }

  std::optional<double> optional_number(const std::string& key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    return number(*e, key);
  }

  // numeric with an inline range check so errors carry the key name
  double checked(const std::string& key, double value, int line, double lo, double hi,
                 bool lo_open = false) {
    const bool ok = (lo_open ? value > lo : value >= lo) && value <= hi;
    if (!ok) {
      std::ostringstream os;
      os << "key '" << key << "' = " << value << " is outside " << (lo_open ? '(' : '[')
         << lo << ", " << hi << ']';
      raw_.fail(line, os.str());
    }
    return value;
  }

  long long integer(const std::string& key, const Entry& e) {
    const double v = number(e, key);
    if (std::abs(v - std::round(v)) > 1e-9)
      raw_.fail(e.line, "key '" + key + "' must be an integer");
    return static_cast<long long>(std::llround(v));
  }

  bool boolean(const std::string& key, const Entry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    raw_.fail(e.line, "key '" + key + "' must be 'true' or 'false'");
  }

  void finish() {
    if (!section_) return;
    for (const auto& [k, e] : section_->entries)
      if (!e.used) raw_.fail(e.line, "unknown key '" + k + "' in [" + name_ + "]");
  }

 private:
  RawFile& raw_;
  std::string name_;
  Section* section_;
  std::string hint_;
};

LinkGeometry read_link(RawFile& raw, const std::string& name, Section* section,
                       double default_alpha, const char* hint = "") {
  Reader r(raw, name, section, hint);
  LinkGeometry link;
  {
    Entry& e = r.require("tx_power_mw");
    link.tx_power_mw = r.number(e, "tx_power_mw");
    if (!(link.tx_power_mw > 0.0)) raw.fail(e.line, "key 'tx_power_mw' must be > 0");
  }
  {
    Entry& e = r.require("distance_m");
    link.distance_m = r.number(e, "distance_m");
    if (!(link.distance_m > 0.0)) raw.fail(e.line, "key 'distance_m' must be > 0");
  }
  link.path_loss_exponent = default_alpha;
  if (Entry* e = r.find("path_loss_exponent")) {
    link.path_loss_exponent = r.number(*e, "path_loss_exponent");
    r.checked("path_loss_exponent", link.path_loss_exponent, e->line, 2.0, 16.0);
  }
  link.fading_param = 1.0;
  if (Entry* e = r.find("fading_param")) {
    link.fading_param = r.number(*e, "fading_param");
    if (!(link.fading_param > 0.0)) raw.fail(e->line, "key 'fading_param' must be > 0");
  }
  r.finish();
  return link;
}

ChannelParams read_channel(RawFile& raw, const std::string& name, Section* section) {
  Reader r(raw, name, section);
  ChannelParams ch;
  ch.sinr_threshold = db_to_linear(r.required_number("sinr_threshold_db"));
  ch.noise_power_mw = db_to_linear(r.required_number("noise_power_dbm"));
  r.finish();
  return ch;
}

std::vector<double> parse_sweep_values(RawFile& raw, const std::string& key,
                                       const Entry& e) {
  std::vector<double> out;
  auto parse_one = [&](const std::string& token) {
    const std::string t = trim(token);
    const char* begin = t.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (t.empty() || end == begin || *end != '\0' || !std::isfinite(v))
      raw.fail(e.line, "sweep key '" + key + "' has a malformed number: '" + t + "'");
    return v;
  };
  const auto colons = std::count(e.value.begin(), e.value.end(), ':');
  if (colons == 2) {
    // inclusive range first:last:step
    std::istringstream in(e.value);
    std::string a, b, s;
    std::getline(in, a, ':');
    std::getline(in, b, ':');
    std::getline(in, s);
    const double first = parse_one(a);
    const double last = parse_one(b);
    const double step = parse_one(s);
    if (!(step > 0.0)) raw.fail(e.line, "sweep key '" + key + "' needs step > 0");
    if (last < first) raw.fail(e.line, "sweep key '" + key + "' needs last >= first");
    const long long count = std::llround(std::floor((last - first) / step + 1e-9));
    if (count > 1'000'000) raw.fail(e.line, "sweep key '" + key + "' expands to too many values");
    for (long long i = 0; i <= count; ++i) out.push_back(std::min(first + double(i) * step, last));
  } else if (colons == 0) {
    std::istringstream in(e.value);
    std::string token;
    while (std::getline(in, token, ',')) out.push_back(parse_one(token));
    if (out.empty()) raw.fail(e.line, "sweep key '" + key + "' has no values");
  } else {
    raw.fail(e.line, "sweep key '" + key + "' must be 'v1,v2,...' or 'first:last:step'");
  }
  return out;
}

constexpr const char* kCrossLinkHint =
    "; see README.md, section \"Cross-link geometry\"";

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& path_for_errors) {
  RawFile raw = tokenize(text, path_for_errors);
  Scenario sc;
  sc.source_path = path_for_errors;

  // [topology]
  Section* topo_section = raw.find("topology");
  Reader topo(raw, "topology", topo_section);
  if (!topo.present()) raw.fail("missing required section [topology]");
  {
    Entry& e = topo.require("n_secondary");
    const long long n = topo.integer("n_secondary", e);
    if (n < 0 || n > 10000) raw.fail(e.line, "key 'n_secondary' must lie in [0, 10000]");
    sc.topology.n_secondary = int(n);
  }
  double default_alpha = 4.0;
  if (Entry* e = topo.find("path_loss_exponent")) {
    default_alpha = topo.number(*e, "path_loss_exponent");
    topo.checked("path_loss_exponent", default_alpha, e->line, 2.0, 16.0);
  }
  topo.finish();

  sc.topology.primary_link =
      read_link(raw, "topology.primary_link", raw.find("topology.primary_link"), default_alpha);
  sc.topology.primary_channel =
      read_channel(raw, "topology.primary_channel", raw.find("topology.primary_channel"));

  if (sc.topology.n_secondary > 0) {
    Section* s_link = raw.find("topology.secondary_link");
    if (!s_link)
      raw.fail("missing required section [topology.secondary_link] (n_secondary >= 1)");
    sc.topology.secondary_link =
        read_link(raw, "topology.secondary_link", s_link, default_alpha);

    Section* s_to_p = raw.find("topology.secondary_to_primary_rx");
    if (!s_to_p)
      raw.fail(std::string("missing required section [topology.secondary_to_primary_rx]") +
               kCrossLinkHint);
    sc.topology.secondary_to_primary_rx =
        read_link(raw, "topology.secondary_to_primary_rx", s_to_p, default_alpha, kCrossLinkHint);

    Section* p_to_s = raw.find("topology.primary_to_secondary_rx");
    if (!p_to_s)
      raw.fail(std::string("missing required section [topology.primary_to_secondary_rx]") +
               kCrossLinkHint);
    sc.topology.primary_to_secondary_rx =
        read_link(raw, "topology.primary_to_secondary_rx", p_to_s, default_alpha, kCrossLinkHint);

    if (Section* cross = raw.find("topology.secondary_cross")) {
      sc.topology.secondary_cross =
          read_link(raw, "topology.secondary_cross", cross, default_alpha, kCrossLinkHint);
    } else {
      sc.topology.secondary_cross = sc.topology.secondary_link;
    }

    Section* s_ch = raw.find("topology.secondary_channel");
    if (!s_ch)
      raw.fail("missing required section [topology.secondary_channel] (n_secondary >= 1)");
    sc.topology.secondary_channel = read_channel(raw, "topology.secondary_channel", s_ch);
  }

  // [access]
  Section* access_section = raw.find("access");
  Reader access(raw, "access", access_section);
  if (!access.present()) raw.fail("missing required section [access]");
  {
    Entry& e = access.require("lambda");
    sc.access.arrival_rate =
        access.checked("lambda", access.number(e, "lambda"), e.line, 0.0, 1.0);
  }
  {
    Entry& e = access.require("q_pr");
    sc.access.primary_access_prob =
        access.checked("q_pr", access.number(e, "q_pr"), e.line, 0.0, 1.0);
  }
  {
    Entry& e = access.require("q_s");
    sc.access.secondary_access_prob =
        access.checked("q_s", access.number(e, "q_s"), e.line, 0.0, 1.0);
  }
  access.finish();

  // [sim]
  Reader sim(raw, "sim", raw.find("sim"));
  if (sim.present()) {
    if (Entry* e = sim.find("horizon")) {
      const long long v = sim.integer("horizon", *e);
      if (v < 1) raw.fail(e->line, "key 'horizon' must be >= 1");
      sc.sim.horizon = std::uint64_t(v);
    }
    if (Entry* e = sim.find("warmup")) {
      const long long v = sim.integer("warmup", *e);
      if (v < 0) raw.fail(e->line, "key 'warmup' must be >= 0");
      sc.sim.warmup = std::uint64_t(v);
    }
    if (Entry* e = sim.find("replications")) {
      const long long v = sim.integer("replications", *e);
      if (v < 1 || v > 4096) raw.fail(e->line, "key 'replications' must lie in [1, 4096]");
      sc.sim.replications = int(v);
    }
    if (Entry* e = sim.find("seed")) {
      const long long v = sim.integer("seed", *e);
      if (v < 0) raw.fail(e->line, "key 'seed' must be >= 0");
      sc.sim.seed = std::uint64_t(v);
    }
    if (Entry* e = sim.find("record_trace"))
      sc.sim.record_trace = sim.boolean("record_trace", *e);
    sim.finish();
  }

  // [grid]
  Reader grid(raw, "grid", raw.find("grid"));
  if (grid.present()) {
    if (Entry* e = grid.find("coarse_step"))
      sc.grid.coarse_step =
          grid.checked("coarse_step", grid.number(*e, "coarse_step"), e->line, 0.0, 0.5, true);
    if (Entry* e = grid.find("refine_factor")) {
      const long long v = grid.integer("refine_factor", *e);
      if (v < 2 || v > 64) raw.fail(e->line, "key 'refine_factor' must lie in [2, 64]");
      sc.grid.refine_factor = int(v);
    }
    if (Entry* e = grid.find("refine_rounds")) {
      const long long v = grid.integer("refine_rounds", *e);
      if (v < 0 || v > 8) raw.fail(e->line, "key 'refine_rounds' must lie in [0, 8]");
      sc.grid.refine_rounds = int(v);
    }
    grid.finish();
  }

  // [constraints]
  Reader constraints(raw, "constraints", raw.find("constraints"));
  if (constraints.present()) {
    if (Entry* e = constraints.find("mu_min")) {
      const double v = constraints.number(*e, "mu_min");
      if (!(v >= 0.0)) raw.fail(e->line, "key 'mu_min' must be >= 0");
      sc.mu_min = v;
    }
    if (Entry* e = constraints.find("delta_max")) {
      const double v = constraints.number(*e, "delta_max");
      if (!(v > 0.0)) raw.fail(e->line, "key 'delta_max' must be > 0");
      sc.delta_max = v;
    }
    constraints.finish();
  }

  // [sweep], axis order follows the file
  if (Section* sweep_section = raw.find("sweep")) {
    for (auto& [key, entry] : sweep_section->entries) {
      entry.used = true;
      SweepAxis axis;
      if (key == "lambda") axis.var = SweepVar::kLambda;
      else if (key == "q_pr") axis.var = SweepVar::kPrimaryAccess;
      else if (key == "q_s") axis.var = SweepVar::kSecondaryAccess;
      else if (key == "n_secondary") axis.var = SweepVar::kSecondaryCount;
      else raw.fail(entry.line, "unknown key '" + key + "' in [sweep]");
      axis.values = parse_sweep_values(raw, key, entry);
      for (double v : axis.values) {
        if (axis.var == SweepVar::kSecondaryCount) {
          if (!(v >= 0.0) || std::abs(v - std::round(v)) > 1e-9 || v > 10000.0)
            raw.fail(entry.line, "sweep key 'n_secondary' needs integers in [0, 10000]");
        } else if (!(v >= 0.0) || !(v <= 1.0)) {
          raw.fail(entry.line, "sweep key '" + key + "' needs values in [0, 1]");
        }
      }
      sc.sweep_axes.push_back(std::move(axis));
    }
  }

  for (const auto& [name, section] : raw.sections)
    if (!section.used) raw.fail(section.line, "unknown section [" + name + "]");

  // backstop: the struct-level validators catch anything the per-key checks missed
  try {
    validate(sc.topology);
    validate(sc.access);
    validate(sc.sim);
    validate(sc.grid);
  } catch (const std::invalid_argument& err) {
    raw.fail(err.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

}  // namespace csa
