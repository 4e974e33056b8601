#include "rvsim/harness/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace rvsim {

namespace {

using json = nlohmann::ordered_json;

uint64_t as_u64(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer() && v.get<int64_t>() >= 0) return v.get<uint64_t>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    size_t used = 0;
    try {
      const uint64_t x = std::stoull(s, &used, 0);
      if (used == s.size()) return x;
    } catch (const std::exception&) {
    }
  }
  throw std::runtime_error("config key '" + key + "' expects a non-negative integer");
}

unsigned as_unsigned(const json& v, const std::string& key) {
  const uint64_t x = as_u64(v, key);
  if (x > 0xffffffffu) throw std::runtime_error("config key '" + key + "' out of range");
  return static_cast<unsigned>(x);
}

bool as_bool(const json& v, const std::string& key) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "on" || s == "true") return true;
    if (s == "off" || s == "false") return false;
  }
  throw std::runtime_error("config key '" + key + "' expects a boolean");
}

double as_double(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  throw std::runtime_error("config key '" + key + "' expects a number");
}

std::string as_string(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  throw std::runtime_error("config key '" + key + "' expects a string");
}

struct Key {
  std::string name;  // section.key
  std::function<json(const SimConfig&)> get;
  std::function<void(SimConfig&, const json&, const std::string&)> set;
};

#define RVSIM_UNSIGNED(NAME, FIELD)                                                          \
  Key {                                                                                      \
    NAME, [](const SimConfig& c) { return json(c.FIELD); },                                  \
        [](SimConfig& c, const json& v, const std::string& k) { c.FIELD = as_unsigned(v, k); } \
  }
#define RVSIM_U64(NAME, FIELD)                                                           \
  Key {                                                                                  \
    NAME, [](const SimConfig& c) { return json(c.FIELD); },                              \
        [](SimConfig& c, const json& v, const std::string& k) { c.FIELD = as_u64(v, k); } \
  }
#define RVSIM_BOOL(NAME, FIELD)                                                           \
  Key {                                                                                   \
    NAME, [](const SimConfig& c) { return json(c.FIELD); },                               \
        [](SimConfig& c, const json& v, const std::string& k) { c.FIELD = as_bool(v, k); } \
  }
#define RVSIM_DOUBLE(NAME, FIELD)                                                           \
  Key {                                                                                     \
    NAME, [](const SimConfig& c) { return json(c.FIELD); },                                 \
        [](SimConfig& c, const json& v, const std::string& k) { c.FIELD = as_double(v, k); } \
  }
#define RVSIM_STRING(NAME, FIELD)                                                           \
  Key {                                                                                     \
    NAME, [](const SimConfig& c) { return json(c.FIELD); },                                 \
        [](SimConfig& c, const json& v, const std::string& k) { c.FIELD = as_string(v, k); } \
  }

Key policy_key(std::string name, CacheConfig MemSysConfig::*cache) {
  return Key{
      std::move(name),
      [cache](const SimConfig& c) {
        return json((c.core.mem.*cache).policy == ReplacementPolicy::Plru ? "plru" : "random");
      },
      [cache](SimConfig& c, const json& v, const std::string& k) {
        const std::string s = as_string(v, k);
        if (s == "plru") {
          (c.core.mem.*cache).policy = ReplacementPolicy::Plru;
        } else if (s == "random") {
          (c.core.mem.*cache).policy = ReplacementPolicy::Random;
        } else {
          throw std::runtime_error("config key '" + k + "' expects \"plru\" or \"random\"");
        }
      }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      RVSIM_BOOL("isa.ext_m", core.isa.ext_m),
      RVSIM_BOOL("isa.ext_a", core.isa.ext_a),
      RVSIM_BOOL("isa.ext_c", core.isa.ext_c),
      RVSIM_BOOL("isa.strict_csr", core.isa.strict_csr),
      RVSIM_BOOL("isa.counter_gating", core.isa.counter_gating),

      RVSIM_U64("icache.size", core.mem.icache.size_bytes),
      RVSIM_UNSIGNED("icache.ways", core.mem.icache.ways),
      RVSIM_UNSIGNED("icache.line", core.mem.icache.line_bytes),
      RVSIM_UNSIGNED("icache.latency", core.mem.icache.latency),
      policy_key("icache.policy", &MemSysConfig::icache),
      RVSIM_U64("icache.seed", core.mem.icache.seed),

      RVSIM_U64("dcache.size", core.mem.dcache.size_bytes),
      RVSIM_UNSIGNED("dcache.ways", core.mem.dcache.ways),
      RVSIM_UNSIGNED("dcache.line", core.mem.dcache.line_bytes),
      RVSIM_UNSIGNED("dcache.latency", core.mem.dcache.latency),
      policy_key("dcache.policy", &MemSysConfig::dcache),
      RVSIM_U64("dcache.seed", core.mem.dcache.seed),

      RVSIM_UNSIGNED("tlb.itlb_entries", core.mem.itlb_entries),
      RVSIM_UNSIGNED("tlb.dtlb_entries", core.mem.dtlb_entries),

      RVSIM_UNSIGNED("memory.first_beat", core.mem.backend.first_beat),
      RVSIM_UNSIGNED("memory.per_beat", core.mem.backend.per_beat),
      RVSIM_UNSIGNED("memory.bus_bytes", core.mem.backend.bus_bytes),
      Key{"memory.uncached",
          [](const SimConfig& c) {
            json a = json::array();
            for (const auto& r : c.core.mem.uncached) a.push_back({{"base", r.base}, {"size", r.size}});
            return a;
          },
          [](SimConfig& c, const json& v, const std::string& k) {
            if (!v.is_array()) throw std::runtime_error("config key '" + k + "' expects an array");
            c.core.mem.uncached.clear();
            for (const auto& r : v) {
              if (!r.is_object() || !r.contains("base") || !r.contains("size")) {
                throw std::runtime_error("config key '" + k + "' entries need base and size");
              }
              c.core.mem.uncached.push_back({as_u64(r["base"], k), as_u64(r["size"], k)});
            }
          }},

      RVSIM_UNSIGNED("predictor.bht_entries", core.frontend.predictor.bht_entries),
      RVSIM_UNSIGNED("predictor.btb_entries", core.frontend.predictor.btb_entries),
      RVSIM_UNSIGNED("predictor.ras_depth", core.frontend.predictor.ras_depth),
      Key{"predictor.bht_init",
          [](const SimConfig& c) { return json(c.core.frontend.predictor.bht_init); },
          [](SimConfig& c, const json& v, const std::string& k) {
            const unsigned x = as_unsigned(v, k);
            if (x > 3) throw std::runtime_error("config key '" + k + "' must be 0..3");
            c.core.frontend.predictor.bht_init = static_cast<uint8_t>(x);
          }},
      Key{"predictor.mode",
          [](const SimConfig& c) {
            return json(c.core.frontend.predictor.mode == PredictorMode::Default ? "default"
                                                                                 : "never-taken");
          },
          [](SimConfig& c, const json& v, const std::string& k) {
            const std::string s = as_string(v, k);
            if (s == "default") {
              c.core.frontend.predictor.mode = PredictorMode::Default;
            } else if (s == "never-taken") {
              c.core.frontend.predictor.mode = PredictorMode::NeverTaken;
            } else {
              throw std::runtime_error("config key '" + k +
                                       "' expects \"default\" or \"never-taken\"");
            }
          }},

      RVSIM_UNSIGNED("frontend.fq_depth", core.frontend.fq_depth),
      RVSIM_UNSIGNED("frontend.redirect_delay", core.frontend.redirect_delay),

      RVSIM_UNSIGNED("backend.rob_entries", core.backend.rob_entries),
      RVSIM_UNSIGNED("backend.store_buffer_depth", core.backend.store_buffer_depth),
      RVSIM_UNSIGNED("backend.issue_queue_depth", core.backend.issue_queue_depth),
      RVSIM_BOOL("backend.dual_retire", core.backend.dual_retire),
      RVSIM_UNSIGNED("backend.alu_latency", core.backend.alu_latency),
      RVSIM_UNSIGNED("backend.mul_latency", core.backend.mul_latency),
      RVSIM_UNSIGNED("backend.wfi_budget", core.backend.wfi_budget),

      RVSIM_STRING("energy.table", energy_table),
      RVSIM_DOUBLE("energy.vdd", op.vdd),
      RVSIM_DOUBLE("energy.freq", op.freq_mhz),
      RVSIM_DOUBLE("energy.fbb", op.fbb),
      Key{"energy.profile",
          [](const SimConfig& c) {
            return json(c.energy_profile == EnergyProfile::PerClass ? "per-class" : "igemm");
          },
          [](SimConfig& c, const json& v, const std::string& k) {
            const std::string s = as_string(v, k);
            if (s == "per-class") {
              c.energy_profile = EnergyProfile::PerClass;
            } else if (s == "igemm") {
              c.energy_profile = EnergyProfile::Igemm;
            } else {
              throw std::runtime_error("config key '" + k + "' expects \"per-class\" or \"igemm\"");
            }
          }},

      RVSIM_U64("run.max_cycles", max_cycles),
      RVSIM_BOOL("run.lockstep", lockstep),
      RVSIM_STRING("run.trace", trace_path),
  };
  return k;
}

#undef RVSIM_UNSIGNED
#undef RVSIM_U64
#undef RVSIM_BOOL
#undef RVSIM_DOUBLE
#undef RVSIM_STRING

const Key& find_key(const std::string& name) {
  for (const Key& k : keys()) {
    if (k.name == name) return k;
  }
  throw std::runtime_error("unknown config key '" + name + "'");
}

}  // namespace

SimConfig SimConfig::parse(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("config: top level must be an object");
  SimConfig c;
  for (const auto& [section, body] : doc.items()) {
    if (!body.is_object()) throw std::runtime_error("config section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      const std::string name = section + "." + key;
      find_key(name).set(c, value, name);
    }
  }
  return c;
}

SimConfig SimConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void SimConfig::set(std::string_view assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw std::runtime_error("expected key=value, got '" + std::string(assignment) + "'");
  }
  const std::string name(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;  // bare strings
  find_key(name).set(*this, value, name);
}

std::string SimConfig::to_json() const {
  json doc = json::object();
  for (const Key& k : keys()) {
    const size_t dot = k.name.find('.');
    doc[k.name.substr(0, dot)][k.name.substr(dot + 1)] = k.get(*this);
  }
  return doc.dump(2);
}

void SimConfig::validate() const {
  core.mem.icache.validate("icache");
  core.mem.dcache.validate("dcache");
  if (core.mem.itlb_entries == 0 || core.mem.dtlb_entries == 0) {
    throw std::invalid_argument("TLBs need at least one entry");
  }
  const auto& b = core.mem.backend;
  if (b.bus_bytes == 0 || (b.bus_bytes & (b.bus_bytes - 1)) != 0 ||
      b.bus_bytes > core.mem.icache.line_bytes || b.bus_bytes > core.mem.dcache.line_bytes) {
    throw std::invalid_argument("memory.bus_bytes must be a power of two no wider than a line");
  }
  core.frontend.predictor.validate();
  if (core.frontend.fq_depth < 2) throw std::invalid_argument("frontend.fq_depth must be at least 2");
  if (core.frontend.redirect_delay == 0) {
    throw std::invalid_argument("frontend.redirect_delay must be positive");
  }
  core.backend.validate();
  if (max_cycles == 0) throw std::invalid_argument("run.max_cycles must be positive");
  double fmax = 0;
  try {
    fmax = fmax_mhz(op.vdd);
  } catch (const std::out_of_range& e) {
    throw std::invalid_argument(e.what());
  }
  if (op.freq_mhz < 0 || op.freq_mhz > fmax) {
    throw std::invalid_argument("energy.freq exceeds fmax(" + std::to_string(op.vdd) + " V)");
  }
}

}  // namespace rvsim
