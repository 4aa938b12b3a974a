#include "antsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

namespace antsim {

using nlohmann::json;

namespace {

// Reads fields of one JSON object, remembering which keys were consumed so that
// anything left over can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) fail("", "must be an object");
  }

  std::string path(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const std::string p = key.empty() ? (prefix_.empty() ? "scenario" : prefix_) : path(key);
    throw ScenarioError(p + ": " + what);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(key, "must be a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(key, "must be finite");
    }
  }

  void seconds(const std::string& key, SimTime& out) {
    double s = to_seconds(out);
    number(key, s);
    out = from_seconds(s);
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "must be a boolean");
      out = v->get<bool>();
    }
  }

  void byte(const std::string& key, Byte& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "must be an integer byte");
      const auto n = v->get<std::int64_t>();
      if (n < 0 || n > 255) fail(key, "must lie in 0..255");
      out = static_cast<Byte>(n);
    }
  }

  void u64(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() &&
                                       v->get<std::int64_t>() < 0)) {
        fail(key, "must be a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }

  void vec3(const std::string& key, Vector3d& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != 3) fail(key, "must be an array of 3 numbers");
      for (int i = 0; i < 3; ++i) {
        if (!(*v)[i].is_number()) fail(key, "must be an array of 3 numbers");
        out[i] = (*v)[i].get<double>();
      }
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.contains(it.key())) fail(it.key(), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::set<std::string> seen_;
};

void read_codec(ObjectReader& r, CodecConfig& c) {
  r.byte("password", c.password);
  r.boolean("obfuscate", c.obfuscate);
  r.byte("keepalive", c.keepalive);
  r.finish();
}

void read_link(ObjectReader& r, LinkConfig& l) {
  r.seconds("noise_onset", l.noise_onset);
  r.number("noise_rate", l.noise_rate);
  r.number("drop_prob", l.drop_prob);
  r.seconds("latency", l.latency);
  r.number("range_max", l.range_max);
  r.number("distance", l.distance);
  r.u64("seed", l.seed);
  if (const json* v = r.find("alteration")) {
    if (!v->is_array()) r.fail("alteration", "must be an array of 256 integers");
    std::vector<int> table;
    for (const auto& e : *v) {
      if (!e.is_number_integer()) r.fail("alteration", "must be an array of 256 integers");
      table.push_back(e.get<int>());
    }
    try {
      l.alteration = AlterationMap::from_table(table);
    } catch (const std::invalid_argument& e) {
      r.fail("alteration", e.what());
    }
  }
  r.finish();
}

void read_tx(ObjectReader& r, TxConfig& t) {
  r.boolean("enabled", t.enabled);
  r.boolean("keepalive", t.keepalive);
  r.seconds("keepalive_period", t.keepalive_period);
  r.finish();
}

void read_rx(ObjectReader& r, RxSettings& x) {
  r.seconds("watchdog_timeout", x.watchdog_timeout);
  r.boolean("compensate", x.compensate);
  r.finish();
}

void read_robot(ObjectReader& r, RobotParams& p) {
  r.number("mass", p.mass);
  r.number("payload_max", p.payload_max);
  r.number("length", p.length);
  r.number("width", p.width);
  r.number("height", p.height);
  r.number("track", p.track);
  r.number("v_max", p.v_max);
  r.vec3("com", p.com);
  r.vec3("inertia", p.inertia);
  r.number("motor_tau", p.motor_tau);
  r.number("stride_length", p.stride_length);
  r.number("battery_capacity", p.battery_capacity);
  r.number("idle_power", p.idle_power);
  r.number("moving_power", p.moving_power);
  r.finish();
}

void read_script(ObjectReader& top, const json& arr, std::vector<ScriptEntry>& out) {
  if (!arr.is_array()) top.fail("script", "must be an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    ObjectReader r(arr[i], "script[" + std::to_string(i) + "]");
    ScriptEntry e{SimTime{0}, CommandMode::Stop};
    double t = -1.0;
    r.number("t", t);
    if (t < 0.0) r.fail("t", "required, must be >= 0");
    e.t = from_seconds(t);
    const json* mode = r.find("mode");
    if (mode == nullptr || !mode->is_string()) r.fail("mode", "required string");
    auto parsed = parse_mode_name(mode->get<std::string>());
    if (!parsed) r.fail("mode", "unknown mode '" + mode->get<std::string>() + "'");
    e.mode = *parsed;
    r.finish();
    out.push_back(e);
  }
}

}  // namespace

void Scenario::validate() const {
  auto wrap = [](auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(e.what());
    }
  };
  if (tick <= SimTime{0}) throw ScenarioError("tick: must be > 0");
  if (duration <= SimTime{0}) throw ScenarioError("duration: must be > 0");
  if (report_interval <= SimTime{0} || report_interval.count() % tick.count() != 0) {
    throw ScenarioError("report_interval: must be a positive multiple of tick");
  }
  if (codec.keepalive == codec.password) {
    throw ScenarioError("codec.keepalive: must differ from codec.password");
  }
  wrap([&] { link.validate(); });
  if (tx.keepalive_period <= SimTime{0}) throw ScenarioError("tx.keepalive_period: must be > 0");
  if (tx.keepalive && tx.keepalive_period >= link.noise_onset) {
    throw ScenarioError("tx.keepalive_period: must be shorter than link.noise_onset");
  }
  if (rx.watchdog_timeout <= SimTime{0}) throw ScenarioError("rx.watchdog_timeout: must be > 0");
  wrap([&] { robot.validate(); });
  wrap([&] { check_payload(payload, robot); });
  for (std::size_t i = 0; i < script.size(); ++i) {
    const std::string field = "script[" + std::to_string(i) + "].t";
    if (script[i].t >= duration) throw ScenarioError(field + ": must be < duration");
    if (i > 0 && script[i].t < script[i - 1].t) {
      throw ScenarioError(field + ": script times must be sorted ascending");
    }
  }
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  ObjectReader top(j, "");
  top.u64("seed", s.seed);
  s.link.seed = s.seed;
  top.seconds("duration", s.duration);
  top.seconds("tick", s.tick);
  top.seconds("report_interval", s.report_interval);
  top.number("payload", s.payload);
  if (const json* v = top.find("codec")) {
    ObjectReader r(*v, "codec");
    read_codec(r, s.codec);
  }
  if (const json* v = top.find("link")) {
    ObjectReader r(*v, "link");
    read_link(r, s.link);
  }
  if (const json* v = top.find("tx")) {
    ObjectReader r(*v, "tx");
    read_tx(r, s.tx);
  }
  if (const json* v = top.find("rx")) {
    ObjectReader r(*v, "rx");
    read_rx(r, s.rx);
  }
  if (const json* v = top.find("robot")) {
    ObjectReader r(*v, "robot");
    read_robot(r, s.robot);
  }
  if (const json* v = top.find("script")) read_script(top, *v, s.script);
  top.finish();
  s.tx.codec = s.codec;
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

json scenario_to_json(const Scenario& s) {
  json script = json::array();
  for (const auto& e : s.script) {
    script.push_back({{"t", to_seconds(e.t)}, {"mode", mode_name(e.mode)}});
  }
  json link = {{"noise_onset", to_seconds(s.link.noise_onset)},
               {"noise_rate", s.link.noise_rate},
               {"drop_prob", s.link.drop_prob},
               {"latency", to_seconds(s.link.latency)},
               {"range_max", s.link.range_max},
               {"distance", s.link.distance},
               {"seed", s.link.seed}};
  if (!s.link.alteration.is_identity()) {
    const auto& t = s.link.alteration.table();
    link["alteration"] = std::vector<int>(t.begin(), t.end());
  }
  const auto& r = s.robot;
  return {
      {"seed", s.seed},
      {"duration", to_seconds(s.duration)},
      {"tick", to_seconds(s.tick)},
      {"report_interval", to_seconds(s.report_interval)},
      {"payload", s.payload},
      {"codec",
       {{"password", s.codec.password},
        {"obfuscate", s.codec.obfuscate},
        {"keepalive", s.codec.keepalive}}},
      {"link", link},
      {"tx",
       {{"enabled", s.tx.enabled},
        {"keepalive", s.tx.keepalive},
        {"keepalive_period", to_seconds(s.tx.keepalive_period)}}},
      {"rx",
       {{"watchdog_timeout", to_seconds(s.rx.watchdog_timeout)},
        {"compensate", s.rx.compensate}}},
      {"robot",
       {{"mass", r.mass},
        {"payload_max", r.payload_max},
        {"length", r.length},
        {"width", r.width},
        {"height", r.height},
        {"track", r.track},
        {"v_max", r.v_max},
        {"com", {r.com.x(), r.com.y(), r.com.z()}},
        {"inertia", {r.inertia.x(), r.inertia.y(), r.inertia.z()}},
        {"motor_tau", r.motor_tau},
        {"stride_length", r.stride_length},
        {"battery_capacity", r.battery_capacity},
        {"idle_power", r.idle_power},
        {"moving_power", r.moving_power}}},
      {"script", script},
  };
}

}  // namespace antsim
