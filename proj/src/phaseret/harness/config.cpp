#include "phaseret/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace phaseret::harness {

namespace {

using nlohmann::json;

struct MethodEntry {
  Method method;
  const char* name;
};

constexpr MethodEntry kMethods[] = {
    {Method::bpnn, "bpnn"}, {Method::piecewise_bpnn, "piecewise-bpnn"}, {Method::fcnn_grid, "fcnn-grid"},
    {Method::kk, "kk"},     {Method::aaa_net, "aaa-net"},               {Method::music, "music"},
    {Method::linear_bp, "linear-bp"},
};

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  fail(Errc::invalid_argument, "config " + where + ": " + msg);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(where, "expected an object");
  for (const auto& item : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; })) {
      bad(where, "unknown key '" + item.key() + "'");
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(where + "." + key, e.what());
  }
}

// Non-negative integers arrive as JSON numbers; reject negatives and fractions.
void read_size(const json& obj, const char* key, std::size_t& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) bad(where + "." + key, "expected a non-negative integer");
  out = v.get<std::size_t>();
}

void read_sizes(const json& obj, const char* key, std::vector<std::size_t>& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_array()) bad(where + "." + key, "expected an array");
  out.clear();
  for (const json& e : v) {
    if (!e.is_number_integer() || e.get<long long>() < 0) bad(where + "." + key, "expected non-negative integers");
    out.push_back(e.get<std::size_t>());
  }
}

void read_seed(const json& obj, const char* key, std::uint64_t& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
    bad(where + "." + key, "expected a non-negative integer");
  }
  out = v.get<std::uint64_t>();
}

void read_bpnn(const json& obj, bpnn::BpnnConfig& c, const std::string& where, bool allow_segments) {
  if (allow_segments) {
    check_keys(obj, where, {"roots", "segments", "hidden", "dropout", "learning_rate", "epochs", "eval_every"});
  } else {
    check_keys(obj, where, {"roots", "hidden", "dropout", "learning_rate", "epochs", "eval_every"});
  }
  read_size(obj, "roots", c.roots, where);
  if (allow_segments) read_size(obj, "segments", c.segments, where);
  read_sizes(obj, "hidden", c.hidden, where);
  read(obj, "dropout", c.dropout, where);
  read(obj, "learning_rate", c.learning_rate, where);
  read_size(obj, "epochs", c.epochs, where);
  read_size(obj, "eval_every", c.eval_every, where);
}

void read_sampling(const json& obj, datasets::LorentzianSampling& s, const std::string& where) {
  check_keys(obj, where,
             {"band_lo", "band_hi", "oscillators", "plasma_lo_fraction", "plasma_hi_fraction", "damping_lo",
              "damping_hi", "eps_inf", "thickness", "light_speed"});
  read(obj, "band_lo", s.band_lo, where);
  read(obj, "band_hi", s.band_hi, where);
  read_size(obj, "oscillators", s.oscillators, where);
  read(obj, "plasma_lo_fraction", s.plasma_lo_fraction, where);
  read(obj, "plasma_hi_fraction", s.plasma_hi_fraction, where);
  read(obj, "damping_lo", s.damping_lo, where);
  read(obj, "damping_hi", s.damping_hi, where);
  read(obj, "eps_inf", s.eps_inf, where);
  read(obj, "thickness", s.thickness, where);
  read(obj, "light_speed", s.light_speed, where);
}

void read_dataset(const json& obj, DatasetSpec& d) {
  const std::string where = "dataset";
  check_keys(obj, where,
             {"generator", "seed", "n_train", "n_test", "n_freq", "omega_max", "degree", "lorentzian", "train_file",
              "test_file"});
  const bool files = obj.contains("train_file") || obj.contains("test_file");
  if (files) {
    if (obj.contains("generator")) bad(where, "give either a generator or train_file/test_file, not both");
    if (!obj.contains("train_file") || !obj.contains("test_file")) bad(where, "train_file and test_file go together");
    d.generator.clear();
    d.train_file = obj.at("train_file").get<std::string>();
    d.test_file = obj.at("test_file").get<std::string>();
    return;
  }
  read(obj, "generator", d.generator, where);
  if (obj.contains("seed")) {
    std::uint64_t s = 0;
    read_seed(obj, "seed", s, where);
    d.seed = s;
  }
  if (d.generator == "lorentzian") {
    if (obj.contains("omega_max") || obj.contains("degree")) bad(where, "omega_max/degree apply to the ode generator");
    read_size(obj, "n_train", d.lorentzian.n_train, where);
    read_size(obj, "n_test", d.lorentzian.n_test, where);
    read_size(obj, "n_freq", d.lorentzian.n_freq, where);
    if (obj.contains("lorentzian")) read_sampling(obj.at("lorentzian"), d.lorentzian.sampling, where + ".lorentzian");
  } else if (d.generator == "ode") {
    if (obj.contains("lorentzian")) bad(where, "the lorentzian block applies to the lorentzian generator");
    read_size(obj, "n_train", d.ode.n_train, where);
    read_size(obj, "n_test", d.ode.n_test, where);
    read_size(obj, "n_freq", d.ode.n_freq, where);
    read(obj, "omega_max", d.ode.omega_max, where);
    read_size(obj, "degree", d.ode.degree, where);
  } else {
    bad(where + ".generator", "unknown generator '" + d.generator + "' (expected lorentzian or ode)");
  }
}

void read_fcnn(const json& obj, baselines::FcnnGrid& g) {
  const std::string where = "fcnn";
  check_keys(obj, where, {"widths", "depths", "dropouts", "learning_rates", "epochs", "eval_every"});
  read_sizes(obj, "widths", g.widths, where);
  read_sizes(obj, "depths", g.depths, where);
  read(obj, "dropouts", g.dropouts, where);
  read(obj, "learning_rates", g.learning_rates, where);
  read_size(obj, "epochs", g.epochs, where);
  read_size(obj, "eval_every", g.eval_every, where);
}

void read_aaa(const json& obj, baselines::AaaNetConfig& c) {
  const std::string where = "aaa_net";
  check_keys(obj, where, {"max_support", "tol", "hidden", "epochs", "learning_rate", "eval_every"});
  read_size(obj, "max_support", c.max_support, where);
  read(obj, "tol", c.tol, where);
  read_sizes(obj, "hidden", c.hidden, where);
  read_size(obj, "epochs", c.epochs, where);
  read(obj, "learning_rate", c.learning_rate, where);
  read_size(obj, "eval_every", c.eval_every, where);
}

void read_music(const json& obj, baselines::MusicConfig& c) {
  const std::string where = "music";
  check_keys(obj, where, {"p", "grid_factor", "restarts", "epochs", "learning_rate", "test_cap"});
  read_size(obj, "p", c.p, where);
  read_size(obj, "grid_factor", c.grid_factor, where);
  read_size(obj, "restarts", c.retrieve.restarts, where);
  read_size(obj, "epochs", c.retrieve.epochs, where);
  read(obj, "learning_rate", c.retrieve.learning_rate, where);
  if (obj.contains("test_cap") && !obj.at("test_cap").is_null()) {
    std::size_t cap = 0;
    read_size(obj, "test_cap", cap, where);
    c.test_cap = cap;
  }
}

void read_sweep(const json& obj, PiecewiseSweepSpec& s) {
  const std::string where = "piecewise_sweep";
  check_keys(obj, where, {"segments", "roots", "runs", "train_size"});
  read_sizes(obj, "segments", s.segments, where);
  read_sizes(obj, "roots", s.roots, where);
  read_size(obj, "runs", s.runs, where);
  read_size(obj, "train_size", s.train_size, where);
}

std::size_t pool_size(const DatasetSpec& d) {
  if (d.from_files()) return 0;  // known only once the file is read
  return d.generator == "ode" ? d.ode.n_train : d.lorentzian.n_train;
}

}  // namespace

const char* method_name(Method m) {
  for (const auto& e : kMethods) {
    if (e.method == m) return e.name;
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (const auto& e : kMethods) {
    if (name == e.name) return e.method;
  }
  fail(Errc::invalid_argument,
       "unknown method '" + name + "' (expected bpnn, piecewise-bpnn, fcnn-grid, kk, aaa-net, music or linear-bp)");
}

std::string DatasetSpec::label() const {
  return from_files() ? train_file.stem().string() : generator;
}

void ExperimentConfig::validate() const {
  require(!methods.empty(), Errc::invalid_argument, "config: at least one method is required");
  std::set<Method> seen;
  for (Method m : methods) {
    require(seen.insert(m).second, Errc::invalid_argument, std::string("config: method listed twice: ") + method_name(m));
  }
  require(!train_sizes.empty(), Errc::invalid_argument, "config: train_sizes must be nonempty");
  require(train_sizes.front() >= 1, Errc::invalid_argument, "config: train sizes must be positive");
  for (std::size_t i = 1; i < train_sizes.size(); ++i) {
    require(train_sizes[i] > train_sizes[i - 1], Errc::invalid_argument, "config: train_sizes must be strictly increasing");
  }
  const std::size_t pool = pool_size(dataset);
  if (pool > 0) {
    require(train_sizes.back() <= pool, Errc::invalid_argument,
            "config: largest train size " + std::to_string(train_sizes.back()) + " exceeds the " +
                std::to_string(pool) + " generated training samples");
  }
  require(seeds >= 1, Errc::invalid_argument, "config: seeds must be at least 1");
  require(jobs >= 1, Errc::invalid_argument, "config: jobs must be at least 1");
  if (dataset.from_files()) {
    require(std::filesystem::exists(dataset.train_file), Errc::io,
            "config: train_file does not exist: " + dataset.train_file.string());
    require(std::filesystem::exists(dataset.test_file), Errc::io,
            "config: test_file does not exist: " + dataset.test_file.string());
  } else {
    require(dataset.generator == "lorentzian" || dataset.generator == "ode", Errc::invalid_argument,
            "config: unknown generator '" + dataset.generator + "'");
  }
  bpnn.validate();
  piecewise_bpnn.validate();
  linear_bp.validate();
  fcnn.validate();
  aaa_net.validate();
  require(music.p >= 1 && music.grid_factor >= 1 && music.retrieve.restarts >= 1, Errc::invalid_argument,
          "config: music p, grid_factor and restarts must be positive");
  require(!music.test_cap || *music.test_cap >= 1, Errc::invalid_argument, "config: music test_cap must be positive");
  if (piecewise_sweep) {
    require(!piecewise_sweep->segments.empty() && !piecewise_sweep->roots.empty(), Errc::invalid_argument,
            "config: piecewise_sweep grids must be nonempty");
    for (std::size_t s : piecewise_sweep->segments) require(s >= 1, Errc::invalid_argument, "config: segments must be positive");
    for (std::size_t r : piecewise_sweep->roots) require(r >= 1, Errc::invalid_argument, "config: roots must be positive");
    require(piecewise_sweep->runs >= 1, Errc::invalid_argument, "config: piecewise_sweep.runs must be positive");
    require(piecewise_sweep->train_size >= 1 && (pool == 0 || piecewise_sweep->train_size <= pool),
            Errc::invalid_argument, "config: piecewise_sweep.train_size out of range");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    fail(Errc::parse, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "root",
             {"dataset", "train_sizes", "methods", "seeds", "seed", "output_dir", "jobs", "record_wall_time", "bpnn",
              "piecewise_bpnn", "linear_bp", "fcnn", "aaa_net", "music", "piecewise_sweep"});
  ExperimentConfig c;
  if (root.contains("dataset")) read_dataset(root.at("dataset"), c.dataset);
  read_sizes(root, "train_sizes", c.train_sizes, "root");
  if (root.contains("methods")) {
    if (!root.at("methods").is_array()) bad("methods", "expected an array of method names");
    for (const json& m : root.at("methods")) {
      if (!m.is_string()) bad("methods", "expected method names");
      c.methods.push_back(parse_method(m.get<std::string>()));
    }
  }
  read_size(root, "seeds", c.seeds, "root");
  read_seed(root, "seed", c.seed, "root");
  if (root.contains("output_dir")) {
    std::string dir;
    read(root, "output_dir", dir, "root");
    c.output_dir = dir;
  }
  read_size(root, "jobs", c.jobs, "root");
  read(root, "record_wall_time", c.record_wall_time, "root");
  if (root.contains("bpnn")) read_bpnn(root.at("bpnn"), c.bpnn, "bpnn", false);
  if (root.contains("piecewise_bpnn")) read_bpnn(root.at("piecewise_bpnn"), c.piecewise_bpnn, "piecewise_bpnn", true);
  if (root.contains("linear_bp")) {
    const json& lb = root.at("linear_bp");
    check_keys(lb, "linear_bp", {"roots", "learning_rate", "epochs", "eval_every"});
    read_bpnn(lb, c.linear_bp, "linear_bp", false);
  }
  if (root.contains("fcnn")) read_fcnn(root.at("fcnn"), c.fcnn);
  if (root.contains("aaa_net")) read_aaa(root.at("aaa_net"), c.aaa_net);
  if (root.contains("music")) read_music(root.at("music"), c.music);
  if (root.contains("piecewise_sweep")) {
    PiecewiseSweepSpec s;
    read_sweep(root.at("piecewise_sweep"), s);
    c.piecewise_sweep = s;
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::io, "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  ExperimentConfig c = parse_config(text.str());
  // Relative dataset paths are taken relative to the config file.
  if (c.dataset.from_files()) {
    const auto base = path.parent_path();
    if (c.dataset.train_file.is_relative()) c.dataset.train_file = base / c.dataset.train_file;
    if (c.dataset.test_file.is_relative()) c.dataset.test_file = base / c.dataset.test_file;
  }
  return c;
}

}  // namespace phaseret::harness
