#include "latticegan/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

extern char** environ;

namespace latticegan {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct RawValue {
  std::string value;
  std::size_t line = 0;
};

using RawConfig = std::map<std::string, std::map<std::string, RawValue>>;

RawConfig parse_ini(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": unterminated section header");
      }
      section = lower(trim(stripped.substr(1, stripped.size() - 2)));
      if (section.empty()) {
        throw std::runtime_error("config line " + std::to_string(line_no) + ": empty section name");
      }
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    }
    if (section.empty()) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": key outside of any [section]");
    }
    const std::string key = lower(trim(stripped.substr(0, eq)));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
    }
    auto& sec = raw[section];
    if (sec.count(key) != 0) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": duplicate key '" +
                               section + "." + key + "'");
    }
    sec[key] = RawValue{value, line_no};
  }
  return raw;
}

// Tracks which keys were consumed so leftovers can be reported as unknown.
class ConfigReader {
 public:
  explicit ConfigReader(RawConfig raw) : raw_(std::move(raw)) {}

  bool has(const std::string& section, const std::string& key) const {
    const auto sec = raw_.find(section);
    return sec != raw_.end() && sec->second.count(key) != 0;
  }

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) {
    const RawValue* v = consume(section, key);
    return v == nullptr ? fallback : v->value;
  }

  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) {
    const RawValue* v = consume(section, key);
    if (v == nullptr) return fallback;
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v->value.data(), v->value.data() + v->value.size(), out);
    if (ec != std::errc{} || ptr != v->value.data() + v->value.size()) {
      throw std::runtime_error(where(section, key, *v) + ": expected a nonnegative integer, got '" +
                               v->value + "'");
    }
    return out;
  }

  double get_double(const std::string& section, const std::string& key, double fallback) {
    const RawValue* v = consume(section, key);
    if (v == nullptr) return fallback;
    try {
      std::size_t pos = 0;
      const double out = std::stod(v->value, &pos);
      if (pos != v->value.size()) throw std::invalid_argument("trailing characters");
      return out;
    } catch (const std::exception&) {
      throw std::runtime_error(where(section, key, *v) + ": expected a number, got '" + v->value +
                               "'");
    }
  }

  std::string get_word(const std::string& section, const std::string& key,
                       const std::string& fallback, const std::set<std::string>& allowed) {
    const RawValue* v = consume(section, key);
    const std::string word = v == nullptr ? fallback : lower(v->value);
    if (allowed.count(word) == 0) {
      std::string options;
      for (const auto& a : allowed) options += (options.empty() ? "" : " | ") + a;
      const std::string at = v == nullptr ? "config" : where(section, key, *v);
      throw std::runtime_error(at + ": expected one of {" + options + "}, got '" + word + "'");
    }
    return word;
  }

  void fail_on_unconsumed() const {
    for (const auto& [section, keys] : raw_) {
      for (const auto& [key, v] : keys) {
        if (consumed_.count(section + "." + key) == 0) {
          throw std::runtime_error("config line " + std::to_string(v.line) + ": unknown key '" +
                                   section + "." + key + "'");
        }
      }
    }
  }

 private:
  const RawValue* consume(const std::string& section, const std::string& key) {
    consumed_.insert(section + "." + key);
    const auto sec = raw_.find(section);
    if (sec == raw_.end()) return nullptr;
    const auto entry = sec->second.find(key);
    if (entry == sec->second.end()) return nullptr;
    return &entry->second;
  }

  static std::string where(const std::string& section, const std::string& key, const RawValue& v) {
    return "config line " + std::to_string(v.line) + " (" + section + "." + key + ")";
  }

  RawConfig raw_;
  std::set<std::string> consumed_;
};

std::vector<std::size_t> parse_dim_list(const std::string& text) {
  std::vector<std::size_t> dims;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    const std::string t = trim(token);
    if (t.empty()) continue;
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || v == 0) {
      throw std::runtime_error("expected a comma-separated list of positive integers, got '" +
                               text + "'");
    }
    dims.push_back(v);
  }
  return dims;
}

Matrix parse_centers(const std::string& text) {
  std::vector<std::vector<double>> points;
  std::string point_token;
  std::istringstream points_in(text);
  while (std::getline(points_in, point_token, ';')) {
    const std::string t = trim(point_token);
    if (t.empty()) continue;
    std::vector<double> coords;
    std::istringstream coords_in(t);
    std::string coord;
    while (coords_in >> coord) {
      try {
        std::size_t pos = 0;
        coords.push_back(std::stod(coord, &pos));
        if (pos != coord.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::runtime_error("bad coordinate '" + coord + "' in centers");
      }
    }
    if (coords.empty()) throw std::runtime_error("empty point in centers");
    points.push_back(std::move(coords));
  }
  if (points.empty()) throw std::runtime_error("centers must list at least one point");
  for (const auto& p : points) {
    if (p.size() != points.front().size()) {
      throw std::runtime_error("centers points disagree on dimension");
    }
  }
  return matrix_from_rows(points);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::logic_error("double formatting failed");
  return std::string(buf, ptr);
}

std::vector<LayerSpec> build_layers(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                                    std::size_t output_dim, Activation output_activation) {
  std::vector<LayerSpec> layers;
  std::size_t in = input_dim;
  for (const std::size_t h : hidden) {
    layers.push_back(LayerSpec{in, h, Activation::Tanh});
    in = h;
  }
  layers.push_back(LayerSpec{in, output_dim, output_activation});
  return layers;
}

std::vector<std::size_t> hidden_dims(const std::vector<LayerSpec>& layers) {
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    if (layers[i].activation != Activation::Tanh) {
      throw std::runtime_error("emit_config: hidden layers must use tanh activation");
    }
    dims.push_back(layers[i].output_dim);
  }
  return dims;
}

std::string output_activation_word(const std::vector<LayerSpec>& layers) {
  switch (layers.back().activation) {
    case Activation::Identity:
      return "identity";
    case Activation::Tanh:
      return "tanh";
    case Activation::Sigmoid:
      break;
  }
  throw std::runtime_error("emit_config: generator output must be identity or tanh");
}

std::string join_dims(const std::vector<std::size_t>& dims) {
  std::string out;
  for (const std::size_t d : dims) {
    if (!out.empty()) out += ",";
    out += std::to_string(d);
  }
  return out;
}

}  // namespace

ExperimentConfig default_experiment_config() {
  ExperimentConfig cfg;
  cfg.topology = Topology::ring(6, 1);
  cfg.mode = ExecutionMode::SequentialDeterministic;
  cfg.stop = StopCondition{StopKind::Epochs, 300, 0};
  cfg.seed = 42;
  cfg.coev = CoevParams{2, 0.5, 1e-4, 1};
  cfg.loss = LossConfig{MeasuringFunction::Log, 1e-7};
  cfg.data.source = GaussianMixtureSpec{ring_of_gaussians(8, 1.0), 0.05};
  cfg.data.batch_size = 100;
  cfg.latent.dim = 8;
  cfg.generator_layers = build_layers(8, {32}, 2, Activation::Identity);
  cfg.discriminator_layers = build_layers(2, {32}, 1, Activation::Sigmoid);
  cfg.initial_learning_rate = 2e-4;
  cfg.train_samples = 1000;
  cfg.epoch_batches.reset();
  cfg.mixture = MixtureParams{};
  cfg.metrics = MetricsParams{};
  return cfg;
}

ParsedExperiment parse_config_text(const std::string& text,
                                   const std::map<std::string, std::string>& overrides) {
  RawConfig raw = parse_ini(text);
  for (const auto& [path, value] : overrides) {
    const std::size_t dot = path.find('.');
    if (dot == std::string::npos) {
      throw std::runtime_error("override key '" + path + "' must have the form section.key");
    }
    raw[lower(path.substr(0, dot))][lower(path.substr(dot + 1))] = RawValue{value, 0};
  }

  ConfigReader reader(std::move(raw));
  ExperimentConfig cfg = default_experiment_config();

  // Keys of inactive variants (the other stop kind, topology kind, or data
  // source) are still consumed so they are schema-checked, not "unknown".

  // [run]
  cfg.seed = reader.get_u64("run", "seed", cfg.seed);
  const std::string mode = reader.get_word("run", "mode", "sequential", {"sequential", "async"});
  cfg.mode =
      mode == "sequential" ? ExecutionMode::SequentialDeterministic : ExecutionMode::ParallelAsync;
  const std::string stop = reader.get_word("run", "stop", "epochs", {"epochs", "wallclock"});
  const std::uint64_t generations = reader.get_u64("run", "generations", 300);
  const std::uint64_t wallclock_ms = reader.get_u64("run", "wallclock_ms", 60000);
  cfg.stop = stop == "epochs" ? StopCondition{StopKind::Epochs, generations, 0}
                              : StopCondition{StopKind::WallClock, 0, wallclock_ms};

  // [topology]
  const std::string kind = reader.get_word("topology", "kind", "ring", {"ring", "grid"});
  const std::uint64_t ring_size = reader.get_u64("topology", "ring_size", 6);
  const std::uint64_t ring_radius = reader.get_u64("topology", "ring_radius", 1);
  const std::uint64_t grid_rows = reader.get_u64("topology", "grid_rows", 3);
  const std::uint64_t grid_cols = reader.get_u64("topology", "grid_cols", 3);
  cfg.topology =
      kind == "ring" ? Topology::ring(ring_size, ring_radius) : Topology::grid(grid_rows, grid_cols);

  // [coevolution]
  cfg.coev.tournament_size = reader.get_u64("coevolution", "tournament_size", 2);
  cfg.coev.mutation_probability = reader.get_double("coevolution", "mutation_probability", 0.5);
  cfg.coev.mutation_scale = reader.get_double("coevolution", "mutation_scale", 1e-4);
  cfg.coev.disc_skip = reader.get_u64("coevolution", "disc_skip", 1);

  // [gan]
  cfg.initial_learning_rate = reader.get_double("gan", "initial_learning_rate", 2e-4);
  cfg.loss.clamp_epsilon = reader.get_double("gan", "clamp_epsilon", 1e-7);

  // [data]
  const std::string source =
      reader.get_word("data", "source", "gaussian_ring", {"gaussian_ring", "gaussian", "idx"});
  const std::uint64_t modes = reader.get_u64("data", "modes", 8);
  const double mode_radius = reader.get_double("data", "mode_radius", 1.0);
  const double sigma = reader.get_double("data", "sigma", 0.05);
  const std::string centers_text = reader.get_string("data", "centers", "");
  const std::string idx_path = reader.get_string("data", "idx_path", "");
  const std::uint64_t data_dim_key = reader.get_u64("data", "data_dim", 0);

  std::size_t data_dim = 0;
  if (source == "gaussian_ring") {
    cfg.data.source = GaussianMixtureSpec{ring_of_gaussians(modes, mode_radius), sigma};
    data_dim = 2;
  } else if (source == "gaussian") {
    if (centers_text.empty()) {
      throw std::runtime_error("data.source = gaussian requires data.centers");
    }
    const Matrix centers = parse_centers(centers_text);
    data_dim = centers.cols;
    cfg.data.source = GaussianMixtureSpec{centers, sigma};
  } else {
    if (idx_path.empty()) throw std::runtime_error("data.source = idx requires data.idx_path");
    cfg.data.source = IdxFileSpec{idx_path};
    if (data_dim_key == 0) {
      throw std::runtime_error("data.source = idx requires data.data_dim >= 1");
    }
    data_dim = data_dim_key;
  }
  if (source != "idx" && data_dim_key != 0 && data_dim_key != data_dim) {
    throw std::runtime_error("data.data_dim contradicts the dimension of the gaussian centers");
  }
  cfg.train_samples = reader.get_u64("data", "train_samples", 1000);
  cfg.data.batch_size = reader.get_u64("data", "batch_size", 100);
  const std::string epoch_batches = reader.get_string("data", "epoch_batches", "full");
  if (lower(epoch_batches) == "full") {
    cfg.epoch_batches.reset();
  } else {
    std::size_t v = 0;
    const auto [ptr, ec] =
        std::from_chars(epoch_batches.data(), epoch_batches.data() + epoch_batches.size(), v);
    if (ec != std::errc{} || ptr != epoch_batches.data() + epoch_batches.size()) {
      throw std::runtime_error("data.epoch_batches must be 'full' or a nonnegative integer");
    }
    cfg.epoch_batches = v;
  }

  // [network]
  cfg.latent.dim = reader.get_u64("network", "latent_dim", 8);
  const std::vector<std::size_t> g_hidden =
      parse_dim_list(reader.get_string("network", "generator_hidden", "32"));
  const std::vector<std::size_t> d_hidden =
      parse_dim_list(reader.get_string("network", "discriminator_hidden", "32"));
  const std::string g_out =
      reader.get_word("network", "generator_output", "identity", {"identity", "tanh"});
  cfg.generator_layers =
      build_layers(cfg.latent.dim, g_hidden, data_dim,
                   g_out == "identity" ? Activation::Identity : Activation::Tanh);
  cfg.discriminator_layers = build_layers(data_dim, d_hidden, 1, Activation::Sigmoid);

  // [mixture]
  cfg.mixture.iterations = reader.get_u64("mixture", "iterations", 200);
  cfg.mixture.step_sigma = reader.get_double("mixture", "step_sigma", 0.05);
  cfg.mixture.fitness_samples = reader.get_u64("mixture", "fitness_samples", 1000);

  // [metrics]
  cfg.metrics.heldout_samples = reader.get_u64("metrics", "heldout_samples", 1000);
  cfg.metrics.generator_samples = reader.get_u64("metrics", "generator_samples", 512);
  cfg.metrics.hq_threshold = reader.get_double("metrics", "hq_threshold", 0.15);

  reader.fail_on_unconsumed();
  validate_experiment_config(cfg);

  return ParsedExperiment{cfg, emit_config(cfg)};
}

ParsedExperiment parse_config_file(const std::string& path,
                                   const std::map<std::string, std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config_text(text.str(), overrides);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::map<std::string, std::string> env_config_overrides() {
  std::map<std::string, std::string> overrides;
  const std::string prefix = "LATTICEGAN_";
  for (char** env = environ; *env != nullptr; ++env) {
    const std::string entry(*env);
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    const std::string name = entry.substr(0, eq);
    if (name.rfind(prefix, 0) != 0) continue;
    const std::string rest = name.substr(prefix.size());
    const std::size_t sep = rest.find("__");
    if (sep == std::string::npos) continue;  // not a config override
    const std::string section = lower(rest.substr(0, sep));
    const std::string key = lower(rest.substr(sep + 2));
    overrides[section + "." + key] = entry.substr(eq + 1);
  }
  return overrides;
}

std::string emit_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[run]\n";
  out << "seed = " << cfg.seed << "\n";
  out << "mode = "
      << (cfg.mode == ExecutionMode::SequentialDeterministic ? "sequential" : "async") << "\n";
  if (cfg.stop.kind == StopKind::Epochs) {
    out << "stop = epochs\n";
    out << "generations = " << cfg.stop.generations << "\n";
  } else {
    out << "stop = wallclock\n";
    out << "wallclock_ms = " << cfg.stop.wall_clock_ms << "\n";
  }

  out << "\n[topology]\n";
  if (cfg.topology.kind() == TopologyKind::Ring) {
    out << "kind = ring\n";
    out << "ring_size = " << cfg.topology.cell_count() << "\n";
    out << "ring_radius = " << cfg.topology.ring_radius() << "\n";
  } else {
    out << "kind = grid\n";
    out << "grid_rows = " << cfg.topology.grid_rows() << "\n";
    out << "grid_cols = " << cfg.topology.grid_cols() << "\n";
  }

  out << "\n[coevolution]\n";
  out << "tournament_size = " << cfg.coev.tournament_size << "\n";
  out << "mutation_probability = " << format_double(cfg.coev.mutation_probability) << "\n";
  out << "mutation_scale = " << format_double(cfg.coev.mutation_scale) << "\n";
  out << "disc_skip = " << cfg.coev.disc_skip << "\n";

  out << "\n[gan]\n";
  out << "initial_learning_rate = " << format_double(cfg.initial_learning_rate) << "\n";
  out << "clamp_epsilon = " << format_double(cfg.loss.clamp_epsilon) << "\n";

  out << "\n[data]\n";
  if (const auto* gm = std::get_if<GaussianMixtureSpec>(&cfg.data.source)) {
    out << "source = gaussian\n";
    out << "centers = ";
    for (std::size_t r = 0; r < gm->centers.rows; ++r) {
      if (r > 0) out << "; ";
      for (std::size_t c = 0; c < gm->centers.cols; ++c) {
        if (c > 0) out << " ";
        out << format_double(gm->centers.at(r, c));
      }
    }
    out << "\n";
    out << "sigma = " << format_double(gm->sigma) << "\n";
  } else {
    const auto& idx = std::get<IdxFileSpec>(cfg.data.source);
    out << "source = idx\n";
    out << "idx_path = " << idx.path << "\n";
    out << "data_dim = " << cfg.discriminator_layers.front().input_dim << "\n";
  }
  out << "train_samples = " << cfg.train_samples << "\n";
  out << "batch_size = " << cfg.data.batch_size << "\n";
  out << "epoch_batches = "
      << (cfg.epoch_batches.has_value() ? std::to_string(*cfg.epoch_batches) : "full") << "\n";

  out << "\n[network]\n";
  out << "latent_dim = " << cfg.latent.dim << "\n";
  out << "generator_hidden = " << join_dims(hidden_dims(cfg.generator_layers)) << "\n";
  out << "generator_output = " << output_activation_word(cfg.generator_layers) << "\n";
  out << "discriminator_hidden = " << join_dims(hidden_dims(cfg.discriminator_layers)) << "\n";

  out << "\n[mixture]\n";
  out << "iterations = " << cfg.mixture.iterations << "\n";
  out << "step_sigma = " << format_double(cfg.mixture.step_sigma) << "\n";
  out << "fitness_samples = " << cfg.mixture.fitness_samples << "\n";

  out << "\n[metrics]\n";
  out << "heldout_samples = " << cfg.metrics.heldout_samples << "\n";
  out << "generator_samples = " << cfg.metrics.generator_samples << "\n";
  out << "hq_threshold = " << format_double(cfg.metrics.hq_threshold) << "\n";

  return out.str();
}

std::string config_digest(const std::string& canonical_text) {
  // FNV-1a 64-bit.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : canonical_text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace latticegan
