#include "tdcast/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <optional>
#include <sstream>

#include "tdcast/errors.hpp"
#include "tdcast/experiment.hpp"
#include "tdcast/synthetic.hpp"
#include "tdcast/version.hpp"

namespace tdcast {

namespace {

struct KeyDoc {
  const char* key;
  const char* desc;
  const char* default_value;
};

// The run configuration file is flat `key = value` lines; '#' starts a
// comment. Every key has an identically named long flag that overrides it.
constexpr KeyDoc kConfigKeys[] = {
    {"data", "path to the panel CSV", "(required)"},
    {"test_country", "country held out for testing", "(required)"},
    {"target", "target indicator name", "GDP"},
    {"output_dir", "directory for reports, figures and model files", "(required)"},
    {"ols_cutoff", "last quarter of the benchmark training window, YYYYQn", "(required)"},
    {"td_models", "comma list of TD architectures to train (network, linear); empty for none",
     "network,linear"},
    {"alpha", "discount factor, strictly inside (0,1)", "0.9"},
    {"gamma0", "initial step size", "0.1"},
    {"decay_tau", "step-size decay scale in updates; 0 resolves to 10x transition count", "0"},
    {"epochs", "sweeps over the training transitions", "100"},
    {"shuffle", "shuffle transitions each epoch (true/false)", "true"},
    {"seed", "base seed; every random component derives from it by a fixed offset", "42"},
    {"hidden_nodes", "hidden units of the network architecture", "16"},
    {"activation", "network activation: relu or logistic", "relu"},
    {"features_network", "network features: raw, raw_with_bias or tensor_degree2",
     "tensor_degree2"},
    {"features_linear", "linear-architecture features: raw, raw_with_bias or tensor_degree2",
     "raw_with_bias"},
    {"forecast_rule", "score-to-level mapping: direct_score or incremental_root", "direct_score"},
    {"sign_heuristic", "incremental_root sign: previous_change or always_positive",
     "previous_change"},
    {"strict_update_order",
     "apply the hidden-weight update with already-updated output weights (true/false)", "false"},
    {"delta_log_stride", "log every Nth temporal difference; 0 picks a stride automatically", "0"},
};

struct CliConfig {
  std::string data;
  std::string test_country;
  std::string target = "GDP";
  std::string output_dir;
  std::optional<Quarter> ols_cutoff;
  std::vector<ArchitectureKind> td_models{ArchitectureKind::network, ArchitectureKind::linear};
  double alpha = 0.9;
  double gamma0 = 0.1;
  double decay_tau = 0.0;
  int epochs = 100;
  bool shuffle = true;
  std::uint64_t seed = 42;
  int hidden_nodes = 16;
  Activation activation = Activation::relu;
  FeatureKind features_network = FeatureKind::tensor_degree2;
  FeatureKind features_linear = FeatureKind::raw_with_bias;
  ForecastKind forecast_rule = ForecastKind::direct_score;
  SignHeuristic sign_heuristic = SignHeuristic::previous_change;
  bool strict_update_order = false;
  std::uint64_t delta_log_stride = 0;
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size()) throw ParseError("not a number: '" + text + "'");
  return v;
}

long long parse_integer(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  long long v = std::strtoll(begin, &end, 10);
  if (text.empty() || end != begin + text.size()) throw ParseError("not an integer: '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParseError("not a boolean: '" + text + "' (expected true or false)");
}

std::vector<ArchitectureKind> parse_td_models(const std::string& text) {
  std::vector<ArchitectureKind> models;
  std::string value = trim(text);
  if (value.empty() || value == "none") return models;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    std::string item = trim(comma == std::string::npos ? value.substr(start)
                                                       : value.substr(start, comma - start));
    if (item.empty()) throw ParseError("empty entry in td_models list");
    ArchitectureKind kind = architecture_from_string(item);
    for (auto existing : models) {
      if (existing == kind) throw ParseError("duplicate td_models entry '" + item + "'");
    }
    models.push_back(kind);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return models;
}

void set_key(CliConfig& cfg, const std::string& key, const std::string& value,
             std::size_t line_no) {
  try {
    if (key == "data") cfg.data = value;
    else if (key == "test_country") cfg.test_country = value;
    else if (key == "target") cfg.target = value;
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "ols_cutoff") cfg.ols_cutoff = Quarter::parse(value);
    else if (key == "td_models") cfg.td_models = parse_td_models(value);
    else if (key == "alpha") cfg.alpha = parse_double(value);
    else if (key == "gamma0") cfg.gamma0 = parse_double(value);
    else if (key == "decay_tau") cfg.decay_tau = parse_double(value);
    else if (key == "epochs") cfg.epochs = static_cast<int>(parse_integer(value));
    else if (key == "shuffle") cfg.shuffle = parse_bool(value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(value));
    else if (key == "hidden_nodes") cfg.hidden_nodes = static_cast<int>(parse_integer(value));
    else if (key == "activation") cfg.activation = activation_from_string(value);
    else if (key == "features_network") cfg.features_network = feature_kind_from_string(value);
    else if (key == "features_linear") cfg.features_linear = feature_kind_from_string(value);
    else if (key == "forecast_rule") cfg.forecast_rule = forecast_kind_from_string(value);
    else if (key == "sign_heuristic") cfg.sign_heuristic = sign_heuristic_from_string(value);
    else if (key == "strict_update_order") cfg.strict_update_order = parse_bool(value);
    else if (key == "delta_log_stride")
      cfg.delta_log_stride = static_cast<std::uint64_t>(parse_integer(value));
    else
      throw ParseError("unknown configuration key '" + key + "'", line_no);
  } catch (const ParseError& e) {
    if (e.line != 0) throw;
    throw ParseError("key '" + key + "': " + e.what(), line_no);
  }
}

CliConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  CliConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value', got '" + stripped + "'", line_no);
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", line_no);
    for (const auto& s : seen) {
      if (s == key) throw ParseError("duplicate configuration key '" + key + "'", line_no);
    }
    seen.push_back(key);
    set_key(cfg, key, value, line_no);
  }
  return cfg;
}

void validate_cli_config(const CliConfig& cfg) {
  if (cfg.data.empty()) throw ValidationError("config: 'data' is required");
  if (cfg.test_country.empty()) throw ValidationError("config: 'test_country' is required");
  if (cfg.output_dir.empty()) throw ValidationError("config: 'output_dir' is required");
  if (!cfg.ols_cutoff) throw ValidationError("config: 'ols_cutoff' is required");
  if (cfg.target.empty()) throw ValidationError("config: 'target' must not be empty");
  if (cfg.epochs < 0) throw ValidationError("epochs must be >= 0");
  // Delegate the numeric constraints; state_dim is unknown until data loads.
  TrainConfig probe;
  probe.alpha = cfg.alpha;
  probe.gamma0 = cfg.gamma0;
  probe.decay_tau = cfg.decay_tau;
  probe.epochs = cfg.epochs;
  probe.hidden_nodes = cfg.hidden_nodes;
  probe.features = FeatureSpec{cfg.features_network, 1};
  probe.validate();
}

std::string td_models_str(const CliConfig& cfg) {
  std::string s;
  for (const auto& m : cfg.td_models) s += (s.empty() ? "" : ",") + to_string(m);
  return s;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> echo_entries(const CliConfig& cfg,
                                                              std::uint64_t resolved_stride) {
  std::vector<std::pair<std::string, std::string>> entries;
  entries.emplace_back("test_country", cfg.test_country);
  entries.emplace_back("target", cfg.target);
  entries.emplace_back("output_dir", cfg.output_dir);
  entries.emplace_back("ols_cutoff", cfg.ols_cutoff->str());
  entries.emplace_back("td_models", td_models_str(cfg));
  entries.emplace_back("alpha", format_number(cfg.alpha));
  entries.emplace_back("gamma0", format_number(cfg.gamma0));
  entries.emplace_back("decay_tau", format_number(cfg.decay_tau));
  entries.emplace_back("epochs", std::to_string(cfg.epochs));
  entries.emplace_back("shuffle", cfg.shuffle ? "true" : "false");
  entries.emplace_back("seed", std::to_string(cfg.seed));
  entries.emplace_back("hidden_nodes", std::to_string(cfg.hidden_nodes));
  entries.emplace_back("activation", to_string(cfg.activation));
  entries.emplace_back("features_network", to_string(cfg.features_network));
  entries.emplace_back("features_linear", to_string(cfg.features_linear));
  entries.emplace_back("forecast_rule", to_string(cfg.forecast_rule));
  entries.emplace_back("sign_heuristic", to_string(cfg.sign_heuristic));
  entries.emplace_back("strict_update_order", cfg.strict_update_order ? "true" : "false");
  entries.emplace_back("delta_log_stride", std::to_string(resolved_stride));
  return entries;
}

int cmd_validate(const std::string& path, const std::string& target, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read data file '" + path + "'");
  PanelDataset ds;
  try {
    ds = parse_panel_csv(in, target);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }

  out << "countries: " << ds.countries.size() << '\n';
  out << "target: " << ds.target << '\n';
  out << "indicators (" << ds.indicators.size() << "):";
  for (const auto& name : ds.indicators) out << ' ' << name;
  out << '\n';
  int gap_total = 0;
  for (const auto& c : ds.countries) {
    const int gaps = c.gap_count();
    gap_total += gaps;
    out << c.country << ": " << c.quarters.front().str() << ".." << c.quarters.back().str() << ", "
        << c.quarters.size() << " quarters, " << gaps << " gaps\n";
  }
  for (const auto& note : ds.notes) out << "note: " << note << '\n';
  out << "dropped-quarter notes: " << ds.notes.size() << '\n';
  out << "gap warnings: " << gap_total << '\n';
  try {
    regularize(ds);
  } catch (const ValidationError& e) {
    out << "regularization: failed\n";
    throw;
  }
  out << "regularization: ok\n";
  out << "status: ok\n";
  return 0;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out_path, std::ostream& out) {
  PanelDataset ds = generate_synthetic_panel(spec);
  std::ofstream file(out_path);
  if (!file) throw ValidationError("cannot open '" + out_path + "' for writing");
  write_panel_csv(ds, file);
  file.flush();
  if (!file) throw Error("failed writing '" + out_path + "'");
  out << "wrote " << ds.observation_count() << " observations (" << ds.countries.size()
      << " countries x " << spec.quarters << " quarters) to " << out_path << '\n';
  return 0;
}

int cmd_run(const std::string& config_path,
            const std::vector<std::pair<std::string, std::string>>& overrides, std::ostream& out) {
  CliConfig cfg;
  try {
    cfg = load_config_file(config_path);
  } catch (const ParseError& e) {
    throw ParseError(config_path + ": " + e.what());
  }
  for (const auto& [key, value] : overrides) set_key(cfg, key, value, 0);
  validate_cli_config(cfg);

  std::string bytes;
  {
    std::ifstream in(cfg.data, std::ios::binary);
    if (!in) throw ValidationError("cannot read data file '" + cfg.data + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    bytes = buffer.str();
  }
  PanelDataset raw;
  {
    std::istringstream in(bytes);
    try {
      raw = parse_panel_csv(in, cfg.target);
    } catch (const ParseError& e) {
      throw ParseError(cfg.data + ": " + e.what());
    }
  }

  // Transition count estimate for the automatic log stride: adjacent pairs
  // outside the test country.
  std::size_t transition_estimate = 0;
  for (const auto& c : raw.countries) {
    if (c.country == cfg.test_country || c.quarters.size() < 2) continue;
    transition_estimate += c.quarters.size() - 1 - c.gap_count();
  }
  std::uint64_t stride = cfg.delta_log_stride;
  if (stride == 0) {
    const std::uint64_t total =
        static_cast<std::uint64_t>(cfg.epochs) * std::max<std::size_t>(transition_estimate, 1);
    stride = std::max<std::uint64_t>(1, total / 10000);
  }

  ExperimentConfig ecfg;
  ecfg.test_country = cfg.test_country;
  ecfg.ols_cutoff = *cfg.ols_cutoff;
  for (ArchitectureKind kind : cfg.td_models) {
    ModelRun run;
    run.name = kind == ArchitectureKind::network ? "td_network" : "td_linear";
    run.train.alpha = cfg.alpha;
    run.train.gamma0 = cfg.gamma0;
    run.train.decay_tau = cfg.decay_tau;
    run.train.epochs = cfg.epochs;
    run.train.shuffle = cfg.shuffle;
    run.train.seed = cfg.seed;
    run.train.architecture = kind;
    run.train.activation = cfg.activation;
    run.train.features.kind =
        kind == ArchitectureKind::network ? cfg.features_network : cfg.features_linear;
    run.train.features.state_dim = raw.state_dim();
    run.train.hidden_nodes = cfg.hidden_nodes;
    run.train.strict_update_order = cfg.strict_update_order;
    run.train.delta_log_stride = stride;
    run.rule = ForecastRule{cfg.forecast_rule, cfg.sign_heuristic};
    ecfg.runs.push_back(std::move(run));
  }

  ExperimentResult result = run_experiment(raw, ecfg);

  ManifestInfo manifest;
  manifest.data_path = cfg.data;
  manifest.data_fingerprint = fnv1a64(bytes);
  manifest.entries = echo_entries(cfg, stride);
  write_experiment_outputs(cfg.output_dir, result, manifest);

  out << "model            mae         rmse\n";
  char row[96];
  for (const auto& report : result.reports) {
    std::snprintf(row, sizeof(row), "%-14s %11.6f %11.6f\n", report.model_name.c_str(), report.mae,
                  report.rmse);
    out << row;
  }
  out << "transitions: " << result.transition_count
      << ", test window: " << result.test_window << " quarters\n";
  out << "outputs written to " << cfg.output_dir << '\n';
  return 0;
}

std::string config_key_help() {
  std::string text = "Configuration keys (config file `key = value`, or the flag of the same name):\n";
  for (const auto& doc : kConfigKeys) {
    text += "  ";
    text += doc.key;
    text += ": ";
    text += doc.desc;
    text += " [default: ";
    text += doc.default_value;
    text += "]\n";
  }
  return text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"TD(0) panel forecasting: value-model training, an OLS benchmark and "
               "out-of-sample error reports"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand("validate", "check a panel CSV and print its shape");
  std::string validate_path;
  std::string validate_target = "GDP";
  validate_cmd->add_option("data", validate_path, "panel CSV path")->required();
  validate_cmd->add_option("--target", validate_target, "target indicator name [default: GDP]");

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic panel CSV");
  SyntheticSpec spec;
  std::string synth_out;
  std::string synth_structure = "linear";
  long long synth_seed = 1;
  synth_cmd->add_option("--countries", spec.countries, "number of countries [default: 4]");
  synth_cmd->add_option("--quarters", spec.quarters, "quarters per country [default: 24]");
  synth_cmd->add_option("--indicators", spec.indicators,
                        "non-target indicators per country [default: 3]");
  synth_cmd->add_option("--structure", synth_structure, "linear or nonlinear [default: linear]");
  synth_cmd->add_option("--noise", spec.noise_scale, "target noise scale [default: 0]");
  synth_cmd->add_option("--seed", synth_seed, "generator seed [default: 1]");
  synth_cmd->add_option("--out", synth_out, "output CSV path")->required();

  auto* run_cmd = app.add_subcommand("run", "train, benchmark and evaluate from a config file");
  std::string run_config_path;
  run_cmd->add_option("config", run_config_path, "config file path")->required();
  run_cmd->footer(config_key_help());
  std::deque<std::string> holders;
  std::vector<std::pair<std::string, CLI::Option*>> bindings;
  for (const auto& doc : kConfigKeys) {
    holders.emplace_back();
    auto* opt = run_cmd->add_option("--" + std::string(doc.key), holders.back(),
                                    std::string(doc.desc) + " [default: " + doc.default_value + "]");
    bindings.emplace_back(doc.key, opt);
  }

  std::vector<const char*> argv;
  argv.push_back("tdcast");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(validate_path, validate_target, out);
    if (synth_cmd->parsed()) {
      spec.structure = synthetic_structure_from_string(synth_structure);
      spec.seed = static_cast<std::uint64_t>(synth_seed);
      return cmd_synth(spec, synth_out, out);
    }
    if (run_cmd->parsed()) {
      std::vector<std::pair<std::string, std::string>> overrides;
      auto holder = holders.begin();
      for (const auto& [key, opt] : bindings) {
        if (opt->count() > 0) overrides.emplace_back(key, *holder);
        ++holder;
      }
      return cmd_run(run_config_path, overrides, out);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace tdcast
