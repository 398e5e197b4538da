// Command-line harness: graph diagnostics, fitting, evaluation, sampling,
// oracle checks, classification and data ingestion. Every report is a list
// of key=value lines on stdout.
//
// Exit codes: 0 success, 1 a check failed, 2 usage or I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "localscore/datasets.hpp"
#include "localscore/errors.hpp"
#include "localscore/estimation.hpp"
#include "localscore/oracle.hpp"
#include "localscore/sampling.hpp"

using namespace localscore;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Stream ids, so that each random quantity is independent of the others.
constexpr std::uint64_t kStreamTruth = 1;
constexpr std::uint64_t kStreamTrain = 2;
constexpr std::uint64_t kStreamTest = 3;
constexpr std::uint64_t kStreamSplit = 4;
constexpr std::uint64_t kStreamNoise = 5;
constexpr std::uint64_t kStreamAis = 6;
constexpr std::uint64_t kStreamCheck = 7;
constexpr std::uint64_t kStreamSample = 8;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LOCALSCORE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("LOCALSCORE_SEED is not an unsigned integer: ") + env);
    }
  }
  return 1;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void emit(const std::string& key, const std::string& value) { std::cout << key << '=' << value << '\n'; }
void emit(const std::string& key, const char* value) { emit(key, std::string(value)); }
void emit(const std::string& key, double value) { emit(key, fmt(value)); }
void emit(const std::string& key, bool value) { emit(key, std::string(value ? "true" : "false")); }
void emit(const std::string& key, std::size_t value) { emit(key, std::to_string(value)); }

template <typename T>
std::string join(const std::vector<T>& v, const char* sep = ",") {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? sep : "") << v[i];
  return out.str();
}

// ---------------------------------------------------------------- graph

struct GraphArgs {
  std::string space = "hypercube:2";
  int radius = 1;
  std::string blocks;
  std::string potential = "pl";
  std::string active;
  std::string graph_file;
  std::string edges_out;
};

int cmd_graph(const GraphArgs& a) {
  std::shared_ptr<const NeighborhoodSystem> system;
  std::optional<BlockSystem> block_system;
  if (!a.graph_file.empty()) {
    std::ifstream in(a.graph_file);
    if (!in) throw InputError("cannot open " + a.graph_file);
    system = std::make_shared<GraphNeighborhood>(std::make_shared<const NeighborhoodGraph>(read_edge_list(in)));
  } else {
    const auto space = parse_space_spec(a.space);
    if (!a.blocks.empty()) {
      if (space.kind() != SampleSpace::Kind::Hypercube) throw InputError("--blocks needs a hypercube space");
      block_system = BlockSystem::parse(space.dimension(), a.blocks);
      system = std::make_shared<HypercubeBlockNeighborhood>(*block_system);
    } else if (space.kind() == SampleSpace::Kind::Hypercube) {
      system = std::make_shared<HammingNeighborhood>(space.dimension(), a.radius);
    } else if (space.kind() == SampleSpace::Kind::LabelRange) {
      system = std::make_shared<LabelBandNeighborhood>(space.size(), static_cast<Index>(a.radius));
    } else {
      throw InputError("enumerated spaces need --graph-file");
    }
  }
  const auto graph = materialize(*system);
  std::vector<Index> active = a.active.empty() ? all_points(graph.space()) : std::vector<Index>{};
  for (std::size_t i : a.active.empty() ? std::vector<std::size_t>{} : parse_index_list(a.active)) {
    if (!graph.space().contains(static_cast<Index>(i))) throw InputError("active point out of range: " + std::to_string(i));
    active.push_back(static_cast<Index>(i));
  }

  PotentialClass potential = PotentialClass::StrictlyConvex;
  std::string potential_name = a.potential;
  if (block_system) {
    // Composite likelihood: strict convexity comes from the rank condition.
    potential_name = "cl";
    LocalPotentialFamily family(PotentialKind::composite_likelihood(), system);
    emit("rank_condition", family.locally_strictly_convex());
    potential = family.potential_class();
  } else if (a.potential.rfind("ps", 0) == 0) {
    potential = PotentialClass::PseudoSpherical;
  } else if (!(a.potential == "pl" || a.potential == "rm" || a.potential.rfind("dp", 0) == 0)) {
    throw InputError("unknown potential '" + a.potential + "' (pl, rm, dp[:g], ps[:g])");
  }

  const auto d = diagnose(graph, active, potential);
  emit("space", graph.space().describe());
  emit("neighborhood", system->describe());
  emit("potential", potential_name);
  emit("active_points", active.size());
  emit("edges", graph.edge_count());
  emit("connected", is_connected(graph));
  emit("covers_n", d.covers_n);
  emit("covers_b", d.covers_b);
  emit("g0_connected", d.g0_connected);
  emit("g0prime_connected", d.g0prime_connected);
  emit("component_count_g0", d.component_count_g0);
  emit("component_count_g0prime", d.component_count_g0prime);
  if (block_system) {
    const bool cover = block_system->covers_all_coordinates();
    emit("block_cover", std::string(cover ? "cover holds" : "cover fails") + "; " +
                            (d.g0_connected ? "connected" : "disconnected"));
  }
  std::string verdict = d.coincidence_guaranteed() ? "coincidence guaranteed" : "coincidence NOT guaranteed";
  if (!d.coincidence_guaranteed()) {
    if (potential == PotentialClass::PseudoSpherical) {
      verdict += "; G0' components: " + std::to_string(d.component_count_g0prime);
    } else {
      verdict += "; G0 components: " + std::to_string(d.component_count_g0);
    }
  }
  emit("verdict", verdict);
  if (!a.edges_out.empty()) {
    std::ofstream out(a.edges_out);
    if (!out) throw InputError("cannot write " + a.edges_out);
    write_edge_list(out, graph);
    emit("edges_written", a.edges_out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- config

// Defaults for `fit`; a config file and --set overrides are merged on top.
json default_fit_config() {
  return json{
      {"space", "hypercube:4"},
      {"model", "boltzmann"},
      {"score", "pl"},
      {"radius", 1},
      {"seed", default_seed()},
      {"n_train", 1000},
      {"n_test", 5000},
      {"output", ""},
      {"data",
       {{"source", "synthetic"},
        {"truth", "random"},
        {"sampler", "exact"},
        {"burn_in", nullptr},
        {"path", ""},
        {"test_path", ""},
        {"features", ""},
        {"binarize", false},
        {"noise", 0.0}}},
      {"logz", "exact"},
      {"ais", {{"temperatures", 1000}, {"chains", 100}}},
      {"fit",
       {{"max_iterations", 10000},
        {"gradient_tolerance", 1e-6},
        {"initial_step", 1.0},
        {"armijo_c", 1e-4},
        {"backtrack_factor", 0.5},
        {"l2_penalty", 0.0},
        {"max_displacement", 1.0},
        {"threads", 1}}},
  };
}

// key=value with a dotted key; the value is read as JSON when it parses,
// otherwise as a string.
void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  std::string pointer;
  std::stringstream parts(key);
  for (std::string part; std::getline(parts, part, '.');) pointer += "/" + part;
  const json::json_pointer ptr(pointer);
  if (!config.contains(ptr)) throw InputError("unknown config key '" + key + "'");
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  config[ptr] = value;
}

void check_known_keys(const json& defaults, const json& given, const std::string& prefix) {
  for (const auto& [k, v] : given.items()) {
    if (!defaults.contains(k)) throw InputError("unknown config key '" + prefix + k + "'");
    if (v.is_object() && defaults[k].is_object()) check_known_keys(defaults[k], v, prefix + k + ".");
  }
}

json load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json config = default_fit_config();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path);
    json file = json::parse(in, nullptr, false);
    if (file.is_discarded() || !file.is_object()) throw InputError("config " + path + " is not a JSON object");
    check_known_keys(config, file, "");
    config.merge_patch(file);
  }
  for (const auto& o : overrides) apply_override(config, o);
  return config;
}

void echo_config(const json& config, const std::string& prefix = "config.") {
  for (const auto& [k, v] : config.items()) {
    if (v.is_object()) {
      echo_config(v, prefix + k + ".");
    } else {
      emit(prefix + k, v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
}

template <typename T>
T get(const json& config, const char* pointer) {
  try {
    return config.at(json::json_pointer(pointer)).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("config value ") + pointer + " has the wrong type");
  }
}

FitConfig fit_config_from(const json& config) {
  FitConfig c;
  c.max_iterations = get<std::size_t>(config, "/fit/max_iterations");
  c.gradient_tolerance = get<double>(config, "/fit/gradient_tolerance");
  c.initial_step = get<double>(config, "/fit/initial_step");
  c.armijo_c = get<double>(config, "/fit/armijo_c");
  c.backtrack_factor = get<double>(config, "/fit/backtrack_factor");
  c.l2_penalty = get<double>(config, "/fit/l2_penalty");
  c.max_displacement = get<double>(config, "/fit/max_displacement");
  c.num_threads = get<unsigned>(config, "/fit/threads");
  c.validate();
  return c;
}

AisConfig ais_config_from(std::size_t temperatures, std::size_t chains) {
  AisConfig c;
  c.num_temperatures = temperatures;
  c.num_chains = chains;
  return c;
}

// ---------------------------------------------------------------- fit

void emit_fit_result(const FitResult& r, bool trace) {
  if (trace) {
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      std::cout << "trace iteration=" << i << " objective=" << fmt(r.trace[i].objective)
                << " gradient_norm=" << fmt(r.trace[i].gradient_norm) << " step=" << fmt(r.trace[i].step) << '\n';
    }
  }
  emit("final_objective", r.final_objective);
  emit("gradient_norm", r.gradient_norm);
  emit("iterations", r.iterations_used);
  emit("converged", r.converged);
}

double joint_log_z(const JointModel& model, const json& config, std::uint64_t seed) {
  const auto method = get<std::string>(config, "/logz");
  if (method == "exact") {
    emit("logz_method", std::string("exact"));
    return exact_log_z(model);
  }
  if (method != "ais") throw InputError("logz must be exact or ais");
  const auto* bm = dynamic_cast<const BoltzmannModel*>(&model);
  if (!bm) throw InputError("ais needs a boltzmann model");
  const auto r = ais_log_z(*bm,
                           ais_config_from(get<std::size_t>(config, "/ais/temperatures"),
                                           get<std::size_t>(config, "/ais/chains")),
                           RngStream(seed, kStreamAis));
  emit("logz_method", std::string("ais"));
  emit("logz_std_error", r.std_error);
  return r.estimate;
}

std::unique_ptr<JointModel> zero_joint_model(const std::string& kind, const SampleSpace& space) {
  if (kind == "boltzmann") {
    if (space.kind() != SampleSpace::Kind::Hypercube) throw InputError("boltzmann models need a hypercube space");
    return std::make_unique<BoltzmannModel>(BoltzmannModel::zeros(space.dimension()));
  }
  if (kind == "tabular") {
    if (!space.enumerable()) throw InputError("tabular models need an enumerable space");
    return std::make_unique<TabularModel>(space, std::vector<double>(space.size(), 0.0));
  }
  throw InputError("model must be boltzmann, tabular or conditional");
}

AnyModel as_any(const JointModel& model) {
  if (const auto* bm = dynamic_cast<const BoltzmannModel*>(&model)) return *bm;
  return dynamic_cast<const TabularModel&>(model);
}

struct JointData {
  std::vector<Index> train;
  std::vector<Index> test;
  std::optional<BoltzmannModel> truth;
};

JointData joint_data(const json& config, const SampleSpace& space, std::uint64_t seed) {
  JointData out;
  const auto source = get<std::string>(config, "/data/source");
  const auto n_train = get<std::size_t>(config, "/n_train");
  const auto n_test = get<std::size_t>(config, "/n_test");
  if (source == "synthetic") {
    if (space.kind() != SampleSpace::Kind::Hypercube) throw InputError("synthetic data needs a hypercube space");
    const auto truth_spec = get<std::string>(config, "/data/truth");
    if (truth_spec == "random") {
      RngStream rng(seed, kStreamTruth);
      out.truth = random_boltzmann(space.dimension(), rng);
    } else {
      out.truth = std::get<BoltzmannModel>(load_model(truth_spec));
      if (!(out.truth->space() == space)) throw InputError("truth model does not match the space");
    }
    const auto sampler = get<std::string>(config, "/data/sampler");
    RngStream train_rng(seed, kStreamTrain);
    RngStream test_rng(seed, kStreamTest);
    if (sampler == "exact") {
      const auto p = normalize(*out.truth);
      out.train = exact_sample(p, n_train, train_rng);
      if (n_test > 0) out.test = exact_sample(p, n_test, test_rng);
    } else if (sampler == "gibbs") {
      GibbsConfig g;
      const auto& burn = config.at(json::json_pointer("/data/burn_in"));
      if (!burn.is_null()) g.burn_in = burn.get<std::size_t>();
      out.train = gibbs_sample(*out.truth, n_train, g, train_rng);
      if (n_test > 0) out.test = gibbs_sample(*out.truth, n_test, g, test_rng);
    } else {
      throw InputError("data.sampler must be exact or gibbs");
    }
  } else if (source == "file") {
    const auto file = read_samples(get<std::string>(config, "/data/path"));
    if (!(file.space == space)) throw InputError("sample file space does not match " + space.describe());
    out.train = file.samples;
    const auto test_path = get<std::string>(config, "/data/test_path");
    if (!test_path.empty()) {
      const auto t = read_samples(test_path);
      if (!(t.space == space)) throw InputError("test file space does not match " + space.describe());
      out.test = t.samples;
    }
  } else if (source == "optdigits") {
    // Binarized feature vectors as hypercube points; labels are ignored.
    const auto features = parse_index_list(get<std::string>(config, "/data/features"));
    if (space.kind() != SampleSpace::Kind::Hypercube || static_cast<std::size_t>(space.dimension()) != features.size()) {
      throw InputError("space must be hypercube:<number of selected features>");
    }
    const auto data = ingest_optdigits(get<std::string>(config, "/data/path"), features, true);
    RngStream rng(seed, kStreamSplit);
    auto [train, test] = split(data, n_train, rng);
    out.train = as_hypercube_points(train);
    out.test = as_hypercube_points(test);
  } else {
    throw InputError("data.source must be synthetic, file or optdigits");
  }
  return out;
}

int fit_joint(const json& config, const FitConfig& fc, bool trace) {
  const auto seed = get<std::uint64_t>(config, "/seed");
  const auto space = parse_space_spec(get<std::string>(config, "/space"));
  const auto init = zero_joint_model(get<std::string>(config, "/model"), space);
  const auto data = joint_data(config, space, seed);
  const auto score = get<std::string>(config, "/score");
  FitResult r;
  if (score == "mle") {
    r = mle_fit(*init, data.train, fc);
  } else {
    const auto rule = LocalScore::from_spec(parse_score_spec(score), space, get<int>(config, "/radius"));
    emit("score_name", rule.name());
    r = fit(rule, *init, data.train, fc);
  }
  emit_fit_result(r, trace);
  const auto fitted = init->clone_with(r.parameters);
  emit("train_samples", data.train.size());
  if (data.truth && dynamic_cast<const BoltzmannModel*>(fitted.get())) {
    double worst = 0.0;
    for (std::size_t k = 0; k < r.parameters.size(); ++k) {
      worst = std::max(worst, std::abs(r.parameters[k] - data.truth->parameters()[k]));
    }
    emit("max_abs_error", worst);
  }
  if (!data.test.empty()) {
    const double log_z = joint_log_z(*fitted, config, seed);
    emit("log_z", log_z);
    emit("test_samples", data.test.size());
    emit("test_loss", negative_log_loss(*fitted, data.test, log_z));
  }
  const auto output = get<std::string>(config, "/output");
  if (!output.empty()) {
    save_model(output, as_any(*fitted));
    emit("model_written", output);
  }
  return kExitOk;
}

int fit_conditional(const json& config, const FitConfig& fc, bool trace) {
  const auto seed = get<std::uint64_t>(config, "/seed");
  const auto space = parse_space_spec(get<std::string>(config, "/space"));
  if (space.kind() != SampleSpace::Kind::LabelRange) throw InputError("conditional models need a labels:L space");
  if (get<std::string>(config, "/data/source") != "optdigits") throw InputError("conditional fits read optdigits data");
  const auto features = parse_index_list(get<std::string>(config, "/data/features"));
  const auto data = ingest_optdigits(get<std::string>(config, "/data/path"), features,
                                     get<bool>(config, "/data/binarize"));
  const std::size_t d = data.features.empty() ? 0 : data.features.front().size();
  RngStream split_rng(seed, kStreamSplit);
  auto [train, test] = split(data, get<std::size_t>(config, "/n_train"), split_rng);
  RngStream noise_rng(seed, kStreamNoise);
  const auto touched = inject_label_noise(train, get<double>(config, "/data/noise"), space.size(), noise_rng);
  emit("noisy_labels", touched);
  const auto init = ConditionalModel::zeros(space.size(), d);
  const auto score = get<std::string>(config, "/score");
  FitResult r;
  if (score == "mle") {
    r = mle_fit(init, train, fc);
  } else {
    const auto rule = LocalScore::from_spec(parse_score_spec(score), space, get<int>(config, "/radius"));
    emit("score_name", rule.name());
    r = fit(rule, init, train, fc);
  }
  emit_fit_result(r, trace);
  const auto fitted = init.with_parameters(r.parameters);
  emit("train_samples", train.size());
  emit("train_loss", negative_log_loss(fitted, train));
  if (test.size() > 0) {
    emit("test_samples", test.size());
    emit("test_loss", negative_log_loss(fitted, test));
    emit("test_error", test_error(fitted, test));
  }
  const auto output = get<std::string>(config, "/output");
  if (!output.empty()) {
    save_model(output, fitted);
    emit("model_written", output);
  }
  return kExitOk;
}

int cmd_fit(const std::string& config_path, const std::vector<std::string>& overrides, bool trace) {
  const json config = load_config(config_path, overrides);
  echo_config(config);
  const FitConfig fc = fit_config_from(config);
  if (get<std::string>(config, "/model") == "conditional") return fit_conditional(config, fc, trace);
  return fit_joint(config, fc, trace);
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string model;
  std::string data;
  std::string optdigits;
  std::string features;
  bool binarize = false;
  std::string logz = "exact";
  std::size_t temperatures = 1000;
  std::size_t chains = 100;
  std::uint64_t seed = 0;
};

int cmd_eval(const EvalArgs& a) {
  const auto model = load_model(a.model);
  if (const auto* cm = std::get_if<ConditionalModel>(&model)) {
    if (a.optdigits.empty()) throw InputError("conditional models are evaluated on --optdigits data");
    const auto data = ingest_optdigits(a.optdigits, parse_index_list(a.features.empty() ? "0-63" : a.features),
                                       a.binarize);
    emit("test_samples", data.size());
    emit("test_loss", negative_log_loss(*cm, data));
    emit("test_error", test_error(*cm, data));
    return kExitOk;
  }
  const JointModel& joint = std::holds_alternative<BoltzmannModel>(model)
                                ? static_cast<const JointModel&>(std::get<BoltzmannModel>(model))
                                : static_cast<const JointModel&>(std::get<TabularModel>(model));
  if (a.data.empty()) throw InputError("--data is required for joint models");
  const auto file = read_samples(a.data);
  if (!(file.space == joint.space())) throw InputError("sample file space does not match the model");
  double log_z = 0.0;
  if (a.logz == "exact") {
    log_z = exact_log_z(joint);
  } else if (a.logz == "ais") {
    const auto* bm = std::get_if<BoltzmannModel>(&model);
    if (!bm) throw InputError("ais needs a boltzmann model");
    const auto r = ais_log_z(*bm, ais_config_from(a.temperatures, a.chains), RngStream(a.seed, kStreamAis));
    log_z = r.estimate;
    emit("logz_std_error", r.std_error);
  } else {
    throw InputError("--logz must be exact or ais");
  }
  emit("logz_method", a.logz);
  emit("log_z", log_z);
  emit("test_samples", file.samples.size());
  emit("test_loss", negative_log_loss(joint, file.samples, log_z));
  return kExitOk;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  std::string model;
  int random_boltzmann_dim = 0;
  std::string save_model_path;
  std::size_t n = 1000;
  std::string sampler = "auto";
  std::optional<std::size_t> burn_in;
  std::size_t thinning = 1;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_sample(const SampleArgs& a) {
  std::optional<AnyModel> model;
  if (a.random_boltzmann_dim > 0) {
    RngStream rng(a.seed, kStreamTruth);
    model = random_boltzmann(a.random_boltzmann_dim, rng);
  } else if (!a.model.empty()) {
    model = load_model(a.model);
  } else {
    throw InputError("give --model or --random-boltzmann");
  }
  if (std::holds_alternative<ConditionalModel>(*model)) throw InputError("conditional models cannot be sampled");
  if (!a.save_model_path.empty()) {
    save_model(a.save_model_path, *model);
    emit("model_written", a.save_model_path);
  }
  const JointModel& joint = std::holds_alternative<BoltzmannModel>(*model)
                                ? static_cast<const JointModel&>(std::get<BoltzmannModel>(*model))
                                : static_cast<const JointModel&>(std::get<TabularModel>(*model));
  std::string sampler = a.sampler;
  if (sampler == "auto") sampler = joint.space().enumerable() ? "exact" : "gibbs";
  RngStream rng(a.seed, kStreamSample);
  std::vector<Index> samples;
  if (sampler == "exact") {
    samples = exact_sample(normalize(joint), a.n, rng);
  } else if (sampler == "gibbs") {
    const auto* bm = std::get_if<BoltzmannModel>(&*model);
    if (!bm) throw InputError("gibbs sampling needs a boltzmann model");
    GibbsConfig g;
    g.burn_in = a.burn_in;
    g.thinning = a.thinning;
    samples = gibbs_sample(*bm, a.n, g, rng);
    emit("burn_in", g.burn_in.value_or(100 * static_cast<std::size_t>(bm->dimension())));
  } else {
    throw InputError("--sampler must be auto, exact or gibbs");
  }
  emit("sampler", sampler);
  emit("samples", samples.size());
  emit("seed", std::to_string(a.seed));
  if (a.out.empty()) throw InputError("--out is required");
  write_samples(a.out, joint.space(), samples, a.seed);
  emit("samples_written", a.out);
  return kExitOk;
}

// ---------------------------------------------------------------- check

const std::vector<std::string> kCheckNames = {"properness", "coincidence", "score_paths", "block_connectivity",
                                              "divergence_identity"};

struct CheckArgs {
  std::vector<std::string> names;
  std::vector<std::string> expect_fail;
  std::string score = "pl";
  std::string space = "hypercube:3";
  int radius = 1;
  std::size_t trials = 200;
  int max_dimension = 4;
  std::uint64_t seed = 0;
};

int cmd_check(const CheckArgs& a) {
  const std::set<std::string> known(kCheckNames.begin(), kCheckNames.end());
  for (const auto& n : a.names) {
    if (!known.count(n)) throw InputError("unknown check '" + n + "' (" + join(kCheckNames) + ")");
  }
  for (const auto& n : a.expect_fail) {
    if (!known.count(n)) throw InputError("unknown check '" + n + "' in --expect-fail");
  }
  const auto names = a.names.empty() ? kCheckNames : a.names;
  const std::set<std::string> expected(a.expect_fail.begin(), a.expect_fail.end());
  const auto space = parse_space_spec(a.space);
  const auto rule = LocalScore::from_spec(parse_score_spec(a.score), space, a.radius);
  RngStream rng(a.seed, kStreamCheck);
  std::size_t unexpected = 0;
  for (const auto& name : names) {
    OracleReport report;
    if (name == "properness") report = check_properness(rule, a.trials, rng);
    if (name == "coincidence") report = check_coincidence(rule.family(), a.trials, rng);
    if (name == "score_paths") report = check_score_paths(rule.family(), a.trials, rng);
    if (name == "block_connectivity") report = check_block_connectivity(a.max_dimension, a.trials, rng);
    if (name == "divergence_identity") report = check_divergence_identity(rule.family(), a.trials, rng);
    std::cout << report.to_text();
    const bool expect_fail = expected.count(name) > 0;
    if (report.pass == expect_fail) {
      ++unexpected;
      emit("outcome", std::string(expect_fail ? "unexpected pass" : "unexpected fail"));
    } else {
      emit("outcome", std::string(expect_fail ? "expected fail" : "pass"));
    }
    std::cout << '\n';
  }
  emit("checks", names.size());
  emit("unexpected", unexpected);
  emit("suite", std::string(unexpected == 0 ? "pass" : "fail"));
  return unexpected == 0 ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  std::string model;
  std::string input;
  std::string features;
  bool binarize = false;
  std::string x;
  bool per_row = false;
};

int cmd_classify(const ClassifyArgs& a) {
  const auto any = load_model(a.model);
  const auto* cm = std::get_if<ConditionalModel>(&any);
  if (!cm) throw InputError("classify needs a conditional model");
  if (!a.x.empty()) {
    std::vector<double> x;
    std::stringstream parts(a.x);
    for (std::string item; std::getline(parts, item, ',');) {
      try {
        x.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw InputError("--x entries must be numbers, got '" + item + "'");
      }
    }
    if (x.size() != cm->features()) {
      throw InputError("--x has " + std::to_string(x.size()) + " entries, the model expects " +
                       std::to_string(cm->features()));
    }
    emit("predicted", std::to_string(cm->classify(x)));
    return kExitOk;
  }
  if (a.input.empty()) throw InputError("give --x or --input");
  const auto data = ingest_optdigits(a.input, parse_index_list(a.features.empty() ? "0-63" : a.features), a.binarize);
  if (a.per_row) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      std::cout << "row=" << i << " label=" << data.labels[i] << " predicted=" << cm->classify(data.features[i])
                << '\n';
    }
  }
  emit("rows", data.size());
  emit("test_error", test_error(*cm, data));
  emit("test_loss", negative_log_loss(*cm, data));
  return kExitOk;
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::string input;
  std::string features;
  bool binarize = false;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
};

int cmd_ingest(const IngestArgs& a) {
  auto data = ingest_optdigits(a.input, a.features.empty() ? std::vector<std::size_t>{} : parse_index_list(a.features),
                               a.binarize);
  RngStream rng(a.seed, kStreamNoise);
  const auto touched = inject_label_noise(data, a.noise, kOptdigitsLabels, rng);
  std::vector<std::size_t> counts(kOptdigitsLabels, 0);
  for (Index y : data.labels) ++counts[y];
  emit("rows", data.size());
  emit("features", data.features.empty() ? std::size_t{0} : data.features.front().size());
  emit("binarized", a.binarize);
  emit("noisy_labels", touched);
  emit("label_counts", join(counts));
  if (a.out.empty()) return kExitOk;
  if (a.format == "samples") {
    if (!a.binarize) throw InputError("--format samples needs --binarize");
    const auto dim = static_cast<int>(data.features.front().size());
    write_samples(a.out, SampleSpace::hypercube(dim), as_hypercube_points(data), std::nullopt);
  } else if (a.format == "csv") {
    std::ofstream out(a.out);
    if (!out) throw InputError("cannot write " + a.out);
    for (std::size_t i = 0; i < data.size(); ++i) {
      for (double v : data.features[i]) out << static_cast<long long>(v) << ',';
      out << data.labels[i] << '\n';
    }
  } else {
    throw InputError("--format must be csv or samples");
  }
  emit("written", a.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimation with local proper scoring rules on discrete spaces"};
  app.require_subcommand(1);
  app.footer("Default seed: $LOCALSCORE_SEED, else 1. Exit codes: 0 ok, 1 check failed, 2 usage or I/O error.");

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  GraphArgs graph;
  auto* g = app.add_subcommand("graph", "Neighborhood graph diagnostics");
  g->add_option("--space", graph.space, "hypercube:D or labels:L")->capture_default_str();
  g->add_option("--radius", graph.radius, "Hamming radius or label band")->capture_default_str();
  g->add_option("--blocks", graph.blocks, "Composite-likelihood blocks, e.g. \"1,2;3\"");
  g->add_option("--potential", graph.potential, "pl, rm, dp[:g] or ps[:g]")->capture_default_str();
  g->add_option("--active", graph.active, "Active points Y0 as an index list (default: all)");
  g->add_option("--graph-file", graph.graph_file, "Read the graph from an edge-list file");
  g->add_option("--edges-out", graph.edges_out, "Write the edge list");

  std::string config_path;
  std::vector<std::string> overrides;
  bool trace = false;
  auto* f = app.add_subcommand("fit", "Fit a model by minimizing an empirical score");
  f->add_option("--config", config_path, "JSON config file");
  f->add_option("--set", overrides, "Override a config value, key=value with dotted keys")->take_all();
  f->add_flag("--trace", trace, "Print the optimizer trace");
  f->footer("Config keys and defaults:\n" + default_fit_config().dump(2));

  EvalArgs eval;
  eval.seed = seed;
  auto* e = app.add_subcommand("eval", "Test negative log-loss of a saved model");
  e->add_option("--model", eval.model, "Model JSON file")->required();
  e->add_option("--data", eval.data, "Sample file (joint models)");
  e->add_option("--optdigits", eval.optdigits, "Labeled CSV (conditional models)");
  e->add_option("--features", eval.features, "Feature indices, e.g. 0-63");
  e->add_flag("--binarize", eval.binarize, "Map 0 to -1 and 1..16 to +1");
  e->add_option("--logz", eval.logz, "exact or ais")->capture_default_str();
  e->add_option("--ais-temperatures", eval.temperatures)->capture_default_str();
  e->add_option("--ais-chains", eval.chains)->capture_default_str();
  e->add_option("--seed", eval.seed);

  SampleArgs sample;
  sample.seed = seed;
  auto* s = app.add_subcommand("sample", "Draw samples from a model");
  s->add_option("--model", sample.model, "Model JSON file");
  s->add_option("--random-boltzmann", sample.random_boltzmann_dim, "Use a random Boltzmann machine of this dimension");
  s->add_option("--save-model", sample.save_model_path, "Write the sampled model");
  s->add_option("--n", sample.n, "Number of samples")->capture_default_str();
  s->add_option("--sampler", sample.sampler, "auto, exact or gibbs")->capture_default_str();
  s->add_option("--burn-in", sample.burn_in, "Gibbs burn-in sweeps (default 100*D)");
  s->add_option("--thinning", sample.thinning)->capture_default_str();
  s->add_option("--seed", sample.seed);
  s->add_option("--out", sample.out, "Sample file to write")->required();

  CheckArgs check;
  check.seed = seed;
  auto* c = app.add_subcommand("check", "Run oracle checks");
  c->add_option("names", check.names, "Checks to run (default: all): " + join(kCheckNames, ", "));
  c->add_option("--expect-fail", check.expect_fail, "Checks that are expected to fail")->take_all();
  c->add_option("--score", check.score, "Score spec")->capture_default_str();
  c->add_option("--space", check.space)->capture_default_str();
  c->add_option("--radius", check.radius, "Hamming radius or label band")->capture_default_str();
  c->add_option("--trials", check.trials)->capture_default_str();
  c->add_option("--max-dimension", check.max_dimension, "For block_connectivity")->capture_default_str();
  c->add_option("--seed", check.seed);

  ClassifyArgs classify;
  auto* k = app.add_subcommand("classify", "Predict labels with a conditional model");
  k->add_option("--model", classify.model)->required();
  k->add_option("--input", classify.input, "Labeled CSV");
  k->add_option("--features", classify.features, "Feature indices, e.g. 0-63");
  k->add_flag("--binarize", classify.binarize);
  k->add_option("--x", classify.x, "One comma-separated feature vector");
  k->add_flag("--per-row", classify.per_row, "Print each prediction");

  IngestArgs ingest;
  ingest.seed = seed;
  auto* i = app.add_subcommand("ingest", "Read optdigits-style CSV data");
  i->add_option("--input", ingest.input)->required();
  i->add_option("--features", ingest.features, "Feature indices, e.g. 0,1,5-9 (default: all)");
  i->add_flag("--binarize", ingest.binarize, "Map 0 to -1 and 1..16 to +1");
  i->add_option("--noise", ingest.noise, "Fraction of labels to resample uniformly")->capture_default_str();
  i->add_option("--seed", ingest.seed);
  i->add_option("--out", ingest.out);
  i->add_option("--format", ingest.format, "csv or samples")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (*g) return cmd_graph(graph);
    if (*f) return cmd_fit(config_path, overrides, trace);
    if (*e) return cmd_eval(eval);
    if (*s) return cmd_sample(sample);
    if (*c) return cmd_check(check);
    if (*k) return cmd_classify(classify);
    if (*i) return cmd_ingest(ingest);
  } catch (const NonFiniteObjectiveError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
