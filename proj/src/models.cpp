#include "localscore/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "localscore/errors.hpp"

namespace localscore {

std::vector<double> JointModel::grad_log_f(Index y) const {
  std::vector<double> g(num_parameters(), 0.0);
  add_grad_log_f(y, 1.0, g);
  return g;
}

BoltzmannModel::BoltzmannModel(int dimension, std::vector<double> upper)
    : dimension_(dimension), space_(SampleSpace::hypercube(dimension)), upper_(std::move(upper)) {
  if (upper_.size() != num_couplings(dimension)) {
    throw InputError("Boltzmann model with D=" + std::to_string(dimension) + " needs " +
                     std::to_string(num_couplings(dimension)) + " couplings, got " + std::to_string(upper_.size()));
  }
  for (double w : upper_) {
    if (!std::isfinite(w)) throw InputError("couplings must be finite");
  }
  dense_.assign(dimension_, std::vector<double>(dimension_, 0.0));
  std::size_t k = 0;
  for (int i = 0; i < dimension_; ++i) {
    for (int j = i + 1; j < dimension_; ++j, ++k) {
      dense_[i][j] = upper_[k];
      dense_[j][i] = upper_[k];
    }
  }
}

BoltzmannModel BoltzmannModel::zeros(int dimension) {
  return BoltzmannModel(dimension, std::vector<double>(num_couplings(dimension), 0.0));
}

BoltzmannModel BoltzmannModel::from_matrix(const std::vector<std::vector<double>>& w) {
  const int d = static_cast<int>(w.size());
  std::vector<double> upper;
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(w[i].size()) != d) throw InputError("coupling matrix must be square");
    if (w[i][i] != 0.0) throw InputError("coupling matrix must have a zero diagonal");
    for (int j = i + 1; j < d; ++j) {
      if (w[i][j] != w[j][i]) throw InputError("coupling matrix must be symmetric");
      upper.push_back(w[i][j]);
    }
  }
  return BoltzmannModel(d, std::move(upper));
}

double BoltzmannModel::coupling(int i, int j) const {
  if (i < 0 || j < 0 || i >= dimension_ || j >= dimension_) throw InputError("coupling index out of range");
  return i == j ? diagonal_ : dense_[i][j];
}

double BoltzmannModel::local_field(Index y, int i) const {
  if (!space_.contains(y)) throw InputError("point out of range");
  double s = 0.0;
  const auto& row = dense_[i];
  for (int j = 0; j < dimension_; ++j) {
    if (j != i) s += row[j] * (((y >> j) & 1U) ? 1.0 : -1.0);
  }
  return s;
}

BoltzmannModel BoltzmannModel::with_diagonal_shift_for_testing(double c) const {
  BoltzmannModel copy = *this;
  copy.diagonal_ += c;
  return copy;
}

std::unique_ptr<JointModel> BoltzmannModel::clone_with(std::vector<double> parameters) const {
  auto m = std::make_unique<BoltzmannModel>(dimension_, std::move(parameters));
  m->diagonal_ = diagonal_;
  return m;
}

double BoltzmannModel::log_f(Index y) const {
  if (!space_.contains(y)) throw InputError("point out of range for " + space_.describe());
  double s = 0.0;
  std::size_t k = 0;
  for (int i = 0; i < dimension_; ++i) {
    const bool yi = (y >> i) & 1U;
    double row = 0.0;
    for (int j = i + 1; j < dimension_; ++j, ++k) {
      const bool yj = (y >> j) & 1U;
      row += yi == yj ? upper_[k] : -upper_[k];
    }
    s += row;
  }
  return 2.0 * s + dimension_ * diagonal_;
}

void BoltzmannModel::add_grad_log_f(Index y, double weight, std::span<double> grad) const {
  if (grad.size() != upper_.size()) throw InputError("gradient buffer has the wrong size");
  if (!space_.contains(y)) throw InputError("point out of range for " + space_.describe());
  std::size_t k = 0;
  for (int i = 0; i < dimension_; ++i) {
    const bool yi = (y >> i) & 1U;
    for (int j = i + 1; j < dimension_; ++j, ++k) {
      const bool yj = (y >> j) & 1U;
      grad[k] += yi == yj ? 2.0 * weight : -2.0 * weight;
    }
  }
}

TabularModel::TabularModel(SampleSpace space, std::vector<double> eta) : space_(std::move(space)), eta_(std::move(eta)) {
  if (!space_.enumerable()) throw UnsupportedError("tabular model needs an enumerable space");
  if (eta_.size() != space_.size()) throw InputError("tabular model needs one value per point");
  for (double v : eta_) {
    if (!std::isfinite(v)) throw InputError("tabular values must be finite");
  }
}

std::unique_ptr<JointModel> TabularModel::clone_with(std::vector<double> parameters) const {
  return std::make_unique<TabularModel>(space_, std::move(parameters));
}

double TabularModel::log_f(Index y) const {
  if (!space_.contains(y)) throw InputError("point out of range");
  return eta_[y];
}

void TabularModel::add_grad_log_f(Index y, double weight, std::span<double> grad) const {
  if (grad.size() != eta_.size()) throw InputError("gradient buffer has the wrong size");
  if (!space_.contains(y)) throw InputError("point out of range");
  grad[y] += weight;
}

ConditionalModel::ConditionalModel(Index labels, std::size_t features, std::vector<double> theta, bool gauge_fixed)
    : labels_(labels),
      features_(features),
      theta_(std::move(theta)),
      gauge_fixed_(gauge_fixed),
      space_(SampleSpace::label_range(labels)) {
  if (features_ == 0) throw InputError("conditional model needs at least one feature");
  if (theta_.size() != labels_ * features_) {
    throw InputError("conditional model needs L*d = " + std::to_string(labels_ * features_) + " parameters");
  }
  for (double v : theta_) {
    if (!std::isfinite(v)) throw InputError("parameters must be finite");
  }
  if (gauge_fixed_) {
    for (std::size_t k = 0; k < features_; ++k) {
      if (theta_[(labels_ - 1) * features_ + k] != 0.0) throw InputError("gauge-fixed model needs a zero last row");
    }
  }
}

ConditionalModel ConditionalModel::zeros(Index labels, std::size_t features, bool gauge_fixed) {
  return ConditionalModel(labels, features, std::vector<double>(labels * features, 0.0), gauge_fixed);
}

ConditionalModel ConditionalModel::with_parameters(std::vector<double> theta) const {
  return ConditionalModel(labels_, features_, std::move(theta), gauge_fixed_);
}

void ConditionalModel::check_features(std::span<const double> x) const {
  if (x.size() != features_) {
    throw InputError("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                     std::to_string(features_));
  }
}

double ConditionalModel::log_f(Index y, std::span<const double> x) const {
  check_features(x);
  if (y >= labels_) throw InputError("label out of range");
  const double* row = theta_.data() + y * features_;
  double s = 0.0;
  for (std::size_t k = 0; k < features_; ++k) s += row[k] * x[k];
  return s;
}

void ConditionalModel::add_grad_log_f(Index y, std::span<const double> x, double weight, std::span<double> grad) const {
  check_features(x);
  if (y >= labels_) throw InputError("label out of range");
  if (grad.size() != theta_.size()) throw InputError("gradient buffer has the wrong size");
  if (gauge_fixed_ && y == labels_ - 1) return;
  double* row = grad.data() + y * features_;
  for (std::size_t k = 0; k < features_; ++k) row[k] += weight * x[k];
}

std::vector<double> ConditionalModel::grad_log_f(Index y, std::span<const double> x) const {
  std::vector<double> g(theta_.size(), 0.0);
  add_grad_log_f(y, x, 1.0, g);
  return g;
}

double ConditionalModel::log_z(std::span<const double> x) const {
  std::vector<double> v(labels_);
  for (Index y = 0; y < labels_; ++y) v[y] = log_f(y, x);
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double a : v) s += std::exp(a - m);
  return m + std::log(s);
}

Index ConditionalModel::classify(std::span<const double> x) const {
  Index best = 0;
  double best_value = log_f(0, x);
  for (Index y = 1; y < labels_; ++y) {
    const double v = log_f(y, x);
    if (v > best_value) {
      best = y;
      best_value = v;
    }
  }
  return best;
}

namespace {

std::vector<double> all_log_f(const JointModel& model) {
  const auto& space = model.space();
  if (!space.enumerable()) throw UnsupportedError("space too large to normalize exactly; use AIS");
  std::vector<double> v(space.size());
  for (Index y = 0; y < space.size(); ++y) v[y] = model.log_f(y);
  return v;
}

}  // namespace

Probability normalize(const JointModel& model) { return Probability::from_log_weights(all_log_f(model)); }

double exact_log_z(const JointModel& model) {
  const auto v = all_log_f(model);
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double a : v) s += std::exp(a - m);
  return m + std::log(s);
}

namespace {

using nlohmann::json;

std::vector<double> doubles(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string("model field '") + what + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError(std::string("model field '") + what + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string model_to_json(const AnyModel& model) {
  json j;
  if (const auto* bm = std::get_if<BoltzmannModel>(&model)) {
    if (bm->diagonal_shift() != 0.0) throw UnsupportedError("diagonal-shifted models are not persisted");
    j["kind"] = "boltzmann";
    j["D"] = bm->dimension();
    j["upper"] = bm->parameters();
  } else if (const auto* cm = std::get_if<ConditionalModel>(&model)) {
    j["kind"] = "conditional";
    j["L"] = cm->labels();
    j["d"] = cm->features();
    json rows = json::array();
    for (Index y = 0; y < cm->labels(); ++y) {
      const auto begin = cm->parameters().begin() + static_cast<std::ptrdiff_t>(y * cm->features());
      rows.push_back(std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(cm->features())));
    }
    j["theta"] = rows;
    if (cm->gauge_fixed()) j["gauge_fixed"] = true;
  } else {
    const auto& tm = std::get<TabularModel>(model);
    j["kind"] = "tabular";
    j["space"] = tm.space().describe();
    j["eta"] = tm.parameters();
  }
  return j.dump();
}

AnyModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("model document is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw InputError("model document needs a kind");
  const auto kind = j["kind"].get<std::string>();
  try {
    if (kind == "boltzmann") {
      return BoltzmannModel(j.at("D").get<int>(), doubles(j.at("upper"), "upper"));
    }
    if (kind == "conditional") {
      const auto labels = j.at("L").get<Index>();
      const auto d = j.at("d").get<std::size_t>();
      const auto& rows = j.at("theta");
      if (!rows.is_array() || rows.size() != labels) throw InputError("theta must have L rows");
      std::vector<double> theta;
      for (const auto& row : rows) {
        auto r = doubles(row, "theta");
        if (r.size() != d) throw InputError("each theta row must have d entries");
        theta.insert(theta.end(), r.begin(), r.end());
      }
      return ConditionalModel(labels, d, std::move(theta), j.value("gauge_fixed", false));
    }
    if (kind == "tabular") {
      const auto desc = j.at("space").get<std::string>();
      const auto sp = desc.find(' ');
      if (sp == std::string::npos) throw InputError("tabular space must read '<kind> <param>'");
      return TabularModel(SampleSpace::parse(desc.substr(0, sp), desc.substr(sp + 1)), doubles(j.at("eta"), "eta"));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model document: ") + e.what());
  }
  throw InputError("unknown model kind '" + kind + "'");
}

void save_model(const std::string& path, const AnyModel& model) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file " + path);
  out << model_to_json(model) << '\n';
  if (!out) throw InputError("failed writing model file " + path);
}

AnyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace localscore
