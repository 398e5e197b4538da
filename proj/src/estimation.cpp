#include "localscore/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "localscore/errors.hpp"

namespace localscore {

void FitConfig::validate() const {
  if (max_iterations == 0) throw InputError("max_iterations must be positive");
  if (!(gradient_tolerance > 0.0)) throw InputError("gradient_tolerance must be positive");
  if (!(initial_step > 0.0)) throw InputError("initial_step must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw InputError("armijo_c must lie in (0, 1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) throw InputError("backtrack_factor must lie in (0, 1)");
  if (!(l2_penalty >= 0.0) || !std::isfinite(l2_penalty)) throw InputError("l2_penalty must be nonnegative");
  if (num_threads == 0) throw InputError("num_threads must be positive");
  if (max_backtracks == 0) throw InputError("max_backtracks must be positive");
  if (!(max_displacement >= 0.0) || !std::isfinite(max_displacement)) {
    throw InputError("max_displacement must be nonnegative");
  }
}

double infinity_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

FitResult minimize(const Objective& objective, std::vector<double> x0, const FitConfig& config) {
  config.validate();
  FitResult result;
  std::vector<double> x = std::move(x0);
  std::vector<double> g(x.size(), 0.0);
  double f = objective(x, &g);
  if (!std::isfinite(f)) throw NonFiniteObjectiveError(0, x, "objective at the initial point is not finite");
  double last_step = config.initial_step / 2.0;
  std::vector<double> trial(x.size());
  std::vector<double> trial_grad(x.size());
  bool stalled = false;
  for (std::size_t it = 0;; ++it) {
    const double gnorm = infinity_norm(g);
    result.trace.push_back({f, gnorm, it == 0 ? 0.0 : last_step});
    if (gnorm <= config.gradient_tolerance) {
      result.converged = true;
      break;
    }
    // An accepted step that left the objective unchanged: rounding floor.
    if (stalled || it == config.max_iterations) break;
    double slope = 0.0;
    for (double gi : g) slope -= gi * gi;
    double step = 2.0 * last_step;
    if (config.max_displacement > 0.0) step = std::min(step, config.max_displacement / gnorm);
    bool accepted = false;
    double f_new = f;
    std::optional<NonFiniteObjectiveError> last_failure;
    for (std::size_t b = 0; b < config.max_backtracks; ++b, step *= config.backtrack_factor) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - step * g[i];
      double ft = 0.0;
      try {
        ft = objective(trial, &trial_grad);
      } catch (const NonFiniteObjectiveError& e) {
        last_failure = e;
        continue;
      }
      if (!std::isfinite(ft)) continue;
      if (ft <= f + config.armijo_c * step * slope) {
        accepted = true;
        f_new = ft;
        break;
      }
    }
    if (!accepted) {
      if (last_failure) throw *last_failure;
      break;
    }
    stalled = !(f_new < f);
    x.swap(trial);
    g.swap(trial_grad);
    f = f_new;
    result.iterations_used = it + 1;
    last_step = step;
  }
  result.parameters = x;
  result.final_objective = f;
  result.gradient_norm = infinity_norm(g);
  return result;
}

void LabeledData::validate(std::size_t feature_dim, Index num_labels) const {
  if (features.size() != labels.size()) throw InputError("features and labels must have the same length");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (features[i].size() != feature_dim) {
      throw InputError("sample " + std::to_string(i) + " has " + std::to_string(features[i].size()) +
                       " features, expected " + std::to_string(feature_dim));
    }
    if (labels[i] >= num_labels) throw InputError("sample " + std::to_string(i) + " has an out-of-range label");
  }
}

namespace {

struct WeightedPoint {
  Index y;
  double weight;
  std::size_t first_index;
};

// Distinct points in increasing order with weight count / n.
std::vector<WeightedPoint> deduplicate(std::span<const Index> samples, const SampleSpace& space) {
  if (samples.empty()) throw InputError("sample list is empty");
  std::map<Index, std::pair<std::size_t, std::size_t>> counts;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!space.contains(samples[i])) throw InputError("sample " + std::to_string(i) + " is outside " + space.describe());
    auto [it, inserted] = counts.try_emplace(samples[i], 0, i);
    ++it->second.first;
  }
  std::vector<WeightedPoint> out;
  const double n = static_cast<double>(samples.size());
  for (const auto& [y, c] : counts) out.push_back({y, static_cast<double>(c.first) / n, c.second});
  return out;
}

// Runs body(i, worker) for i in [0, n) on `threads` workers with a static
// interleaved partition. Exceptions from the lowest failing index win.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i, 0U);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::size_t> error_index(threads, n);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) {
        try {
          body(i, t);
        } catch (...) {
          errors[t] = std::current_exception();
          error_index[t] = i;
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  std::size_t best = n;
  std::exception_ptr first;
  for (unsigned t = 0; t < threads; ++t) {
    if (errors[t] && error_index[t] < best) {
      best = error_index[t];
      first = errors[t];
    }
  }
  if (first) std::rethrow_exception(first);
}

double add_penalty(const std::vector<double>& x, double l2, std::vector<double>* grad) {
  if (l2 == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] * x[i];
    if (grad) (*grad)[i] += l2 * x[i];
  }
  return 0.5 * l2 * s;
}

std::string describe_value(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Weighted sum of scores over points and its parameter gradient.
double joint_score_sum(const LocalScore& rule, const JointModel& model, const std::vector<WeightedPoint>& points,
                       unsigned threads, std::vector<double>* grad) {
  struct Term {
    double value = 0.0;
    std::vector<std::pair<Index, double>> d_log_f;
  };
  std::vector<Term> terms(points.size());
  std::vector<std::unordered_map<Index, double>> memos(std::max(1U, threads));
  const auto& params = model.parameters();
  parallel_for(points.size(), threads, [&](std::size_t i, unsigned worker) {
    auto& memo = memos[worker];
    LogDensity log_f = [&](Index z) {
      auto it = memo.find(z);
      if (it != memo.end()) return it->second;
      const double v = model.log_f(z);
      memo.emplace(z, v);
      return v;
    };
    const auto& pt = points[i];
    try {
      if (grad) {
        auto sg = rule.value_and_gradient(pt.y, log_f);
        terms[i].value = sg.value;
        terms[i].d_log_f = std::move(sg.d_log_f);
      } else {
        terms[i].value = rule.value(pt.y, log_f);
      }
    } catch (const InputError& e) {
      throw NonFiniteObjectiveError(pt.first_index, params, e.what());
    }
    if (!std::isfinite(terms[i].value)) {
      throw NonFiniteObjectiveError(pt.first_index, params, "score = " + describe_value(terms[i].value));
    }
  });
  double total = 0.0;
  std::map<Index, double> coefficients;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += points[i].weight * terms[i].value;
    if (grad) {
      for (const auto& [z, d] : terms[i].d_log_f) coefficients[z] += points[i].weight * d;
    }
  }
  if (grad) {
    for (const auto& [z, c] : coefficients) model.add_grad_log_f(z, c, *grad);
  }
  return total;
}

std::vector<double> label_log_values(const ConditionalModel& model, std::span<const double> x) {
  std::vector<double> v(model.labels());
  for (Index y = 0; y < model.labels(); ++y) v[y] = model.log_f(y, x);
  return v;
}

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double a : v) s += std::exp(a - m);
  return m + std::log(s);
}

void check_rule_space(const LocalScore& rule, const SampleSpace& space) {
  if (!(rule.family().space() == space)) {
    throw InputError("score is defined on " + rule.family().space().describe() + " but the model lives on " +
                     space.describe());
  }
}

}  // namespace

Objective score_objective(const LocalScore& rule, const JointModel& model, std::span<const Index> samples,
                          const FitConfig& config) {
  config.validate();
  check_rule_space(rule, model.space());
  auto points = deduplicate(samples, model.space());
  std::shared_ptr<const JointModel> proto = model.clone_with(model.parameters());
  return [rule, proto, points = std::move(points), config](const std::vector<double>& x, std::vector<double>* grad) {
    const auto m = proto->clone_with(x);
    if (grad) grad->assign(x.size(), 0.0);
    double v = joint_score_sum(rule, *m, points, config.num_threads, grad);
    return v + add_penalty(x, config.l2_penalty, grad);
  };
}

Objective score_objective(const LocalScore& rule, const ConditionalModel& model, const LabeledData& data,
                          const FitConfig& config) {
  config.validate();
  check_rule_space(rule, model.space());
  if (data.size() == 0) throw InputError("sample list is empty");
  data.validate(model.features(), model.labels());
  auto shared = std::make_shared<const LabeledData>(data);
  return [rule, model, shared, config](const std::vector<double>& x, std::vector<double>* grad) {
    const auto m = model.with_parameters(x);
    const auto& d = *shared;
    const double w = 1.0 / static_cast<double>(d.size());
    std::vector<ScoreGradient> terms(d.size());
    parallel_for(d.size(), config.num_threads, [&](std::size_t i, unsigned) {
      const auto values = label_log_values(m, d.features[i]);
      LogDensity log_f = [&](Index z) { return values.at(z); };
      try {
        if (grad) {
          terms[i] = rule.value_and_gradient(d.labels[i], log_f);
        } else {
          terms[i].value = rule.value(d.labels[i], log_f);
        }
      } catch (const InputError& e) {
        throw NonFiniteObjectiveError(i, x, e.what());
      }
      if (!std::isfinite(terms[i].value)) {
        throw NonFiniteObjectiveError(i, x, "score = " + describe_value(terms[i].value));
      }
    });
    if (grad) grad->assign(x.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      total += w * terms[i].value;
      if (grad) {
        for (const auto& [z, dz] : terms[i].d_log_f) m.add_grad_log_f(z, d.features[i], w * dz, *grad);
      }
    }
    return total + add_penalty(x, config.l2_penalty, grad);
  };
}

Objective likelihood_objective(const JointModel& model, std::span<const Index> samples, const FitConfig& config) {
  config.validate();
  if (!model.space().enumerable()) throw UnsupportedError("maximum likelihood needs an enumerable space");
  auto points = deduplicate(samples, model.space());
  std::shared_ptr<const JointModel> proto = model.clone_with(model.parameters());
  return [proto, points = std::move(points), config](const std::vector<double>& x, std::vector<double>* grad) {
    const auto m = proto->clone_with(x);
    const Index size = m->space().size();
    std::vector<double> v(size);
    for (Index y = 0; y < size; ++y) v[y] = m->log_f(y);
    const double log_z = log_sum_exp(v);
    double total = log_z;
    for (const auto& pt : points) total -= pt.weight * v[pt.y];
    if (!std::isfinite(total)) {
      throw NonFiniteObjectiveError(points.front().first_index, x, "log-likelihood is not finite");
    }
    if (grad) {
      grad->assign(x.size(), 0.0);
      for (Index y = 0; y < size; ++y) m->add_grad_log_f(y, std::exp(v[y] - log_z), *grad);
      for (const auto& pt : points) m->add_grad_log_f(pt.y, -pt.weight, *grad);
    }
    return total + add_penalty(x, config.l2_penalty, grad);
  };
}

Objective likelihood_objective(const ConditionalModel& model, const LabeledData& data, const FitConfig& config) {
  config.validate();
  if (data.size() == 0) throw InputError("sample list is empty");
  data.validate(model.features(), model.labels());
  auto shared = std::make_shared<const LabeledData>(data);
  return [model, shared, config](const std::vector<double>& x, std::vector<double>* grad) {
    const auto m = model.with_parameters(x);
    const auto& d = *shared;
    const double w = 1.0 / static_cast<double>(d.size());
    if (grad) grad->assign(x.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto v = label_log_values(m, d.features[i]);
      const double log_z = log_sum_exp(v);
      const double term = log_z - v[d.labels[i]];
      if (!std::isfinite(term)) throw NonFiniteObjectiveError(i, x, "log-loss is not finite");
      total += w * term;
      if (grad) {
        for (Index y = 0; y < m.labels(); ++y) m.add_grad_log_f(y, d.features[i], w * std::exp(v[y] - log_z), *grad);
        m.add_grad_log_f(d.labels[i], d.features[i], -w, *grad);
      }
    }
    return total + add_penalty(x, config.l2_penalty, grad);
  };
}

double empirical_score(const LocalScore& rule, const JointModel& model, std::span<const Index> samples) {
  check_rule_space(rule, model.space());
  const auto points = deduplicate(samples, model.space());
  return joint_score_sum(rule, model, points, 1, nullptr);
}

double empirical_score(const LocalScore& rule, const ConditionalModel& model, const LabeledData& data) {
  FitConfig config;
  return score_objective(rule, model, data, config)(model.parameters(), nullptr);
}

FitResult fit(const LocalScore& rule, const JointModel& init, std::span<const Index> samples, const FitConfig& config) {
  return minimize(score_objective(rule, init, samples, config), init.parameters(), config);
}

FitResult fit(const LocalScore& rule, const ConditionalModel& init, const LabeledData& data, const FitConfig& config) {
  return minimize(score_objective(rule, init, data, config), init.parameters(), config);
}

FitResult mle_fit(const JointModel& init, std::span<const Index> samples, const FitConfig& config) {
  return minimize(likelihood_objective(init, samples, config), init.parameters(), config);
}

FitResult mle_fit(const ConditionalModel& init, const LabeledData& data, const FitConfig& config) {
  return minimize(likelihood_objective(init, data, config), init.parameters(), config);
}

double population_score(const LocalScore& rule, const JointModel& model, const Probability& p,
                        std::vector<double>* grad) {
  check_rule_space(rule, model.space());
  if (p.size() != model.space().size()) throw InputError("probability vector does not match the model space");
  std::vector<WeightedPoint> points;
  for (Index y = 0; y < p.size(); ++y) points.push_back({y, p[y], y});
  if (grad) grad->assign(model.num_parameters(), 0.0);
  return joint_score_sum(rule, model, points, 1, grad);
}

double negative_log_loss(const JointModel& model, std::span<const Index> test, double log_z) {
  if (test.empty()) throw InputError("test set is empty");
  double total = 0.0;
  for (Index y : test) total += log_z - model.log_f(y);
  return total / static_cast<double>(test.size());
}

double negative_log_loss(const ConditionalModel& model, const LabeledData& test) {
  if (test.size() == 0) throw InputError("test set is empty");
  test.validate(model.features(), model.labels());
  double total = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    total += model.log_z(test.features[i]) - model.log_f(test.labels[i], test.features[i]);
  }
  return total / static_cast<double>(test.size());
}

double test_error(const ConditionalModel& model, const LabeledData& test) {
  if (test.size() == 0) throw InputError("test set is empty");
  test.validate(model.features(), model.labels());
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (model.classify(test.features[i]) != test.labels[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(test.size());
}

}  // namespace localscore
