#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "localscore/models.hpp"
#include "localscore/scores.hpp"

namespace localscore {

struct FitConfig {
  std::size_t max_iterations = 10000;
  // Infinity norm of the gradient.
  double gradient_tolerance = 1e-6;
  double initial_step = 1.0;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double l2_penalty = 0.0;
  bool deterministic_reduction = true;
  unsigned num_threads = 1;
  std::size_t max_backtracks = 60;
  // Caps the infinity norm of each trial move; 0 disables the cap.
  double max_displacement = 1.0;

  void validate() const;
};

struct TracePoint {
  double objective = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
};

struct FitResult {
  std::vector<double> parameters;
  double final_objective = 0.0;
  double gradient_norm = 0.0;
  std::size_t iterations_used = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

// Returns the objective at x and, when grad is non-null, writes its gradient.
using Objective = std::function<double(const std::vector<double>& x, std::vector<double>* grad)>;

// Gradient descent with Armijo backtracking. The first trial step of each
// iteration is twice the previously accepted step.
FitResult minimize(const Objective& objective, std::vector<double> x0, const FitConfig& config);

double infinity_norm(std::span<const double> v);

// Conditional data: one feature row per sample with its label.
struct LabeledData {
  std::vector<std::vector<double>> features;
  std::vector<Index> labels;

  std::size_t size() const noexcept { return labels.size(); }
  void validate(std::size_t feature_dim, Index num_labels) const;
};

// (1/n) sum_i S(y_i, f_theta) + (l2/2) |theta|^2.
Objective score_objective(const LocalScore& rule, const JointModel& model, std::span<const Index> samples,
                          const FitConfig& config);
Objective score_objective(const LocalScore& rule, const ConditionalModel& model, const LabeledData& data,
                          const FitConfig& config);
// -(1/n) sum_i log q_theta(y_i) + (l2/2) |theta|^2, exact normalization.
Objective likelihood_objective(const JointModel& model, std::span<const Index> samples, const FitConfig& config);
Objective likelihood_objective(const ConditionalModel& model, const LabeledData& data, const FitConfig& config);

double empirical_score(const LocalScore& rule, const JointModel& model, std::span<const Index> samples);
double empirical_score(const LocalScore& rule, const ConditionalModel& model, const LabeledData& data);

FitResult fit(const LocalScore& rule, const JointModel& init, std::span<const Index> samples, const FitConfig& config);
FitResult fit(const LocalScore& rule, const ConditionalModel& init, const LabeledData& data, const FitConfig& config);
FitResult mle_fit(const JointModel& init, std::span<const Index> samples, const FitConfig& config);
FitResult mle_fit(const ConditionalModel& init, const LabeledData& data, const FitConfig& config);

// sum_y p_y S(y, f_theta) and its parameter gradient, by enumeration.
double population_score(const LocalScore& rule, const JointModel& model, const Probability& p,
                        std::vector<double>* grad);

// mean of (log_z - log f(y)).
double negative_log_loss(const JointModel& model, std::span<const Index> test, double log_z);
// mean of (log Z(x) - log f(y | x)).
double negative_log_loss(const ConditionalModel& model, const LabeledData& test);
double test_error(const ConditionalModel& model, const LabeledData& test);

}  // namespace localscore
