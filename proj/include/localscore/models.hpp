#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "localscore/divergence.hpp"
#include "localscore/sample_space.hpp"

namespace localscore {

// Parameterized unnormalized model f_theta over a sample space.
class JointModel {
 public:
  virtual ~JointModel() = default;

  virtual const SampleSpace& space() const = 0;
  virtual const std::vector<double>& parameters() const = 0;
  std::size_t num_parameters() const { return parameters().size(); }
  virtual std::unique_ptr<JointModel> clone_with(std::vector<double> parameters) const = 0;

  virtual double log_f(Index y) const = 0;
  // grad += weight * d log f(y) / d theta.
  virtual void add_grad_log_f(Index y, double weight, std::span<double> grad) const = 0;
  std::vector<double> grad_log_f(Index y) const;

  virtual std::string kind() const = 0;
};

// log f_W(y) = y^T W y with W symmetric and zero on the diagonal, stored as
// the upper triangle in row order (1,2), (1,3), ..., (D-1,D).
class BoltzmannModel final : public JointModel {
 public:
  BoltzmannModel(int dimension, std::vector<double> upper);
  static BoltzmannModel zeros(int dimension);
  static BoltzmannModel from_matrix(const std::vector<std::vector<double>>& w);

  int dimension() const noexcept { return dimension_; }
  static std::size_t num_couplings(int dimension) {
    return static_cast<std::size_t>(dimension) * static_cast<std::size_t>(dimension - 1) / 2;
  }
  // W_ij for 0-based i, j (0 on the diagonal unless shifted for testing).
  double coupling(int i, int j) const;
  // sum_{j != i} W_ij y_j for the point y.
  double local_field(Index y, int i) const;

  // Adds c to every diagonal entry. Only a test pathway: it shifts log f by
  // the constant D c, which homogeneous scores must ignore.
  BoltzmannModel with_diagonal_shift_for_testing(double c) const;
  double diagonal_shift() const noexcept { return diagonal_; }

  const SampleSpace& space() const override { return space_; }
  const std::vector<double>& parameters() const override { return upper_; }
  std::unique_ptr<JointModel> clone_with(std::vector<double> parameters) const override;
  double log_f(Index y) const override;
  void add_grad_log_f(Index y, double weight, std::span<double> grad) const override;
  std::string kind() const override { return "boltzmann"; }

 private:
  int dimension_;
  SampleSpace space_;
  std::vector<double> upper_;
  std::vector<std::vector<double>> dense_;
  double diagonal_ = 0.0;
};

// Saturated model log f_y = eta_y.
class TabularModel final : public JointModel {
 public:
  TabularModel(SampleSpace space, std::vector<double> eta);

  const SampleSpace& space() const override { return space_; }
  const std::vector<double>& parameters() const override { return eta_; }
  std::unique_ptr<JointModel> clone_with(std::vector<double> parameters) const override;
  double log_f(Index y) const override;
  void add_grad_log_f(Index y, double weight, std::span<double> grad) const override;
  std::string kind() const override { return "tabular"; }

 private:
  SampleSpace space_;
  std::vector<double> eta_;
};

// log f(y | x) = theta_y^T x over labels 0..L-1, theta stored row-major
// (L rows of d). With the gauge flag the last row is pinned at zero.
class ConditionalModel {
 public:
  ConditionalModel(Index labels, std::size_t features, std::vector<double> theta, bool gauge_fixed = false);
  static ConditionalModel zeros(Index labels, std::size_t features, bool gauge_fixed = false);

  Index labels() const noexcept { return labels_; }
  std::size_t features() const noexcept { return features_; }
  bool gauge_fixed() const noexcept { return gauge_fixed_; }
  const SampleSpace& space() const noexcept { return space_; }
  const std::vector<double>& parameters() const noexcept { return theta_; }
  std::size_t num_parameters() const noexcept { return theta_.size(); }
  ConditionalModel with_parameters(std::vector<double> theta) const;
  double theta(Index y, std::size_t k) const { return theta_[y * features_ + k]; }

  double log_f(Index y, std::span<const double> x) const;
  void add_grad_log_f(Index y, std::span<const double> x, double weight, std::span<double> grad) const;
  std::vector<double> grad_log_f(Index y, std::span<const double> x) const;
  // log Z(x) by exact summation over labels.
  double log_z(std::span<const double> x) const;
  // argmax_y theta_y^T x, smallest label on ties.
  Index classify(std::span<const double> x) const;

 private:
  void check_features(std::span<const double> x) const;

  Index labels_;
  std::size_t features_;
  std::vector<double> theta_;
  bool gauge_fixed_;
  SampleSpace space_;
};

// Softmax of log f over the space (|Y| <= 2^16).
Probability normalize(const JointModel& model);
double exact_log_z(const JointModel& model);

// Documents {"kind":"boltzmann","D":..,"upper":[..]},
// {"kind":"conditional","L":..,"d":..,"theta":[[..],..]} and
// {"kind":"tabular","space":"hypercube 2","eta":[..]}.
using AnyModel = std::variant<BoltzmannModel, TabularModel, ConditionalModel>;
std::string model_to_json(const AnyModel& model);
AnyModel model_from_json(const std::string& text);
void save_model(const std::string& path, const AnyModel& model);
AnyModel load_model(const std::string& path);

}  // namespace localscore
