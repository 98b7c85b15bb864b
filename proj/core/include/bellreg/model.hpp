#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "bellreg/specfun.hpp"

namespace bellreg {

/// Response counts plus a design matrix whose first column is the intercept.
class Dataset {
 public:
  /// Validates n >= p >= 1, a constant-one first column and finite entries.
  /// Throws InputError on violation.
  Dataset(std::vector<std::uint64_t> y, Eigen::MatrixXd X, std::vector<std::string> column_names = {});

  std::size_t n() const noexcept { return y_.size(); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(X_.cols()); }
  const std::vector<std::uint64_t>& y() const noexcept { return y_; }
  const Eigen::MatrixXd& X() const noexcept { return X_; }
  const std::vector<std::string>& column_names() const noexcept { return names_; }
  std::uint64_t max_count() const noexcept { return max_count_; }
  double mean_count() const noexcept;

 private:
  std::vector<std::uint64_t> y_;
  Eigen::MatrixXd X_;
  std::vector<std::string> names_;
  std::uint64_t max_count_ = 0;
};

enum class ModelKind { Bell, Poisson };

std::string_view to_string(ModelKind kind) noexcept;
/// Parses "bell" / "poisson" (case-insensitive); InputError otherwise.
ModelKind parse_model_kind(std::string_view text);

/// Zero-mean normal prior N_p(0, tau^2 I).
struct FlatNormal {
  double tau = 100.0;
};

/// Zellner-type G-prior N_p(M u, g n (X'X)^{-1}) with u = (1, 0, ..., 0)'.
/// M and g are derived from the (a_mu, b_mu) hyperparameters at construction:
/// M = digamma(a_mu) + log(b_mu), g = trigamma(a_mu) / p.
class GPrior {
 public:
  GPrior(double a_mu, double b_mu, std::size_t p);

  double a_mu() const noexcept { return a_mu_; }
  double b_mu() const noexcept { return b_mu_; }
  double M() const noexcept { return M_; }
  double g() const noexcept { return g_; }
  std::size_t p() const noexcept { return p_; }

 private:
  double a_mu_;
  double b_mu_;
  double M_;
  double g_;
  std::size_t p_;
};

using PriorSpec = std::variant<FlatNormal, GPrior>;

std::string_view prior_name(const PriorSpec& prior) noexcept;

/// Linear predictor outside this band is treated as zero likelihood.
inline constexpr double kEtaLimit = 500.0;

/// eta = X beta. InputError on dimension mismatch.
Eigen::VectorXd linear_predictor(const Dataset& data, const Eigen::VectorXd& beta);

/// Log density of one count given its linear predictor. Returns -inf when
/// |eta| exceeds kEtaLimit.
double log_density(ModelKind kind, std::uint64_t y, double eta, const specfun::LogBellTable& table);

/// Per-observation log densities at beta; the normalizing terms
/// (log B_y - log y! for Bell, -log y! for Poisson) are included.
Eigen::VectorXd pointwise_log_likelihood(ModelKind kind, const Dataset& data, const Eigen::VectorXd& beta,
                                         const specfun::LogBellTable& table);

double bell_log_likelihood(const Dataset& data, const Eigen::VectorXd& beta,
                           const specfun::LogBellTable& table);
double poisson_log_likelihood(const Dataset& data, const Eigen::VectorXd& beta);
double log_likelihood(ModelKind kind, const Dataset& data, const Eigen::VectorXd& beta,
                      const specfun::LogBellTable& table);

/// Fully normalized log prior density. For the G-prior, throws InputError if
/// X'X is singular.
double log_prior(const PriorSpec& prior, const Eigen::VectorXd& beta, const Dataset& data);

/// log_likelihood + log_prior (unnormalized log posterior).
double log_posterior(ModelKind kind, const PriorSpec& prior, const Dataset& data, const Eigen::VectorXd& beta,
                     const specfun::LogBellTable& table);

/// Log-Bell table covering every count in the dataset.
specfun::LogBellTable make_table_for(const Dataset& data);

/// Cached log posterior for repeated evaluation (the sampler's target).
/// Holds references: the dataset and table must outlive it.
class LogPosterior {
 public:
  LogPosterior(ModelKind kind, PriorSpec prior, const Dataset& data, const specfun::LogBellTable& table);

  double operator()(const Eigen::VectorXd& beta) const { return log_likelihood(beta) + log_prior(beta); }
  double log_likelihood(const Eigen::VectorXd& beta) const;
  double log_prior(const Eigen::VectorXd& beta) const;

  ModelKind kind() const noexcept { return kind_; }
  const Dataset& data() const noexcept { return data_; }

 private:
  ModelKind kind_;
  PriorSpec prior_;
  const Dataset& data_;
  const specfun::LogBellTable& table_;
  // G-prior: precision matrix X'X / (g n), prior mean and log normalizer.
  Eigen::MatrixXd precision_;
  Eigen::VectorXd prior_mean_;
  double log_normalizer_ = 0.0;
};

/// X'X with a singularity check; InputError naming the remedy when singular.
Eigen::LLT<Eigen::MatrixXd> gram_cholesky(const Dataset& data);

}  // namespace bellreg
