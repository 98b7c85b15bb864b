#include "bellreg/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "bellreg/errors.hpp"

namespace bellreg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void check_beta(const Dataset& data, const Eigen::VectorXd& beta) {
  if (static_cast<std::size_t>(beta.size()) != data.p()) {
    throw InputError("coefficient vector has length " + std::to_string(beta.size()) + " but the design has " +
                     std::to_string(data.p()) + " columns");
  }
}

double sum_checked(const Eigen::VectorXd& terms) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < terms.size(); ++i) {
    if (std::isnan(terms[i])) {
      throw NumericalError("log-likelihood is NaN at observation " + std::to_string(i));
    }
    total += terms[i];
  }
  return total;
}

}  // namespace

Dataset::Dataset(std::vector<std::uint64_t> y, Eigen::MatrixXd X, std::vector<std::string> column_names)
    : y_(std::move(y)), X_(std::move(X)), names_(std::move(column_names)) {
  const auto n = y_.size();
  if (static_cast<std::size_t>(X_.rows()) != n) {
    throw InputError("design matrix has " + std::to_string(X_.rows()) + " rows but there are " +
                     std::to_string(n) + " responses");
  }
  if (X_.cols() < 1) throw InputError("design matrix needs at least the intercept column");
  if (n < static_cast<std::size_t>(X_.cols())) {
    throw InputError("need n >= p, got n = " + std::to_string(n) + ", p = " + std::to_string(X_.cols()));
  }
  for (Eigen::Index i = 0; i < X_.rows(); ++i) {
    if (X_(i, 0) != 1.0) {
      throw InputError("first design column must be the intercept (all ones); row " + std::to_string(i) +
                       " has " + std::to_string(X_(i, 0)));
    }
    for (Eigen::Index j = 0; j < X_.cols(); ++j) {
      if (!std::isfinite(X_(i, j))) {
        throw InputError("non-finite covariate at row " + std::to_string(i) + ", column " + std::to_string(j));
      }
    }
  }
  if (names_.empty()) {
    names_.push_back("(Intercept)");
    for (Eigen::Index j = 1; j < X_.cols(); ++j) names_.push_back("x" + std::to_string(j));
  }
  if (names_.size() != static_cast<std::size_t>(X_.cols())) {
    throw InputError("column name count does not match the design matrix");
  }
  max_count_ = y_.empty() ? 0 : *std::max_element(y_.begin(), y_.end());
}

double Dataset::mean_count() const noexcept {
  const double total = std::accumulate(y_.begin(), y_.end(), 0.0,
                                       [](double acc, std::uint64_t v) { return acc + static_cast<double>(v); });
  return total / static_cast<double>(y_.size());
}

std::string_view to_string(ModelKind kind) noexcept { return kind == ModelKind::Bell ? "bell" : "poisson"; }

ModelKind parse_model_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "bell") return ModelKind::Bell;
  if (lower == "poisson") return ModelKind::Poisson;
  throw InputError("unknown model '" + std::string(text) + "' (expected bell or poisson)");
}

GPrior::GPrior(double a_mu, double b_mu, std::size_t p) : a_mu_(a_mu), b_mu_(b_mu), p_(p) {
  if (!(a_mu > 0.0) || !(b_mu > 0.0)) throw InputError("G-prior hyperparameters a_mu, b_mu must be positive");
  if (p == 0) throw InputError("G-prior needs p >= 1");
  M_ = specfun::digamma(a_mu) + std::log(b_mu);
  g_ = specfun::trigamma(a_mu) / static_cast<double>(p);
}

std::string_view prior_name(const PriorSpec& prior) noexcept {
  return std::holds_alternative<GPrior>(prior) ? "gprior" : "flat";
}

Eigen::VectorXd linear_predictor(const Dataset& data, const Eigen::VectorXd& beta) {
  check_beta(data, beta);
  return data.X() * beta;
}

double log_density(ModelKind kind, std::uint64_t y, double eta, const specfun::LogBellTable& table) {
  if (!(std::fabs(eta) <= kEtaLimit)) return kNegInf;
  const double yd = static_cast<double>(y);
  if (kind == ModelKind::Poisson) {
    return yd * eta - std::exp(eta) - specfun::log_factorial(y);
  }
  const double mu = std::exp(eta);
  const double theta = specfun::lambert_w0(mu);
  // exp(W0(mu)) = mu / W0(mu)
  return yd * std::log(theta) + 1.0 - mu / theta + table.at(y) - specfun::log_factorial(y);
}

Eigen::VectorXd pointwise_log_likelihood(ModelKind kind, const Dataset& data, const Eigen::VectorXd& beta,
                                         const specfun::LogBellTable& table) {
  const Eigen::VectorXd eta = linear_predictor(data, beta);
  Eigen::VectorXd out(eta.size());
  const auto& y = data.y();
  for (Eigen::Index i = 0; i < eta.size(); ++i) out[i] = log_density(kind, y[i], eta[i], table);
  return out;
}

double bell_log_likelihood(const Dataset& data, const Eigen::VectorXd& beta, const specfun::LogBellTable& table) {
  if (table.max_index() < data.max_count()) {
    throw InputError("log-Bell table covers counts up to " + std::to_string(table.max_index()) +
                     " but the data contain " + std::to_string(data.max_count()));
  }
  return sum_checked(pointwise_log_likelihood(ModelKind::Bell, data, beta, table));
}

double poisson_log_likelihood(const Dataset& data, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = linear_predictor(data, beta);
  const auto& y = data.y();
  Eigen::VectorXd terms(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    terms[i] = std::fabs(eta[i]) <= kEtaLimit
                   ? static_cast<double>(y[i]) * eta[i] - std::exp(eta[i]) - specfun::log_factorial(y[i])
                   : kNegInf;
  }
  return sum_checked(terms);
}

double log_likelihood(ModelKind kind, const Dataset& data, const Eigen::VectorXd& beta,
                      const specfun::LogBellTable& table) {
  return kind == ModelKind::Bell ? bell_log_likelihood(data, beta, table) : poisson_log_likelihood(data, beta);
}

Eigen::LLT<Eigen::MatrixXd> gram_cholesky(const Dataset& data) {
  const Eigen::MatrixXd gram = data.X().transpose() * data.X();
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-14) {
    throw InputError("X'X is singular or numerically singular; drop collinear covariate columns");
  }
  return llt;
}

double log_prior(const PriorSpec& prior, const Eigen::VectorXd& beta, const Dataset& data) {
  check_beta(data, beta);
  const double p = static_cast<double>(beta.size());
  if (const auto* flat = std::get_if<FlatNormal>(&prior)) {
    if (!(flat->tau > 0.0)) throw InputError("flat-normal prior needs tau > 0");
    const double tau2 = flat->tau * flat->tau;
    return -0.5 * p * (kLog2Pi + std::log(tau2)) - beta.squaredNorm() / (2.0 * tau2);
  }
  const auto& gp = std::get<GPrior>(prior);
  if (gp.p() != data.p()) throw InputError("G-prior was built for a different number of columns");
  const auto llt = gram_cholesky(data);
  const double scale = gp.g() * static_cast<double>(data.n());
  Eigen::VectorXd diff = beta;
  diff[0] -= gp.M();
  const double quad = (llt.matrixU() * diff).squaredNorm() / scale;
  const double log_det_gram = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  // log|Sigma| = p log(g n) - log|X'X|
  return -0.5 * (p * kLog2Pi + p * std::log(scale) - log_det_gram) - 0.5 * quad;
}

double log_posterior(ModelKind kind, const PriorSpec& prior, const Dataset& data, const Eigen::VectorXd& beta,
                     const specfun::LogBellTable& table) {
  return log_likelihood(kind, data, beta, table) + log_prior(prior, beta, data);
}

specfun::LogBellTable make_table_for(const Dataset& data) { return specfun::LogBellTable(data.max_count()); }

LogPosterior::LogPosterior(ModelKind kind, PriorSpec prior, const Dataset& data, const specfun::LogBellTable& table)
    : kind_(kind), prior_(std::move(prior)), data_(data), table_(table) {
  if (kind_ == ModelKind::Bell && table_.max_index() < data_.max_count()) {
    throw InputError("log-Bell table too short for the data");
  }
  const double p = static_cast<double>(data_.p());
  if (const auto* gp = std::get_if<GPrior>(&prior_)) {
    if (gp->p() != data_.p()) throw InputError("G-prior was built for a different number of columns");
    const auto llt = gram_cholesky(data_);
    const double scale = gp->g() * static_cast<double>(data_.n());
    precision_ = (data_.X().transpose() * data_.X()) / scale;
    prior_mean_ = Eigen::VectorXd::Zero(data_.p());
    prior_mean_[0] = gp->M();
    const double log_det_gram = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    log_normalizer_ = -0.5 * (p * kLog2Pi + p * std::log(scale) - log_det_gram);
  } else {
    const double tau = std::get<FlatNormal>(prior_).tau;
    if (!(tau > 0.0)) throw InputError("flat-normal prior needs tau > 0");
    log_normalizer_ = -0.5 * p * (kLog2Pi + 2.0 * std::log(tau));
  }
}

double LogPosterior::log_likelihood(const Eigen::VectorXd& beta) const {
  return bellreg::log_likelihood(kind_, data_, beta, table_);
}

double LogPosterior::log_prior(const Eigen::VectorXd& beta) const {
  if (const auto* flat = std::get_if<FlatNormal>(&prior_)) {
    return log_normalizer_ - beta.squaredNorm() / (2.0 * flat->tau * flat->tau);
  }
  const Eigen::VectorXd diff = beta - prior_mean_;
  return log_normalizer_ - 0.5 * diff.dot(precision_ * diff);
}

}  // namespace bellreg
