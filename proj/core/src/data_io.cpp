#include "bellreg/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "bellreg/errors.hpp"

namespace bellreg::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i < line.size() && line[i] == '"') quoted = !quoted;
    if (i == line.size() || (line[i] == ',' && !quoted)) {
      fields.emplace_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return fields;
}

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string cell_ref(std::string_view source, std::size_t row, std::string_view column) {
  return std::string(source) + ": row " + std::to_string(row) + ", column '" + std::string(column) + "'";
}

}  // namespace

Dataset parse_dataset(std::istream& in, const LoadOptions& options, std::string_view source) {
  std::string line;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!trim(line).empty()) header = split_line(line);
  }
  if (header.empty()) throw InputError(std::string(source) + ": no header row (empty file)");

  const auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError(std::string(source) + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t response_col = column_index(options.response);
  std::vector<std::string> covariates = options.covariates;
  if (covariates.empty()) {
    for (const auto& h : header) {
      if (h != options.response) covariates.push_back(h);
    }
  }
  std::vector<std::size_t> covariate_cols;
  for (const auto& c : covariates) covariate_cols.push_back(column_index(c));

  std::vector<std::uint64_t> y;
  std::vector<std::vector<double>> rows;
  std::size_t row_number = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row_number;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      throw InputError(std::string(source) + ": row " + std::to_string(row_number) + " has " +
                       std::to_string(fields.size()) + " fields, header has " + std::to_string(header.size()));
    }
    double response = 0.0;
    const auto& rtext = fields[response_col];
    if (!parse_double(rtext, response) || !(response >= 0.0) || std::floor(response) != response ||
        response > 9.0e15) {
      throw InputError(cell_ref(source, row_number, options.response) + ": response '" + rtext +
                       "' is not a nonnegative integer count");
    }
    y.push_back(static_cast<std::uint64_t>(response));

    std::vector<double> values;
    for (std::size_t k = 0; k < covariate_cols.size(); ++k) {
      double v = 0.0;
      const auto& text = fields[covariate_cols[k]];
      if (!parse_double(text, v) || !std::isfinite(v)) {
        throw InputError(cell_ref(source, row_number, covariates[k]) + ": covariate '" + text +
                         "' is not a finite number");
      }
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  if (y.empty()) throw InputError(std::string(source) + ": no rows");

  const std::size_t offset = options.add_intercept ? 1 : 0;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(y.size()), static_cast<Eigen::Index>(covariates.size() + offset));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (options.add_intercept) X(static_cast<Eigen::Index>(i), 0) = 1.0;
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k + offset)) = rows[i][k];
    }
  }
  std::vector<std::string> names;
  if (options.add_intercept) names.emplace_back("(Intercept)");
  names.insert(names.end(), covariates.begin(), covariates.end());
  return Dataset(std::move(y), std::move(X), std::move(names));
}

Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open data file " + path.string());
  return parse_dataset(in, options, path.string());
}

Dataset standardize_covariates(const Dataset& data) {
  Eigen::MatrixXd X = data.X();
  const double n = static_cast<double>(data.n());
  for (Eigen::Index j = 1; j < X.cols(); ++j) {
    const double mean = X.col(j).mean();
    const double sd = std::sqrt((X.col(j).array() - mean).square().sum() / (n - 1.0));
    if (!(sd > 0.0)) throw InputError("cannot standardize constant column '" + data.column_names()[j] + "'");
    X.col(j) = (X.col(j).array() - mean) / sd;
  }
  return Dataset(data.y(), std::move(X), data.column_names());
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  const auto& names = data.column_names();
  out << "y";
  for (std::size_t j = 1; j < names.size(); ++j) out << ',' << names[j];
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < data.n(); ++i) {
    out << data.y()[i];
    for (Eigen::Index j = 1; j < data.X().cols(); ++j) out << ',' << data.X()(static_cast<Eigen::Index>(i), j);
    out << '\n';
  }
}

void write_chain_csv(std::ostream& out, const mcmc::Chain& chain, const std::vector<std::string>& names) {
  out << "iteration";
  for (Eigen::Index j = 0; j < chain.draws.cols(); ++j) {
    out << ',' << (static_cast<std::size_t>(j) < names.size() ? names[j] : "beta" + std::to_string(j));
  }
  out << ",log_posterior\n" << std::setprecision(17);
  for (Eigen::Index r = 0; r < chain.draws.rows(); ++r) {
    out << chain.iteration[static_cast<std::size_t>(r)];
    for (Eigen::Index j = 0; j < chain.draws.cols(); ++j) out << ',' << chain.draws(r, j);
    out << ',' << chain.log_posterior[static_cast<std::size_t>(r)] << '\n';
  }
}

}  // namespace bellreg::io
