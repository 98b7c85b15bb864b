#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bellreg/model.hpp"
#include "bellreg/sampler.hpp"

namespace bellreg::io {

struct LoadOptions {
  std::string response = "y";
  std::vector<std::string> covariates;  ///< empty: every column except the response
  bool add_intercept = true;
};

/// Reads a comma-separated file with a header row. Response cells must hold
/// nonnegative integers; covariates must be finite reals. Errors name the
/// offending row (1-based, header excluded) and column.
Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options = {});
Dataset parse_dataset(std::istream& in, const LoadOptions& options = {}, std::string_view source = "<input>");

/// Centers and scales every non-intercept column to unit standard deviation.
Dataset standardize_covariates(const Dataset& data);

/// Writes y followed by the non-intercept columns, with a header.
void write_dataset_csv(std::ostream& out, const Dataset& data);

/// iteration, one column per coefficient, log_posterior.
void write_chain_csv(std::ostream& out, const mcmc::Chain& chain, const std::vector<std::string>& names);

}  // namespace bellreg::io
