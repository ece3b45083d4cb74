#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace msrss {

enum class MissingPolicy { drop, error };

MissingPolicy parse_missing_policy(const std::string& text);

/// Which CSV columns hold the binary response and the ranking covariates.
struct ColumnMapping {
  std::string response_column = "class";
  std::string success_label = "malignant";
  /// Optional; when empty the first non-success label seen is the failure label.
  std::string failure_label;
  std::vector<std::string> covariate_columns;
};

/// Reads `key = value` lines (`response`, `success`, `failure`, `covariates`,
/// `missing`). Covariates are a comma- or space-separated list. `#` starts a comment.
struct MappingFile {
  ColumnMapping mapping;
  MissingPolicy missing = MissingPolicy::drop;
};
MappingFile read_mapping_file(const std::filesystem::path& path);

struct DatasetProvenance {
  std::string source;
  ColumnMapping mapping;
  std::size_t raw_rows = 0;
  std::size_t dropped_rows = 0;
};

/// A finite population with a binary response and ordinal covariates.
/// Immutable after load.
class Dataset {
 public:
  using Provenance = DatasetProvenance;

  Dataset(std::vector<std::uint8_t> response,
          std::vector<std::pair<std::string, std::vector<double>>> covariates,
          Provenance provenance = {});

  std::size_t n_rows() const { return response_.size(); }
  const std::vector<std::uint8_t>& response() const { return response_; }
  const std::vector<std::pair<std::string, std::vector<double>>>& covariates() const {
    return covariates_;
  }
  bool has_covariate(const std::string& name) const;
  /// Throws ConfigError when the column does not exist.
  const std::vector<double>& covariate(const std::string& name) const;
  const Provenance& provenance() const { return provenance_; }

 private:
  std::vector<std::uint8_t> response_;
  std::vector<std::pair<std::string, std::vector<double>>> covariates_;
  Provenance provenance_;
};

Dataset load_csv(const std::filesystem::path& path, const ColumnMapping& mapping,
                 MissingPolicy missing = MissingPolicy::drop);
Dataset parse_csv(std::istream& in, const ColumnMapping& mapping, MissingPolicy missing,
                  const std::string& source = "<stream>");

/// Writes the mapped columns back out (response as the mapping's labels).
void write_csv(const Dataset& ds, std::ostream& out);

double population_proportion(const Dataset& ds);

/// Spearman rank correlation with midranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);
double spearman(const Dataset& ds, const std::string& covariate);

/// Average (1-based) ranks; tied values share the mean of their positions.
std::vector<double> midranks(std::span<const double> values);

/// `{n_rows, p, spearman: {covariate: value}}`.
nlohmann::json dataset_summary(const Dataset& ds);

}  // namespace msrss
