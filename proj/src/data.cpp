#include "msrss/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "msrss/error.hpp"

namespace msrss {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          field.push_back('"');
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(trim(field));
  return fields;
}

bool is_missing(const std::string& v) { return v.empty() || v == "NA" || v == "?" || v == "NaN"; }

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

MissingPolicy parse_missing_policy(const std::string& text) {
  if (text == "drop") return MissingPolicy::drop;
  if (text == "error") return MissingPolicy::error;
  throw ConfigError("unknown missing-value policy '" + text + "' (expected drop or error)");
}

MappingFile read_mapping_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open mapping file " + path.string());
  MappingFile out;
  out.mapping.covariate_columns.clear();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "response") {
      out.mapping.response_column = value;
    } else if (key == "success") {
      out.mapping.success_label = value;
    } else if (key == "failure") {
      out.mapping.failure_label = value;
    } else if (key == "covariates") {
      std::string list = value;
      std::replace(list.begin(), list.end(), ',', ' ');
      std::istringstream is(list);
      std::string name;
      while (is >> name) out.mapping.covariate_columns.push_back(name);
    } else if (key == "missing") {
      out.missing = parse_missing_policy(value);
    } else {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": unknown key '" + key +
                        "'");
    }
  }
  return out;
}

Dataset::Dataset(std::vector<std::uint8_t> response,
                 std::vector<std::pair<std::string, std::vector<double>>> covariates,
                 Provenance provenance)
    : response_(std::move(response)),
      covariates_(std::move(covariates)),
      provenance_(std::move(provenance)) {
  for (auto v : response_) {
    if (v > 1) throw DataError("dataset response values must be 0 or 1");
  }
  for (const auto& [name, column] : covariates_) {
    if (column.size() != response_.size()) {
      throw DataError("covariate '" + name + "' has " + std::to_string(column.size()) +
                      " values, response has " + std::to_string(response_.size()));
    }
  }
}

bool Dataset::has_covariate(const std::string& name) const {
  return std::any_of(covariates_.begin(), covariates_.end(),
                     [&](const auto& c) { return c.first == name; });
}

const std::vector<double>& Dataset::covariate(const std::string& name) const {
  for (const auto& [n, column] : covariates_) {
    if (n == name) return column;
  }
  throw ConfigError("dataset has no covariate column '" + name + "'");
}

Dataset parse_csv(std::istream& in, const ColumnMapping& mapping, MissingPolicy missing,
                  const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty file (no header)");
  const auto header = split_csv_line(line);

  auto column_index = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ConfigError(source + ": column '" + name + "' not found in header");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t response_idx = column_index(mapping.response_column);
  std::vector<std::size_t> cov_idx;
  for (const auto& name : mapping.covariate_columns) cov_idx.push_back(column_index(name));

  std::string failure = mapping.failure_label;
  std::vector<std::uint8_t> response;
  std::vector<std::vector<double>> columns(cov_idx.size());
  std::size_t raw = 0;
  std::size_t dropped = 0;
  std::size_t lineno = 1;

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    ++raw;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError(source + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    bool has_missing = is_missing(fields[response_idx]);
    for (auto k : cov_idx) has_missing = has_missing || is_missing(fields[k]);
    if (has_missing) {
      if (missing == MissingPolicy::error) {
        throw DataError(source + ":" + std::to_string(lineno) +
                        ": missing value in a mapped column");
      }
      ++dropped;
      continue;
    }

    const std::string& label = fields[response_idx];
    if (label == mapping.success_label) {
      response.push_back(1);
    } else if (failure.empty() || label == failure) {
      failure = label;
      response.push_back(0);
    } else {
      throw DataError(source + ":" + std::to_string(lineno) + ": response label '" + label +
                      "' is neither success '" + mapping.success_label + "' nor failure '" +
                      failure + "'");
    }

    for (std::size_t c = 0; c < cov_idx.size(); ++c) {
      const std::string& text = fields[cov_idx[c]];
      long long value = 0;
      const char* first = text.data();
      const char* last = text.data() + text.size();
      // Scores such as "10.0" are accepted if integral.
      double as_double = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec == std::errc() && ptr == last) {
        columns[c].push_back(static_cast<double>(value));
        continue;
      }
      auto [dptr, dec] = std::from_chars(first, last, as_double);
      if (dec != std::errc() || dptr != last || as_double != std::floor(as_double)) {
        throw DataError(source + ":" + std::to_string(lineno) + ": covariate '" +
                        mapping.covariate_columns[c] + "' value '" + text +
                        "' is not an integer score");
      }
      columns[c].push_back(as_double);
    }
  }

  if (response.empty()) throw DataError(source + ": no usable rows");

  std::vector<std::pair<std::string, std::vector<double>>> covariates;
  for (std::size_t c = 0; c < cov_idx.size(); ++c) {
    covariates.emplace_back(mapping.covariate_columns[c], std::move(columns[c]));
  }
  ColumnMapping resolved = mapping;
  resolved.failure_label = failure;
  return Dataset(std::move(response), std::move(covariates),
                 Dataset::Provenance{source, resolved, raw, dropped});
}

Dataset load_csv(const std::filesystem::path& path, const ColumnMapping& mapping,
                 MissingPolicy missing) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_csv(in, mapping, missing, path.string());
}

void write_csv(const Dataset& ds, std::ostream& out) {
  const auto& mapping = ds.provenance().mapping;
  const std::string failure = mapping.failure_label.empty() ? "0" : mapping.failure_label;
  out << csv_field(mapping.response_column);
  for (const auto& [name, column] : ds.covariates()) out << ',' << csv_field(name);
  out << '\n';
  for (std::size_t row = 0; row < ds.n_rows(); ++row) {
    out << csv_field(ds.response()[row] ? mapping.success_label : failure);
    for (const auto& [name, column] : ds.covariates()) {
      out << ',' << static_cast<long long>(column[row]);
    }
    out << '\n';
  }
}

double population_proportion(const Dataset& ds) {
  if (ds.n_rows() == 0) throw DataError("population proportion of an empty dataset");
  const auto ones = std::accumulate(ds.response().begin(), ds.response().end(), std::size_t{0});
  return static_cast<double>(ones) / static_cast<double>(ds.n_rows());
}

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() && values[order[end]] == values[order[start]]) ++end;
    const double rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) ranks[order[k]] = rank;
    start = end;
  }
  return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("spearman: columns differ in length");
  if (a.size() < 2) throw ConfigError("spearman: need at least two rows");
  const auto ra = midranks(a);
  const auto rb = midranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < ra.size(); ++k) {
    const double da = ra[k] - mean;
    const double db = rb[k] - mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw DataError("spearman: correlation undefined for a constant column");
  }
  return sab / std::sqrt(saa * sbb);
}

double spearman(const Dataset& ds, const std::string& covariate) {
  std::vector<double> x(ds.response().begin(), ds.response().end());
  return spearman(x, ds.covariate(covariate));
}

nlohmann::json dataset_summary(const Dataset& ds) {
  nlohmann::json corr = nlohmann::json::object();
  for (const auto& [name, column] : ds.covariates()) {
    try {
      corr[name] = spearman(ds, name);
    } catch (const Error&) {
      corr[name] = nullptr;
    }
  }
  return {{"n_rows", ds.n_rows()}, {"p", population_proportion(ds)}, {"spearman", corr}};
}

}  // namespace msrss
