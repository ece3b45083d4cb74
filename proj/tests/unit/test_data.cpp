#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "msrss/data.hpp"
#include "msrss/error.hpp"
#include "reference.hpp"

using namespace msrss;

namespace {

ColumnMapping mapping(std::vector<std::string> covariates) {
  ColumnMapping m;
  m.covariate_columns = std::move(covariates);
  return m;
}

Dataset parse(const std::string& text, std::vector<std::string> covariates,
              MissingPolicy policy = MissingPolicy::drop) {
  std::istringstream in(text);
  return parse_csv(in, mapping(std::move(covariates)), policy, "test.csv");
}

std::string error_of(const std::string& text, std::vector<std::string> covariates,
                     MissingPolicy policy = MissingPolicy::drop) {
  try {
    parse(text, std::move(covariates), policy);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

const std::filesystem::path kDataDir = MSRSS_DATA_DIR;

}  // namespace

TEST_SUITE("data") {
  TEST_CASE("two-row fixture") {
    const auto ds = parse("id,Y1,class\n1,3,benign\n2,8,malignant\n", {"Y1"});
    CHECK(ds.response() == std::vector<std::uint8_t>{0, 1});
    CHECK(ds.covariate("Y1") == std::vector<double>{3, 8});
    CHECK(ds.provenance().raw_rows == 2);
    CHECK(ds.provenance().dropped_rows == 0);
    CHECK(ds.provenance().mapping.failure_label == "benign");
  }

  TEST_CASE("unknown label names the offending line") {
    const auto msg = error_of("id,Y1,class\n1,3,benign\n2,8,malignant\n3,1,other\n", {"Y1"});
    CHECK(msg.find("test.csv:4") != std::string::npos);
    CHECK(msg.find("other") != std::string::npos);
    CHECK_THROWS_AS(parse("id,Y1,class\n1,3,benign\n2,8,other\n", {"Y1"}), DataError);
  }

  TEST_CASE("explicit failure label") {
    std::istringstream in("y,class\n1,no\n2,yes\n");
    ColumnMapping m{"class", "yes", "no", {"y"}};
    CHECK(parse_csv(in, m, MissingPolicy::drop).response() == std::vector<std::uint8_t>{0, 1});
    std::istringstream bad("y,class\n1,maybe\n2,yes\n");
    CHECK_THROWS_AS(parse_csv(bad, m, MissingPolicy::drop), DataError);
  }

  TEST_CASE("missing values are dropped and counted") {
    const std::string text = "Y1,Y6,class\n1,?,benign\n2,,malignant\n3,4,malignant\n4,NA,benign\n5,5,benign\n";
    const auto ds = parse(text, {"Y1", "Y6"});
    CHECK(ds.n_rows() == 2);
    CHECK(ds.provenance().raw_rows == 5);
    CHECK(ds.provenance().dropped_rows == 3);
    CHECK(ds.n_rows() + ds.provenance().dropped_rows == ds.provenance().raw_rows);
    // Only mapped columns matter.
    CHECK(parse(text, {"Y1"}).n_rows() == 5);
    CHECK_THROWS_AS(parse(text, {"Y1", "Y6"}, MissingPolicy::error), DataError);
  }

  TEST_CASE("covariates must be integer scores") {
    CHECK(parse("Y,class\n10.0,benign\n", {"Y"}).covariate("Y") == std::vector<double>{10});
    CHECK(error_of("Y,class\n2.5,benign\n", {"Y"}).find("not an integer") != std::string::npos);
    CHECK_THROWS_AS(parse("Y,class\nhigh,benign\n", {"Y"}), DataError);
  }

  TEST_CASE("structural errors") {
    CHECK_THROWS_AS(parse("", {"Y"}), DataError);
    CHECK_THROWS_AS(parse("Y,class\n", {"Y"}), DataError);
    CHECK_THROWS_AS(parse("Y,class\n?,benign\n", {"Y"}), DataError);
    CHECK_THROWS_AS(parse("Y,class\n1,benign\n", {"Z"}), ConfigError);
    CHECK_THROWS_AS(parse("Y,class\n1,benign,3\n", {"Y"}), DataError);
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", mapping({"Y"})), DataError);
  }

  TEST_CASE("quoted fields") {
    const auto ds = parse("\"Y\",\"class\"\n\"3\",\"malignant\"\n4,\"benign\"\n", {"Y"});
    CHECK(ds.response() == std::vector<std::uint8_t>{1, 0});
  }

  TEST_CASE("population proportion examples") {
    CHECK(population_proportion(parse("Y,class\n1,malignant\n2,malignant\n", {"Y"})) == 1.0);
    CHECK(population_proportion(
              parse("Y,class\n1,benign\n2,benign\n3,malignant\n4,malignant\n", {"Y"})) == 0.5);
  }

  TEST_CASE("spearman of monotone pairs") {
    const std::vector<double> a{1, 2, 3, 4, 5}, up{2, 4, 8, 16, 32}, down{5, 4, 3, 2, 1};
    CHECK(spearman(a, up) == doctest::Approx(1.0));
    CHECK(spearman(a, down) == doctest::Approx(-1.0));
  }

  TEST_CASE("spearman with ties matches the definition") {
    std::mt19937 gen(5);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> a, b;
      for (int k = 0; k < 60; ++k) {
        a.push_back(gen() % 2);
        b.push_back(1 + gen() % 10 + (a.back() ? gen() % 3 : 0));
      }
      CHECK(spearman(a, b) == doctest::Approx(ref::spearman(a, b)).epsilon(1e-12));
    }
  }

  TEST_CASE("spearman is invariant to increasing transforms") {
    std::mt19937 gen(6);
    std::vector<double> a, b, tb;
    for (int k = 0; k < 100; ++k) {
      a.push_back(gen() % 7);
      b.push_back(gen() % 10);
      tb.push_back(std::exp(b.back()) - 3.0);
    }
    CHECK(spearman(a, b) == doctest::Approx(spearman(a, tb)).epsilon(1e-12));
  }

  TEST_CASE("spearman of a constant column is an error") {
    const std::vector<double> a{1, 2, 3}, c{4, 4, 4};
    CHECK_THROWS_AS(spearman(a, c), DataError);
    CHECK_THROWS_AS(spearman(std::vector<double>{1}, std::vector<double>{1}), ConfigError);
  }

  TEST_CASE("midranks") {
    const std::vector<double> v{3, 1, 3, 2};
    CHECK(midranks(v) == std::vector<double>{3.5, 1, 3.5, 2});
  }

  TEST_CASE("write and reload round trip") {
    const auto ds = load_csv(kDataDir / "wbcd_fixture.csv", mapping({"Y2", "Y5", "Y9"}));
    std::stringstream io;
    write_csv(ds, io);
    const auto back = parse_csv(io, ds.provenance().mapping, MissingPolicy::drop);
    CHECK(back.response() == ds.response());
    CHECK(back.covariates() == ds.covariates());
  }

  TEST_CASE("fixture summary") {
    const auto ds = load_csv(kDataDir / "wbcd_fixture.csv", mapping({"Y2", "Y5", "Y6", "Y9"}));
    CHECK(ds.n_rows() == 28);
    CHECK(ds.provenance().dropped_rows == 2);
    const auto j = dataset_summary(ds);
    CHECK(j["n_rows"] == 28);
    CHECK(j["p"].get<double>() == doctest::Approx(population_proportion(ds)));
    std::vector<double> x(ds.response().begin(), ds.response().end());
    CHECK(j["spearman"]["Y2"].get<double>() ==
          doctest::Approx(ref::spearman(x, ds.covariate("Y2"))));
    CHECK(j.size() == 3);
  }

  TEST_CASE("mapping file") {
    const auto path = std::filesystem::temp_directory_path() / "msrss_mapping_test.txt";
    {
      std::ofstream out(path);
      out << "# WBCD mapping\nresponse = class\nsuccess = malignant\nfailure = benign\n"
             "covariates = Y2, Y5 Y9\nmissing = error  # strict\n";
    }
    const auto file = read_mapping_file(path);
    CHECK(file.mapping.response_column == "class");
    CHECK(file.mapping.failure_label == "benign");
    CHECK(file.mapping.covariate_columns == std::vector<std::string>{"Y2", "Y5", "Y9"});
    CHECK(file.missing == MissingPolicy::error);
    {
      std::ofstream out(path);
      out << "colour = red\n";
    }
    CHECK_THROWS_AS(read_mapping_file(path), ConfigError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_mapping_file(path), DataError);
    CHECK_THROWS_AS(parse_missing_policy("impute"), ConfigError);
  }

  TEST_CASE("full WBCD when fetched") {
    const auto path = kDataDir / "wbcd.csv";
    if (!std::filesystem::exists(path)) {
      MESSAGE("data/wbcd.csv not fetched; skipping");
      return;
    }
    const auto ds = load_csv(path, mapping({"Y2", "Y5", "Y9"}));
    CHECK(ds.n_rows() == 699);
    CHECK(population_proportion(ds) == doctest::Approx(241.0 / 699));
    CHECK(std::abs(spearman(ds, "Y2") - 0.86) <= 0.01);
    CHECK(std::abs(spearman(ds, "Y5") - 0.76) <= 0.01);
    CHECK(std::abs(spearman(ds, "Y9") - 0.53) <= 0.01);
    const auto all = load_csv(path, mapping({"Y1", "Y2", "Y3", "Y4", "Y5", "Y6", "Y7", "Y8", "Y9"}));
    CHECK(all.n_rows() == 683);
  }
}
