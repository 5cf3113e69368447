#include <cmath>
#include <numeric>
#include <set>

#include "bcpred/dataset.hpp"
#include "bcpred/error.hpp"
#include "doctest.h"

using namespace bcpred;

namespace {

std::string header() {
  std::string h = "id,diagnosis";
  for (int j = 0; j < 30; ++j) h += ",f" + std::to_string(j);
  return h + "\n";
}

std::string row(const std::string& id, const std::string& diag, double base) {
  std::string r = id + "," + diag;
  for (int j = 0; j < 30; ++j) r += "," + std::to_string(base + j);
  return r + "\n";
}

std::vector<std::size_t> all_rows(const Dataset& d) {
  std::vector<std::size_t> rows(d.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

TEST_CASE("parse_wdbc_csv reads the full WDBC file") {
  const Dataset d = parse_wdbc_csv(BCPRED_WDBC_CSV);
  CHECK(d.size() == 569);
  CHECK(d.feature_count() == 30);
  CHECK(d.count(Diagnosis::Benign) == 357);
  CHECK(d.count(Diagnosis::Malignant) == 212);
  CHECK(d.feature_names().front() == "radius_mean");
  CHECK(d.feature_names().back() == "fractal_dimension_worst");
  CHECK(d.record(0).id == "842302");
  CHECK(d.record(0).diagnosis == Diagnosis::Malignant);
  CHECK(d.record(0).features[0] == 17.99);
  CHECK(d.labels()[0] == 1);
}

TEST_CASE("parsing is pure: two reads give identical datasets") {
  CHECK(parse_wdbc_csv(BCPRED_WDBC_CSV) == parse_wdbc_csv(BCPRED_WDBC_CSV));
}

TEST_CASE("parse errors name the row") {
  SUBCASE("unknown diagnosis") {
    const std::string text = header() + row("a", "M", 1) + row("x", "Q", 2);
    CHECK_THROWS_WITH_AS(parse_wdbc_csv_text(text), "unknown diagnosis 'Q' at row 2", ParseError);
  }
  SUBCASE("wrong arity") {
    const std::string text = header() + "a,M,1,2,3\n";
    CHECK_THROWS_WITH_AS(parse_wdbc_csv_text(text), doctest::Contains("row 1"), ParseError);
  }
  SUBCASE("non-numeric feature") {
    std::string bad = row("a", "B", 1);
    bad.replace(bad.find(",1.000000"), 9, ",abc");
    CHECK_THROWS_WITH_AS(parse_wdbc_csv_text(header() + bad), doctest::Contains("'abc'"),
                         ParseError);
  }
  SUBCASE("missing value is a hard error") {
    std::string bad = row("a", "B", 1);
    bad.replace(bad.find(",1.000000"), 9, ",");
    CHECK_THROWS_AS(parse_wdbc_csv_text(header() + bad), ParseError);
  }
  SUBCASE("empty") {
    CHECK_THROWS_AS(parse_wdbc_csv_text(""), ParseError);
    CHECK_THROWS_AS(parse_wdbc_csv_text(header()), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(parse_wdbc_csv("/nonexistent/wdbc.csv"),
                         doctest::Contains("/nonexistent/wdbc.csv"), FileError);
  }
}

TEST_CASE("Kaggle dialect: quoted header and trailing empty column") {
  std::string h = "\"id\",\"diagnosis\"";
  for (int j = 0; j < 30; ++j) h += ",\"f" + std::to_string(j) + "\"";
  h += ",\r\n";
  std::string r = row("1", "M", 0.5);
  r.insert(r.size() - 1, ",");
  const Dataset d = parse_wdbc_csv_text(h + r);
  REQUIRE(d.size() == 1);
  CHECK(d.feature_names()[3] == "f3");
  CHECK(d.record(0).features[29] == doctest::Approx(29.5));
}

TEST_CASE("standardize_fit uses the n-1 denominator") {
  Matrix m = Matrix::from_rows({{1.0, 5.0}, {3.0, 7.0}});
  const auto p = standardize_fit(m, {"a", "b"});
  CHECK(p.means[0] == 2.0);
  CHECK(p.std_devs[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(p.means[1] == 6.0);
}

TEST_CASE("standardize_fit reports zero-variance features by name") {
  Matrix m = Matrix::from_rows({{1.0, 4.0, 2.0}, {3.0, 4.0, 2.0}, {5.0, 4.0, 2.0}});
  CHECK_THROWS_WITH_AS(standardize_fit(m, {"ok", "flat", "also_flat"}),
                       "zero-variance feature(s): flat, also_flat", PreconditionError);
}

TEST_CASE("standardize_fit on WDBC matches an independent numpy computation") {
  const Dataset d = parse_wdbc_csv(BCPRED_WDBC_CSV);
  const auto p = standardize_fit(d, all_rows(d));
  // numpy: X.mean(0), X.std(0, ddof=1)
  CHECK(p.means[0] == doctest::Approx(14.127291739894552).epsilon(1e-13));
  CHECK(p.std_devs[0] == doctest::Approx(3.5240488262120775).epsilon(1e-13));
  CHECK(p.means[23] == doctest::Approx(880.58312829525482).epsilon(1e-13));
  CHECK(p.std_devs[23] == doctest::Approx(569.35699266994902).epsilon(1e-13));

  const auto split = stratified_split(d, 0.2, 42);
  const auto train = standardize_fit(d, split.train);
  for (std::size_t j = 0; j < 30; ++j) {
    CHECK(std::isfinite(train.means[j]));
    CHECK(train.std_devs[j] > 0.0);
  }
}

TEST_CASE("standardize_apply identities") {
  StandardizationParams p{{"a", "b", "c"}, {1.0, -2.0, 10.0}, {0.5, 3.0, 7.0}};
  const std::vector<double> at_mean = p.means;
  for (double v : standardize_apply(at_mean, p)) CHECK(v == 0.0);
  std::vector<double> one_up(3);
  for (int j = 0; j < 3; ++j) one_up[j] = p.means[j] + p.std_devs[j];
  for (double v : standardize_apply(one_up, p)) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<double> x{0.3, 99.0, -4.25};
  const auto back = standardize_invert(standardize_apply(x, p), p);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(back[j] - x[j]) < 1e-12);

  CHECK_THROWS_AS(standardize_apply(std::vector<double>{1.0}, p), PreconditionError);
}

TEST_CASE("standardized training columns have mean 0 and sample std 1") {
  const Dataset d = parse_wdbc_csv(BCPRED_WDBC_CSV);
  const auto split = stratified_split(d, 0.2, 7);
  const auto p = standardize_fit(d, split.train);
  const Matrix z = standardize_apply(d.features(split.train), p);
  for (std::size_t j = 0; j < z.cols(); ++j) {
    const auto col = z.column(j);
    const double n = static_cast<double>(col.size());
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(ss / (n - 1)) - 1.0) < 1e-9);
  }
}

TEST_CASE("stratified_split on WDBC") {
  const Dataset d = parse_wdbc_csv(BCPRED_WDBC_CSV);
  const auto labels = d.labels();
  const auto s = stratified_split(d, 0.2, 42);
  CHECK(s.test.size() == 114);
  std::size_t test_m = 0;
  for (auto i : s.test) test_m += labels[i];
  CHECK(test_m == 43);
  CHECK(s.test.size() - test_m == 71);

  SUBCASE("deterministic") {
    const auto again = stratified_split(d, 0.2, 42);
    CHECK(again.train == s.train);
    CHECK(again.test == s.test);
  }
  SUBCASE("other seed permutes but keeps class counts") {
    const auto other = stratified_split(d, 0.2, 43);
    CHECK(other.test != s.test);
    std::size_t m = 0;
    for (auto i : other.test) m += labels[i];
    CHECK(m == 43);
    CHECK(other.test.size() == 114);
  }
}

TEST_CASE("stratified_split is a partition for many seeds") {
  const Dataset d = parse_wdbc_csv(BCPRED_WDBC_CSV);
  const auto labels = d.labels();
  const double frac_m = 212.0 / 569.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const double f = 0.1 + 0.015 * static_cast<double>(seed);
    const auto s = stratified_split(d, f, seed);
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(d.size());
    std::iota(expected.begin(), expected.end(), std::size_t{0});
    CHECK(all == expected);
    for (const auto* part : {&s.train, &s.test}) {
      std::size_t m = 0;
      for (auto i : *part) m += labels[i];
      CHECK(std::abs(static_cast<double>(m) - frac_m * part->size()) <= 1.0);
    }
  }
}

TEST_CASE("stratified_split rejects degenerate fractions") {
  std::vector<int> labels{0, 0, 0, 1, 1, 1};
  CHECK_THROWS_AS(stratified_split(labels, 0.01, 1), PreconditionError);
  CHECK_THROWS_AS(stratified_split(labels, 0.99, 1), PreconditionError);
  CHECK_THROWS_AS(stratified_split(labels, 0.0, 1), PreconditionError);
  CHECK_THROWS_AS(stratified_split(std::vector<int>{0, 0, 1}, 0.5, 1), PreconditionError);
}

TEST_CASE("pearson_correlation") {
  const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  std::vector<double> neg(x.size());
  std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
  CHECK(pearson_correlation(x, x) == 1.0);
  CHECK(pearson_correlation(x, neg) == -1.0);
  // numpy.corrcoef((1,2,3),(2,4,6.0001)) = 0.99999999989583854
  const double r = pearson_correlation(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6.0001});
  CHECK(r == doctest::Approx(0.99999999989583854).epsilon(1e-12));
  CHECK(r < 1.0);
  CHECK(std::abs(1.0 - r) < 1e-6);
  CHECK_THROWS_AS(pearson_correlation(std::vector<double>{3, 3, 3}, std::vector<double>{1, 2, 3}),
                  PreconditionError);
  CHECK_THROWS_AS(pearson_correlation(x, std::vector<double>{1, 2}), PreconditionError);
}

TEST_CASE("correlation_matrix on WDBC") {
  const Dataset d = parse_wdbc_csv(BCPRED_WDBC_CSV);
  const auto c = correlation_matrix(d, all_rows(d));
  REQUIRE(c.values.rows() == 30);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(c.values(i, i) == 1.0);
    for (std::size_t j = 0; j < 30; ++j) {
      CHECK(c.values(i, j) == c.values(j, i));
      CHECK(c.values(i, j) >= -1.0);
      CHECK(c.values(i, j) <= 1.0);
    }
  }
  const auto radius = d.feature_index("radius_mean");
  const auto perimeter = d.feature_index("perimeter_mean");
  const auto texture = d.feature_index("texture_mean");
  // pandas/numpy reference values on the same file
  CHECK(c.values(radius, perimeter) > 0.9);
  CHECK(c.values(radius, perimeter) == doctest::Approx(0.99785528149381042).epsilon(1e-12));
  CHECK(c.values(radius, texture) == doctest::Approx(0.32378189092773291).epsilon(1e-12));
}

TEST_CASE("correlation_matrix small cases") {
  std::vector<RawRecord> recs;
  std::vector<std::string> names;
  for (int j = 0; j < 30; ++j) names.push_back("f" + std::to_string(j));
  for (int i = 0; i < 5; ++i) {
    RawRecord r{std::to_string(i), Diagnosis::Benign, std::vector<double>(30)};
    for (int j = 0; j < 30; ++j) r.features[j] = (j % 2 == 0 ? 1.0 : -1.0) * (i + 1) * (j + 1) + (j > 1 ? (i * i * j) % 7 : 0);
    recs.push_back(r);
  }
  const Dataset d(names, recs);
  const auto c = correlation_matrix(d, all_rows(d));
  CHECK(c.values(0, 1) == -1.0);

  recs[0].features[5] = recs[1].features[5] = recs[2].features[5] = recs[3].features[5] =
      recs[4].features[5] = 2.0;
  CHECK_THROWS_WITH_AS(correlation_matrix(Dataset(names, recs), all_rows(d)),
                       doctest::Contains("'f5'"), PreconditionError);
}

TEST_CASE("correlation_csv layout") {
  CorrelationMatrix c{{"a", "b"}, Matrix::from_rows({{1.0, 0.1234567890123}, {0.1234567890123, 1.0}})};
  const std::string csv = correlation_csv(c);
  CHECK(csv.rfind("feature,a,b\na,1,", 0) == 0);
  const auto cell = csv.substr(csv.find("a,1,") + 4, csv.find('\n', 14) - csv.find("a,1,") - 4);
  CHECK(cell.size() >= 11);
  CHECK(std::stod(cell) == 0.1234567890123);
}
