#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "robsvm/dataset.hpp"
#include "robsvm/rng.hpp"
#include "support/oracles.hpp"

using namespace robsvm;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("load_csv maps a two-valued label column") {
  const auto path = write_temp("robsvm_csv1.csv",
                               "x1,x2,cls\n"
                               "1,2,a\n"
                               "3,4,b\n"
                               "5,6,a\n");
  const Dataset ds = load_csv(path, "cls");
  CHECK(ds.n() == 3);
  CHECK(ds.dim() == 2);
  // lexicographically larger value -> +1
  CHECK(ds.labels[0] == -1.0);
  CHECK(ds.labels[1] == 1.0);
  CHECK(ds.labels[2] == -1.0);
  CHECK(ds.features(1, 1) == 4.0);
  CHECK(ds.feature_names == std::vector<std::string>{"x1", "x2"});
}

TEST_CASE("load_csv maps {0,1} and {-1,+1} labels numerically") {
  const auto p1 = write_temp("robsvm_csv01.csv", "x,y\n1,0\n2,1\n");
  const Dataset d1 = load_csv(p1, "y");
  CHECK(d1.labels[0] == -1.0);
  CHECK(d1.labels[1] == 1.0);

  const auto p2 = write_temp("robsvm_csvpm.csv", "x,y\n1,-1\n2,+1\n");
  const Dataset d2 = load_csv(p2, "y");
  CHECK(d2.labels[0] == -1.0);
  CHECK(d2.labels[1] == 1.0);
}

TEST_CASE("load_csv rejects malformed input") {
  const auto nan_path = write_temp("robsvm_nan.csv", "x,y\nNaN,1\n2,0\n");
  CHECK_THROWS_WITH_AS(load_csv(nan_path, "y"), doctest::Contains("non-finite"),
                       Error);

  const auto header_only = write_temp("robsvm_empty.csv", "x,y\n");
  try {
    load_csv(header_only, "y");
    FAIL("expected EmptyDataset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyDataset);
  }

  const auto missing = write_temp("robsvm_missing.csv", "x,y\n1,1\n,0\n");
  try {
    load_csv(missing, "y");
    FAIL("expected MissingValue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingValue);
  }

  const auto three = write_temp("robsvm_three.csv", "x,y\n1,a\n2,b\n3,c\n");
  try {
    load_csv(three, "y");
    FAIL("expected TooManyLabelValues");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyLabelValues);
  }

  CHECK_THROWS_AS(load_csv("/nonexistent/robsvm.csv", "y"), Error);
}

TEST_CASE("load_libsvm parses the sparse format") {
  const auto path = write_temp("robsvm_l1.txt", "+1 1:0.5 3:-1\n");
  const Dataset ds = load_libsvm(path, 3);
  CHECK(ds.features(0, 0) == 0.5);
  CHECK(ds.features(0, 1) == 0.0);
  CHECK(ds.features(0, 2) == -1.0);
  CHECK(ds.labels[0] == 1.0);
}

TEST_CASE("load_libsvm infers the dimension from the max index") {
  const auto path = write_temp("robsvm_l2.txt", "-1 2:1\n+1 1:1\n");
  const Dataset ds = load_libsvm(path);
  CHECK(ds.dim() == 2);
  CHECK(ds.features(0, 0) == 0.0);
  CHECK(ds.features(0, 1) == 1.0);
  CHECK(ds.features(1, 0) == 1.0);
  CHECK(ds.features(1, 1) == 0.0);
}

TEST_CASE("load_libsvm rejects non-monotone indices") {
  const auto path = write_temp("robsvm_l3.txt", "+1 3:1 2:1\n");
  try {
    load_libsvm(path);
    FAIL("expected NonMonotoneIndex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonMonotoneIndex);
  }
}

TEST_CASE("libsvm round-trip preserves features and labels exactly") {
  SplitMix64 rng(7);
  const Dataset ds = oracles::random_dataset(rng, 23, 5);
  const auto path =
      (std::filesystem::temp_directory_path() / "robsvm_rt.txt").string();
  save_libsvm(ds, path);
  const Dataset back = load_libsvm(path, ds.dim());
  CHECK(back.features == ds.features);
  CHECK(back.labels == ds.labels);
}

TEST_CASE("rescale_to_unit_range maps min/max to -1/+1") {
  Dataset ds;
  ds.features.resize(3, 2);
  ds.features << 0, 7, 5, 7, 10, 7;
  ds.labels.resize(3);
  ds.labels << 1, -1, 1;
  auto [scaled, params] = rescale_to_unit_range(ds);
  CHECK(scaled.features(0, 0) == doctest::Approx(-1.0));
  CHECK(scaled.features(1, 0) == doctest::Approx(0.0));
  CHECK(scaled.features(2, 0) == doctest::Approx(1.0));
  // constant column convention
  CHECK(scaled.features.col(1).cwiseAbs().maxCoeff() == 0.0);

  // the fitted map extrapolates beyond the training range
  Eigen::MatrixXd test(1, 2);
  test << 12.0, 7.0;
  CHECK(params.apply(test)(0, 0) == doctest::Approx(1.4));

  // idempotence on already-rescaled data
  auto [again, params2] = rescale_to_unit_range(scaled);
  CHECK((again.features - scaled.features).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("split is deterministic, disjoint and exhaustive") {
  SplitMix64 rng(11);
  const Dataset ds = oracles::random_dataset(rng, 10, 3);
  const SplitSpec spec{0.7, 99};
  auto [train1, test1] = split(ds, spec);
  CHECK(train1.n() == 7);
  CHECK(test1.n() == 3);

  auto [train2, test2] = split(ds, spec);
  CHECK(train1.features == train2.features);
  CHECK(test1.labels == test2.labels);

  // every original row appears exactly once across the two parts
  std::vector<int> seen(10, 0);
  auto mark = [&](const Dataset& part) {
    for (Eigen::Index i = 0; i < part.n(); ++i)
      for (Eigen::Index r = 0; r < ds.n(); ++r)
        if ((part.features.row(i) - ds.features.row(r)).cwiseAbs().maxCoeff() ==
            0.0) {
          ++seen[static_cast<size_t>(r)];
          break;
        }
  };
  mark(train1);
  mark(test1);
  for (int s : seen) CHECK(s == 1);

  Dataset one;
  one.features.resize(1, 1);
  one.features << 1.0;
  one.labels.resize(1);
  one.labels << 1.0;
  CHECK_THROWS_AS(split(one, spec), Error);
}
