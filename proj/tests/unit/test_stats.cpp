#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "segmetrics/stats.hpp"

using namespace segmetrics;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::Undefined;
}

Eigen::VectorXd vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> tied_list(std::mt19937_64& gen, std::size_t n) {
  // few distinct values so ties are common
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(gen() % 5) * 0.5;
  return v;
}

bool constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

TEST(Iou, Cases) {
  BinaryMask a = BinaryMask::Constant(5, 5, false), b = a;
  a.block(0, 0, 2, 3).setConstant(true);
  EXPECT_EQ(iou(a, a), 1.0);
  b.block(3, 3, 2, 2).setConstant(true);
  EXPECT_EQ(iou(a, b), 0.0);
  BinaryMask c = BinaryMask::Constant(5, 5, false);
  c.block(0, 1, 3, 2).setConstant(true);
  EXPECT_DOUBLE_EQ(iou(a, c), 0.5);
  EXPECT_EQ(iou(BinaryMask::Constant(3, 3, false), BinaryMask::Constant(3, 3, false)), 1.0);
  EXPECT_EQ(code_of([&] { iou(a, BinaryMask::Constant(4, 5, false)); }), ErrorCode::DimensionMismatch);
}

TEST(MajorityVote, Cases) {
  std::mt19937_64 gen(1);
  const auto m = oracle::random_mask(gen, 9, 9, 0.5);
  EXPECT_TRUE((majority_vote(std::vector<BinaryMask>(7, m)) == m).all());

  std::vector<BinaryMask> votes(7, BinaryMask::Constant(1, 1, false));
  for (int i = 0; i < 4; ++i) votes[i](0, 0) = true;
  EXPECT_TRUE(majority_vote(votes)(0, 0));
  votes[3](0, 0) = false;
  EXPECT_FALSE(majority_vote(votes)(0, 0));

  for (int t = 0; t < 50; ++t) {
    std::vector<BinaryMask> masks;
    const int k = 1 + static_cast<int>(gen() % 8);
    for (int i = 0; i < k; ++i) masks.push_back(oracle::random_mask(gen, 12, 7, 0.5));
    ASSERT_TRUE((majority_vote(masks) == oracle::majority(masks)).all());
  }
  EXPECT_EQ(code_of([] { majority_vote({}); }), ErrorCode::EmptyList);
}

TEST(Kendall, Examples) {
  const Eigen::VectorXd x = vec({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(kendall_tau(x, x), 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(x, vec({4, 3, 2, 1})), -1.0);
  EXPECT_NEAR(kendall_tau(x, vec({1, 3, 2, 4})), 4.0 / 6.0, 1e-15);
  EXPECT_EQ(code_of([&] { kendall_tau(x, vec({1, 2, 3})); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([&] { kendall_tau(x, vec({2, 2, 2, 2})); }), ErrorCode::Undefined);
  EXPECT_EQ(code_of([] { kendall_tau(vec({1}), vec({1})); }), ErrorCode::Undefined);
}

TEST(Spearman, Examples) {
  const Eigen::VectorXd x = vec({-1.0, 0.5, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(spearman_rho(x, x.array().exp().matrix()), 1.0);
  EXPECT_DOUBLE_EQ(spearman_rho(x, (-x).eval()), -1.0);
  EXPECT_NEAR(spearman_rho(vec({1, 2, 3}), vec({2, 1, 3})), 0.5, 1e-15);
  EXPECT_EQ(code_of([] { spearman_rho(vec({1, 1, 1}), vec({1, 2, 3})); }), ErrorCode::Undefined);
}

TEST(Pearson, Examples) {
  const Eigen::VectorXd x = vec({0, 1, 2, 5});
  EXPECT_NEAR(pearson_r(x, (3 * x.array() + 1).matrix()), 1.0, 1e-15);
  EXPECT_NEAR(pearson_r(x, (-2 * x).eval()), -1.0, 1e-15);
  EXPECT_NEAR(pearson_r(vec({0, 1, 2}), vec({0, 1, 3})), 0.9820, 1e-4);
}

TEST(Midranks, Ties) {
  const auto r = midranks(vec({10, 20, 10, 30, 20, 20}));
  const std::vector<double> expected{1.5, 4, 1.5, 6, 4, 4};
  for (int i = 0; i < 6; ++i) EXPECT_EQ(r(i), expected[i]);
}

TEST(Correlations, MatchPairOracles) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> normal;
  int checked = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + gen() % 30;
    std::vector<double> x, y;
    if (t % 2 == 0) {
      x = tied_list(gen, n);
      y = tied_list(gen, n);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        x.push_back(normal(gen));
        y.push_back(normal(gen));
      }
    }
    if (constant(x) || constant(y)) continue;
    ++checked;
    ASSERT_NEAR(kendall_tau(vec(x), vec(y)), oracle::kendall_tau(x, y), 1e-12);
    ASSERT_NEAR(spearman_rho(vec(x), vec(y)), oracle::spearman(x, y), 1e-12);
    ASSERT_NEAR(pearson_r(vec(x), vec(y)), oracle::pearson(x, y), 1e-12);
    if (t % 2 == 1) ASSERT_NEAR(spearman_rho(vec(x), vec(y)), oracle::spearman_no_ties(x, y), 1e-12);
  }
  EXPECT_GT(checked, 400);
}

TEST(Correlations, SymmetricAndSignFlip) {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 100; ++t) {
    const auto x = vec(tied_list(gen, 12)), y = vec(tied_list(gen, 12));
    if (detail::is_constant(x) || detail::is_constant(y)) continue;
    EXPECT_NEAR(kendall_tau(x, y), kendall_tau(y, x), 1e-14);
    EXPECT_NEAR(kendall_tau(x, (-y).eval()), -kendall_tau(x, y), 1e-14);
    EXPECT_NEAR(spearman_rho(x, (-y).eval()), -spearman_rho(x, y), 1e-14);
  }
}

TEST(Aggregate, Chunks) {
  MetricSeries s;
  for (int i = 0; i < 10; ++i) s.push_back("r" + std::to_string(i), 9 - i, i * 0.1);
  const auto one = aggregate(s, 1);
  ASSERT_EQ(one.size(), 10u);
  EXPECT_EQ(one.metric_values.front(), 0.0);
  EXPECT_EQ(one.record_ids.front(), "r9");

  const auto two = aggregate(s, 5);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_DOUBLE_EQ(two.metric_values[0], 2.0);
  EXPECT_DOUBLE_EQ(two.iou_values[0], (0.9 + 0.8 + 0.7 + 0.6 + 0.5) / 5);
  EXPECT_DOUBLE_EQ(two.metric_values[1], 7.0);
  EXPECT_EQ(two.record_ids[0], "r9;r8;r7;r6;r5");

  MetricSeries seven;
  for (int i = 0; i < 7; ++i) seven.push_back(std::to_string(i), i, i);
  const auto partial = aggregate(seven, 5);
  ASSERT_EQ(partial.size(), 2u);
  EXPECT_DOUBLE_EQ(partial.metric_values[1], 5.5);
}

TEST(Aggregate, PreservesTotalsAndOrder) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u;
  MetricSeries s;
  for (int i = 0; i < 37; ++i) s.push_back("id" + std::to_string(i), u(gen), u(gen));
  const auto a = aggregate(s, 5);
  ASSERT_EQ(a.size(), 8u);
  EXPECT_TRUE(std::is_sorted(a.metric_values.begin(), a.metric_values.end()));
  // chunk sums reproduce the total (last chunk has 2 members)
  double total = 0, rebuilt = 0;
  for (double v : s.metric_values) total += v;
  for (std::size_t i = 0; i < a.size(); ++i) rebuilt += a.metric_values[i] * (i + 1 < a.size() ? 5 : 2);
  EXPECT_NEAR(total, rebuilt, 1e-12);
}

TEST(Correlate, ReportsAndUndefined) {
  MetricSeries s;
  for (int i = 0; i < 20; ++i) s.push_back(std::to_string(i), i, 1.0 - i * 0.01);
  auto r = correlate(s, 5, "cpr");
  EXPECT_EQ(r.n, 4u);
  EXPECT_EQ(r.metric_name, "cpr");
  ASSERT_TRUE(r.kendall_tau.has_value());
  EXPECT_DOUBLE_EQ(*r.kendall_tau, -1.0);
  EXPECT_DOUBLE_EQ(*r.spearman_rho, -1.0);

  MetricSeries flat;
  for (int i = 0; i < 10; ++i) flat.push_back(std::to_string(i), i, 0.5);
  r = correlate(flat, 1, "cpr");
  EXPECT_FALSE(r.kendall_tau.has_value());
  EXPECT_EQ(r.reason, "constant input");

  MetricSeries tiny;
  tiny.push_back("a", 1, 1);
  tiny.push_back("b", 2, 2);
  r = correlate(tiny, 5, "cpr");
  EXPECT_EQ(r.n, 1u);
  EXPECT_EQ(r.reason, "too few datapoints");
}

TEST(MoransI, Cases) {
  Plane<double> checker(2, 2);
  checker << 1, -1, -1, 1;
  EXPECT_EQ(morans_i(checker), -1.0);

  Plane<double> halves = Plane<double>::Zero(16, 16);
  halves.leftCols(8).setConstant(1.0);
  EXPECT_GT(morans_i(halves), 0.0);
  EXPECT_GT(morans_i(halves, ContiguityWeights::Queen), 0.0);
  EXPECT_EQ(code_of([] { morans_i(Plane<double>::Constant(4, 4, 0.3)); }), ErrorCode::Undefined);
}

TEST(MoransI, MatchesRookOracle) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u;
  for (int t = 0; t < 30; ++t) {
    const int rows = 2 + static_cast<int>(gen() % 10), cols = 2 + static_cast<int>(gen() % 10);
    Plane<double> map(rows, cols);
    std::vector<std::vector<double>> copy(rows, std::vector<double>(cols));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) map(i, j) = copy[i][j] = u(gen);
    ASSERT_NEAR(morans_i(map), oracle::morans_i_rook(copy), 1e-12);
  }
}
