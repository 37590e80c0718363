#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "smm/predictor.hpp"

namespace smm {
namespace {

TeamHistory totals_history(TeamId team, std::vector<std::uint64_t> omissions) {
  TeamHistory h{team, {}};
  LevelId l = 1;
  for (auto n : omissions) {
    EpisodeCounts c{team, l++, {}, 0};
    c.add(DiscrepancyKind::Omission, n);
    h.episodes.push_back(c);
  }
  return h;
}

TEST(UniformWeights, EqualShares) {
  const auto s = uniform_weights({1, 2, 3});
  for (const auto& [l, w] : s.weights()) EXPECT_DOUBLE_EQ(w, 1.0 / 3.0);
  EXPECT_EQ(uniform_weights({1}).weights().at(1), 1.0);
  const auto loo = uniform_weights({1, 3, 4});
  EXPECT_EQ(loo.levels(), (std::set<LevelId>{1, 3, 4}));
  for (const auto& [l, w] : loo.weights()) EXPECT_DOUBLE_EQ(w, 1.0 / 3.0);
}

TEST(UniformWeights, EmptyRejected) {
  try {
    uniform_weights({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyPredictorSet);
  }
}

TEST(WeightScheme, SumConstraint) {
  EXPECT_NO_THROW(WeightScheme({{1, 0.5}, {2, 0.3}, {3, 0.2}}));
  EXPECT_NO_THROW(WeightScheme({{1, 1.5}, {2, -0.5}}));  // negative weights allowed
  EXPECT_THROW(WeightScheme({{1, 0.5}, {2, 0.6}}), Error);
  EXPECT_THROW(WeightScheme({{1, 0.5}, {2, 0.5 + 1e-8}}), Error);
}

TEST(ParseWeightSpec, ExplicitAndUniform) {
  const auto s = parse_weight_spec("1:0.5,2:0.3,3:0.2", {1, 2, 3});
  EXPECT_EQ(s.weights().at(1), 0.5);
  EXPECT_EQ(s.weights().at(2), 0.3);
  EXPECT_EQ(s.weights().at(3), 0.2);
  EXPECT_TRUE(parse_weight_spec("uniform", {1, 2, 3}).is_uniform());

  auto code = [](std::string_view spec) {
    try {
      parse_weight_spec(spec, {1, 2, 3});
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code("1:0.5,2:0.6"), ErrorCode::InvalidWeights);
  EXPECT_EQ(code("1:0.5,2:0.5"), ErrorCode::SchemeMismatch);
  EXPECT_EQ(code("1:0.5,x:0.5"), ErrorCode::InvalidWeights);
  EXPECT_EQ(code("1:0.5;2:0.5"), ErrorCode::InvalidWeights);
  EXPECT_EQ(code("1:0.5,1:0.5"), ErrorCode::InvalidWeights);
}

TEST(Predict, UniformIsArithmeticMean) {
  const auto h = totals_history(1, {10, 20, 30, 20});
  const auto p = predict(h, 4, uniform_weights({1, 2, 3}), Measure::Total);
  EXPECT_EQ(p.predicted, 20.0);
  EXPECT_EQ(p.actual, 20u);
  EXPECT_EQ(p.error, 0.0);
  EXPECT_EQ(p.abs_error, 0.0);
}

TEST(Predict, ZeroHistory) {
  const auto h = totals_history(1, {0, 0, 0, 5});
  const auto p = predict(h, 4, uniform_weights({1, 2, 3}), Measure::Total);
  EXPECT_EQ(p.predicted, 0.0);
  EXPECT_EQ(p.error, -5.0);
  EXPECT_EQ(p.abs_error, 5.0);
}

TEST(Predict, ExplicitWeights) {
  // 0.5*10 + 0.3*20 + 0.2*30 = 5 + 6 + 6 = 17.
  const long double independent = 0.5L * 10 + 0.3L * 20 + 0.2L * 30;
  ASSERT_NEAR(static_cast<double>(independent), 17.0, 1e-12);
  const auto h = totals_history(1, {10, 20, 30, 0});
  const auto p = predict(h, 4, WeightScheme({{1, 0.5}, {2, 0.3}, {3, 0.2}}), Measure::Omission);
  EXPECT_NEAR(p.predicted, 17.0, 1e-9);
}

TEST(Predict, Errors) {
  const auto h = totals_history(1, {1, 2, 3, 4});
  auto code = [&](LevelId target, const WeightScheme& s) {
    try {
      predict(h, target, s, Measure::Total);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code(5, uniform_weights({1, 2, 3, 4})), ErrorCode::UnknownTarget);
  EXPECT_EQ(code(4, uniform_weights({1, 2})), ErrorCode::SchemeMismatch);
  EXPECT_EQ(code(4, uniform_weights({1, 2, 3, 4})), ErrorCode::SchemeMismatch);
}

// Leave-one-out, linearity, mean equivalence and additivity over kinds.
TEST(PredictProperty, StructuralInvariants) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> cnt(0, 40), lv(2, 6);
  std::uniform_real_distribution<double> wd(-1.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int levels = lv(rng);
    TeamHistory h{1, {}};
    for (LevelId l = 1; l <= levels; ++l) {
      EpisodeCounts c{1, l, {}, 0};
      for (auto k : kAllKinds) c.add(k, static_cast<std::uint64_t>(cnt(rng)));
      h.episodes.push_back(c);
    }
    const LevelId target = static_cast<LevelId>(rng() % levels) + 1;
    std::set<LevelId> pred_levels;
    for (LevelId l = 1; l <= levels; ++l)
      if (l != target) pred_levels.insert(l);

    // Random scheme summing to 1: free weights plus a balancing one.
    std::map<LevelId, double> w;
    double sum = 0;
    for (LevelId l : pred_levels) {
      if (l == *pred_levels.rbegin()) break;
      w[l] = wd(rng);
      sum += w[l];
    }
    w[*pred_levels.rbegin()] = 1.0 - sum;
    const WeightScheme scheme(w);
    const WeightScheme uni = uniform_weights(pred_levels);

    // Uniform equals the arithmetic mean.
    double mean = 0;
    for (LevelId l : pred_levels) mean += static_cast<double>(h.find(l)->total);
    mean /= static_cast<double>(pred_levels.size());
    EXPECT_NEAR(predict(h, target, uni, Measure::Total).predicted, mean, 1e-9);

    // Total equals the sum of the per-kind predictions.
    double parts = 0;
    for (auto k : kAllKinds) parts += predict(h, target, scheme, measure_of(k)).predicted;
    EXPECT_NEAR(predict(h, target, scheme, Measure::Total).predicted, parts, 1e-9);

    // The target's own count never moves its prediction.
    TeamHistory perturbed = h;
    perturbed.episodes[static_cast<std::size_t>(target - 1)].add(DiscrepancyKind::Omission, 17);
    const auto a = predict(h, target, scheme, Measure::Total);
    const auto b = predict(perturbed, target, scheme, Measure::Total);
    EXPECT_EQ(a.predicted, b.predicted);
    EXPECT_NEAR(b.error, a.error - 17.0, 1e-9);

    // Scaling counts scales the prediction.
    TeamHistory scaled = h;
    for (auto& e : scaled.episodes)
      for (auto k : kAllKinds) e.add(k, 2 * e[k]);  // 3x
    EXPECT_NEAR(predict(scaled, target, scheme, Measure::Total).predicted, 3 * a.predicted,
                1e-9 * std::max(1.0, std::abs(a.predicted)));
  }
}

TEST(Pearson, PerfectAndAnti) {
  const std::vector<double> x = {1, 2, 3};
  const std::vector<double> rev = {3, 2, 1};
  const auto same = pearson(x, x);
  EXPECT_EQ(same.r, 1.0);
  EXPECT_EQ(same.p_value, 0.0);
  EXPECT_EQ(same.n, 3u);
  EXPECT_EQ(pearson(x, rev).r, -1.0);
}

TEST(Pearson, HandComputed) {
  // Means 2.5; deviations (-1.5,-.5,.5,1.5) and (-.5,-1.5,1.5,.5):
  // Sxy = 3, Sxx = Syy = 5, r = 3/5.
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> y = {2, 1, 4, 3};
  const auto res = pearson(x, y);
  EXPECT_NEAR(res.r, 0.6, 1e-9);
  // df = 2 has a closed form: p = 1 - t / sqrt(2 + t^2) = 1 - r = 0.4.
  EXPECT_NEAR(res.p_value, 0.4, 1e-9);
}

TEST(Pearson, PValueMatchesQuadrature) {
  for (auto [r, n] : std::vector<std::pair<double, std::size_t>>{
           {0.6, 4}, {0.56, 20}, {-0.3, 12}, {0.05, 50}, {0.9, 5}, {0.2, 3}}) {
    const double df = static_cast<double>(n - 2);
    const double t = r * std::sqrt(df / (1 - r * r));
    EXPECT_NEAR(correlation_p_value(r, n), oracle::t_two_tailed_p(t, df), 1e-7)
        << "r=" << r << " n=" << n;
  }
}

TEST(Pearson, ReportedCorrelationIsConsistent) {
  // r = 0.56 over twenty teams corresponds to p of about 0.01.
  const double p = correlation_p_value(0.56, 20);
  EXPECT_GT(p, 0.005);
  EXPECT_LT(p, 0.015);
}

TEST(Pearson, Errors) {
  auto code = [](std::vector<double> x, std::vector<double> y) {
    try {
      pearson(x, y);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code({1, 2, 3}, {1, 2}), ErrorCode::LengthMismatch);
  EXPECT_EQ(code({1, 2}, {1, 2}), ErrorCode::LengthMismatch);
  EXPECT_EQ(code({1, 1, 1}, {1, 2, 3}), ErrorCode::DegenerateVariance);
  EXPECT_EQ(code({1, 2, 3}, {4, 4, 4}), ErrorCode::DegenerateVariance);
}

TEST(PearsonProperty, SymmetricAndAffineInvariant) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> scale(0.1, 10), shift(-50, 50);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 30;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = nd(rng);
      y[i] = 0.5 * x[i] + nd(rng);
    }
    const auto xy = pearson(x, y);
    EXPECT_EQ(xy.r, pearson(y, x).r);
    EXPECT_NEAR(xy.r, oracle::pearson_r(x, y), 1e-9);
    const double a = scale(rng), b = shift(rng);
    std::vector<double> xt(n);
    for (std::size_t i = 0; i < n; ++i) xt[i] = a * x[i] + b;
    EXPECT_NEAR(pearson(xt, y).r, xy.r, 1e-9);
    EXPECT_LE(std::abs(xy.r), 1.0);
    EXPECT_GE(xy.p_value, 0.0);
    EXPECT_LE(xy.p_value, 1.0);
  }
}

TEST(BatchReport, LevelConstantTeamsHaveZeroError) {
  std::vector<TeamHistory> hs;
  for (TeamId t = 1; t <= 20; ++t) {
    const auto n = static_cast<std::uint64_t>(t);
    hs.push_back(totals_history(t, {n, n, n, n}));
  }
  const auto rep = batch_report(hs, 4, uniform_weights({1, 2, 3}));
  EXPECT_EQ(rep.predictions.size(), 20u * kAllMeasures.size());
  for (const auto& p : rep.predictions) EXPECT_EQ(p.error, 0.0);
  for (const auto& [m, v] : rep.mae) EXPECT_EQ(v, 0.0);
  ASSERT_TRUE(rep.correlation);
  EXPECT_NEAR(rep.correlation->r, 1.0, 1e-12);
  EXPECT_EQ(rep.correlation->n, 20u);
}

TEST(BatchReport, MaeAndOrdering) {
  std::vector<TeamHistory> hs = {totals_history(1, {2, 4, 6, 6}),
                                 totals_history(2, {1, 1, 1, 3}),
                                 totals_history(3, {0, 3, 0, 0})};
  const auto rep = batch_report(hs, 4, uniform_weights({1, 2, 3}));
  // |4-6| + |1-3| + |1-0| = 5 over 3 teams.
  EXPECT_NEAR(rep.mae.at(Measure::Omission), 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(rep.mae.at(Measure::Total), 5.0 / 3.0, 1e-12);
  EXPECT_EQ(rep.mae.at(Measure::Contradiction), 0.0);
  ASSERT_EQ(rep.predictions.size(), 15u);
  EXPECT_EQ(rep.predictions[0].measure, Measure::Contradiction);
  EXPECT_EQ(rep.predictions[1].measure, Measure::False);
  EXPECT_EQ(rep.predictions[2].measure, Measure::Omission);
  EXPECT_EQ(rep.predictions[3].measure, Measure::Total);
  EXPECT_EQ(rep.predictions[4].measure, Measure::Unsupported);
  EXPECT_EQ(rep.predictions[5].team, 2);
}

TEST(BatchReport, SingleTeamHasNoCorrelation) {
  std::vector<TeamHistory> hs = {totals_history(1, {1, 2, 3, 4})};
  const auto rep = batch_report(hs, 4, uniform_weights({1, 2, 3}));
  EXPECT_EQ(rep.predictions.size(), 5u);
  EXPECT_FALSE(rep.correlation);
  ASSERT_TRUE(rep.correlation_error);
  EXPECT_NE(rep.correlation_error->find("LengthMismatch"), std::string::npos);
}

}  // namespace
}  // namespace smm
