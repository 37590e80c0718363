#pragma once

// Weighted-sum prediction of a target level's discrepancy count from the
// counts of the other levels, plus the error and correlation summaries used
// to judge it.

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "smm/episode.hpp"

namespace smm {

inline constexpr double kWeightSumTolerance = 1e-9;

// Printed with every prediction report.
inline constexpr std::string_view kAutocorrelationNote =
    "note: per-level counts of the same team are likely autocorrelated; a high "
    "correlation across teams can reflect stable team-specific rates rather than "
    "predictive signal.";

// Weights over predictor levels. Only the sum-to-one constraint is enforced;
// negative weights are allowed.
class WeightScheme {
 public:
  WeightScheme() = default;

  explicit WeightScheme(std::map<LevelId, double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw Error(ErrorCode::EmptyPredictorSet, "no predictor levels");
    double sum = 0.0;
    for (const auto& [level, w] : weights_) {
      if (!std::isfinite(w))
        throw Error(ErrorCode::InvalidWeights,
                    "weight for level " + std::to_string(level) + " is not finite");
      sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "weights sum to " << sum << ", not 1";
      throw Error(ErrorCode::InvalidWeights, os.str());
    }
  }

  static WeightScheme uniform(const std::set<LevelId>& predictor_levels) {
    if (predictor_levels.empty())
      throw Error(ErrorCode::EmptyPredictorSet, "no predictor levels");
    std::map<LevelId, double> w;
    const double each = 1.0 / static_cast<double>(predictor_levels.size());
    for (LevelId l : predictor_levels) w[l] = each;
    WeightScheme s(std::move(w));
    s.uniform_ = true;
    return s;
  }

  const std::map<LevelId, double>& weights() const noexcept { return weights_; }
  bool is_uniform() const noexcept { return uniform_; }

  std::set<LevelId> levels() const {
    std::set<LevelId> out;
    for (const auto& [l, w] : weights_) out.insert(l);
    return out;
  }

  // Weighted sum of `count(level)` over the scheme's levels. A uniform scheme
  // is evaluated as the arithmetic mean, which rounds once instead of n times.
  template <class CountFn>
  double apply(CountFn&& count) const {
    double sum = 0.0;
    if (uniform_) {
      for (const auto& [l, w] : weights_) sum += static_cast<double>(count(l));
      return sum / static_cast<double>(weights_.size());
    }
    for (const auto& [l, w] : weights_) sum += w * static_cast<double>(count(l));
    return sum;
  }

 private:
  std::map<LevelId, double> weights_;
  bool uniform_ = false;
};

inline WeightScheme uniform_weights(const std::set<LevelId>& predictor_levels) {
  return WeightScheme::uniform(predictor_levels);
}

// Parses "uniform" or an explicit "level:weight,level:weight" list.
// `predictor_levels` is used for "uniform" and to check explicit lists.
inline WeightScheme parse_weight_spec(std::string_view spec,
                                      const std::set<LevelId>& predictor_levels) {
  if (spec == "uniform") return WeightScheme::uniform(predictor_levels);

  std::map<LevelId, double> w;
  std::string item;
  std::istringstream in{std::string(spec)};
  while (std::getline(in, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorCode::InvalidWeights, "expected level:weight, got '" + item + "'");
    LevelId level = 0;
    double weight = 0.0;
    try {
      std::size_t used = 0;
      level = std::stoi(item.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument(item);
      std::string rhs = item.substr(colon + 1);
      weight = std::stod(rhs, &used);
      if (used != rhs.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidWeights, "malformed weight entry '" + item + "'");
    }
    if (!w.emplace(level, weight).second)
      throw Error(ErrorCode::InvalidWeights,
                  "level " + std::to_string(level) + " weighted twice");
  }
  WeightScheme scheme(std::move(w));
  if (!predictor_levels.empty() && scheme.levels() != predictor_levels)
    throw Error(ErrorCode::SchemeMismatch,
                "weights must cover exactly the predictor levels (all levels but the target)");
  return scheme;
}

struct Prediction {
  TeamId team = 0;
  LevelId target = 0;
  Measure measure = Measure::Total;
  double predicted = 0.0;
  std::uint64_t actual = 0;
  double error = 0.0;  // predicted - actual
  double abs_error = 0.0;
};

inline Prediction predict(const TeamHistory& history, LevelId target, const WeightScheme& scheme,
                          Measure measure) {
  const EpisodeCounts* actual = history.find(target);
  if (!actual)
    throw Error(ErrorCode::UnknownTarget, "team " + std::to_string(history.team) +
                                              " has no level " + std::to_string(target));
  std::set<LevelId> predictors;
  for (const auto& e : history.episodes)
    if (e.level != target) predictors.insert(e.level);
  if (scheme.levels() != predictors)
    throw Error(ErrorCode::SchemeMismatch,
                "scheme levels do not match team " + std::to_string(history.team) +
                    "'s levels other than " + std::to_string(target));

  Prediction p;
  p.team = history.team;
  p.target = target;
  p.measure = measure;
  p.predicted = scheme.apply([&](LevelId l) { return history.find(l)->get(measure); });
  p.actual = actual->get(measure);
  p.error = p.predicted - static_cast<double>(p.actual);
  p.abs_error = std::abs(p.error);
  return p;
}

struct CorrelationResult {
  double r = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// Two-tailed p-value of a sample correlation r over n pairs, via
// t = r * sqrt((n - 2) / (1 - r^2)) against Student's t with n - 2 dof.
inline double correlation_p_value(double r, std::size_t n) {
  if (n < 3)
    throw Error(ErrorCode::LengthMismatch,
                "correlation needs at least 3 samples, got " + std::to_string(n));
  if (std::abs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df / (1.0 - r * r));
  boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

// Sample Pearson correlation with its two-tailed p-value.
inline CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch, std::to_string(x.size()) + " vs " +
                                               std::to_string(y.size()) + " samples");
  const std::size_t n = x.size();
  if (n < 3)
    throw Error(ErrorCode::LengthMismatch,
                "correlation needs at least 3 samples, got " + std::to_string(n));

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorCode::DegenerateVariance, "a sample has zero variance");

  CorrelationResult res;
  res.n = n;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  res.p_value = correlation_p_value(res.r, n);
  return res;
}

struct PredictionReport {
  LevelId target = 0;
  WeightScheme scheme;
  std::vector<Prediction> predictions;  // team, then measure name
  std::map<Measure, double> mae;        // mean absolute error per measure
  std::optional<CorrelationResult> correlation;  // on totals across teams
  std::optional<std::string> correlation_error;

  const Prediction* find(TeamId team, Measure m) const {
    for (const auto& p : predictions)
      if (p.team == team && p.measure == m) return &p;
    return nullptr;
  }
};

inline PredictionReport batch_report(std::span<const TeamHistory> histories, LevelId target,
                                     const WeightScheme& scheme) {
  PredictionReport rep;
  rep.target = target;
  rep.scheme = scheme;
  std::vector<double> predicted_totals, actual_totals;
  for (const auto& h : histories) {
    for (Measure m : kMeasuresByName) {
      Prediction p = predict(h, target, scheme, m);
      rep.mae[m] += p.abs_error;
      if (m == Measure::Total) {
        predicted_totals.push_back(p.predicted);
        actual_totals.push_back(static_cast<double>(p.actual));
      }
      rep.predictions.push_back(p);
    }
  }
  if (!histories.empty())
    for (auto& [m, sum] : rep.mae) sum /= static_cast<double>(histories.size());
  try {
    rep.correlation = pearson(predicted_totals, actual_totals);
  } catch (const Error& e) {
    rep.correlation_error = e.what();
  }
  return rep;
}

}  // namespace smm
