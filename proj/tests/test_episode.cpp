#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "smm/episode.hpp"

namespace smm {
namespace {

Discrepancy rec(DiscrepancyKind k, int i, TeamId team = 3, LevelId level = 2,
                std::optional<Ordinal> closed = std::nullopt) {
  return Discrepancy{{k, "p" + std::to_string(i), "a", std::nullopt},
                     team, level, static_cast<Ordinal>(i + 1), closed};
}

TEST(CountLevel, EmptyIsZero) {
  const auto c = count_level({}, 3, 2);
  EXPECT_EQ(c.total, 0u);
  for (auto k : kAllKinds) EXPECT_EQ(c[k], 0u);
  EXPECT_EQ(c.team, 3);
  EXPECT_EQ(c.level, 2);
}

TEST(CountLevel, ClosedRecordsStillCount) {
  std::vector<Discrepancy> rs = {rec(DiscrepancyKind::Omission, 0),
                                 rec(DiscrepancyKind::Omission, 1, 3, 2, 9),
                                 rec(DiscrepancyKind::Omission, 2)};
  const auto c = count_level(rs, 3, 2);
  EXPECT_EQ(c[DiscrepancyKind::Omission], 3u);
  EXPECT_EQ(c.total, 3u);
}

TEST(CountLevel, MixedTeamOrLevelRejected) {
  std::vector<Discrepancy> rs = {rec(DiscrepancyKind::Omission, 0, 3, 2),
                                 rec(DiscrepancyKind::Omission, 1, 3, 1)};
  try {
    count_level(rs, 3, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MixedTeamOrLevel);
  }
}

// Brute-force tally oracle, permutation invariance and additivity.
TEST(CountLevel, RandomizedAgainstTally) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> kind(0, 3), len(0, 60);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Discrepancy> rs;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) rs.push_back(rec(static_cast<DiscrepancyKind>(kind(rng)), i));

    std::array<std::uint64_t, 4> tally{};
    for (const auto& r : rs) tally[static_cast<std::size_t>(r.kind())]++;

    const auto c = count_level(rs, 3, 2);
    EXPECT_EQ(c.by_kind, tally);
    EXPECT_EQ(c.total, static_cast<std::uint64_t>(n));

    std::shuffle(rs.begin(), rs.end(), rng);
    EXPECT_EQ(count_level(rs, 3, 2), c);

    const std::size_t cut = rs.empty() ? 0 : rng() % (rs.size() + 1);
    const auto left = count_level(std::span(rs).first(cut), 3, 2);
    const auto right = count_level(std::span(rs).subspan(cut), 3, 2);
    for (auto k : kAllKinds) EXPECT_EQ(left[k] + right[k], c[k]);
  }
}

EpisodeCounts cell(TeamId team, LevelId level, std::uint64_t omissions = 0) {
  EpisodeCounts c{team, level, {}, 0};
  c.add(DiscrepancyKind::Omission, omissions);
  return c;
}

TEST(BuildHistory, TwentyTeamsFourLevels) {
  std::vector<EpisodeCounts> all;
  for (TeamId t = 1; t <= 20; ++t)
    for (LevelId l = 1; l <= 4; ++l) all.push_back(cell(t, l, static_cast<std::uint64_t>(t * l)));
  const auto hs = build_history(all);
  ASSERT_EQ(hs.size(), 20u);
  for (const auto& h : hs) EXPECT_EQ(h.episodes.size(), 4u);
}

TEST(BuildHistory, SortsLevels) {
  std::vector<EpisodeCounts> all = {cell(1, 3), cell(1, 1), cell(1, 4), cell(1, 2)};
  const auto hs = build_history(all);
  ASSERT_EQ(hs.size(), 1u);
  EXPECT_EQ(hs[0].levels(), (std::vector<LevelId>{1, 2, 3, 4}));
}

TEST(BuildHistory, Errors) {
  std::vector<EpisodeCounts> gap = {cell(1, 1), cell(1, 2), cell(1, 4)};
  try {
    build_history(gap);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingLevel);
  }
  std::vector<EpisodeCounts> dup = {cell(1, 1), cell(1, 1)};
  try {
    build_history(dup);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateEpisode);
  }
}

}  // namespace
}  // namespace smm
