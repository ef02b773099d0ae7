#include <gtest/gtest.h>

#include <map>

#include "test_support.hpp"
#include "toperf/metrics.hpp"

using namespace toperf;
using namespace testing_support;

namespace {

std::vector<Byline> team(int n, const std::string& country = "PL") {
  std::vector<Byline> out;
  for (int i = 0; i < n; ++i) out.push_back({"A" + std::to_string(i), "I1", country});
  return out;
}

std::vector<const PublicationRecord*> ptrs(const std::vector<PublicationRecord>& pubs) {
  std::vector<const PublicationRecord*> out;
  for (const auto& p : pubs) out.push_back(&p);
  return out;
}

}  // namespace

TEST(PrestigeWeight, LinearWithFloor) {
  EXPECT_DOUBLE_EQ(prestige_weight(90), 0.90);
  EXPECT_DOUBLE_EQ(prestige_weight(7), 0.10);
  EXPECT_DOUBLE_EQ(prestige_weight(10), 0.10);
  EXPECT_DOUBLE_EQ(prestige_weight(99), 0.99);
  EXPECT_DOUBLE_EQ(prestige_weight(std::nullopt), 0.10);
}

TEST(ComputeMeasures, SoloPaper) {
  std::vector<PublicationRecord> pubs{pub("P1", 2000, "J90", team(1))};
  const JournalIndex j{{"J90", 90}};
  auto m = compute_measures(ptrs(pubs), j);
  EXPECT_DOUBLE_EQ(m.p1, 0.90);
  EXPECT_DOUBLE_EQ(m.p2, 0.90);
  EXPECT_DOUBLE_EQ(m.p3, 1.0);
  EXPECT_DOUBLE_EQ(m.p4, 1.0);
}

TEST(ComputeMeasures, FourAuthorPaper) {
  std::vector<PublicationRecord> pubs{pub("P1", 2000, "J80", team(4))};
  auto m = compute_measures(ptrs(pubs), JournalIndex{{"J80", 80}});
  EXPECT_DOUBLE_EQ(m.p1, 0.80);
  EXPECT_DOUBLE_EQ(m.p2, 0.20);
  EXPECT_DOUBLE_EQ(m.p3, 1.0);
  EXPECT_DOUBLE_EQ(m.p4, 0.25);
}

TEST(ComputeMeasures, TwoPapersHandSummed) {
  std::vector<PublicationRecord> pubs{pub("P1", 2000, "J99", team(1)), pub("P2", 2001, "J5", team(2))};
  auto m = compute_measures(ptrs(pubs), JournalIndex{{"J99", 99}, {"J5", 5}});
  EXPECT_NEAR(m.p1, 0.99 + 0.10, 1e-12);
  EXPECT_NEAR(m.p2, 0.99 + 0.10 / 2, 1e-12);
  EXPECT_DOUBLE_EQ(m.p3, 2.0);
  EXPECT_DOUBLE_EQ(m.p4, 1.5);
}

TEST(ComputeCovariates, TeamAndCollaboration) {
  std::vector<PublicationRecord> pubs{pub("P1", 2000, "J1", team(1)), pub("P2", 2000, "J1", team(3))};
  auto c = compute_covariates(ptrs(pubs), "PL", JournalIndex{{"J1", 50}});
  EXPECT_DOUBLE_EQ(c.avg_team_size, 2.0);
  EXPECT_DOUBLE_EQ(c.collaboration_rate, 50.0);
  EXPECT_DOUBLE_EQ(c.intl_collaboration_rate, 0.0);
}

TEST(ComputeCovariates, SoloHomeUnitHasZeroRates) {
  std::vector<PublicationRecord> pubs{pub("P1", 2000, "J1", team(1)), pub("P2", 2000, "J1", team(1))};
  auto c = compute_covariates(ptrs(pubs), "PL", JournalIndex{{"J1", 50}});
  EXPECT_DOUBLE_EQ(c.collaboration_rate, 0.0);
  EXPECT_DOUBLE_EQ(c.intl_collaboration_rate, 0.0);
  EXPECT_DOUBLE_EQ(c.avg_team_size, 1.0);
}

TEST(ComputeCovariates, ForeignAndUnknownCountries) {
  auto mixed = team(2);
  mixed[1].country = "DE";
  auto unknown = team(2);
  unknown[1].country = "";
  std::vector<PublicationRecord> pubs{pub("P1", 2000, "J1", mixed), pub("P2", 2000, "J1", unknown),
                                      pub("P3", 2000, "J1", team(1)), pub("P4", 2000, "J1", team(1))};
  auto c = compute_covariates(ptrs(pubs), "PL", JournalIndex{{"J1", 50}});
  EXPECT_DOUBLE_EQ(c.intl_collaboration_rate, 25.0);
  EXPECT_DOUBLE_EQ(c.collaboration_rate, 50.0);
}

TEST(ComputeCovariates, EvenCountMedian) {
  std::vector<PublicationRecord> pubs{pub("P1", 2000, "J20", team(1)), pub("P2", 2000, "J91", team(1)),
                                      pub("P3", 2000, "J30", team(1)), pub("P4", 2000, "J90", team(1))};
  auto c = compute_covariates(ptrs(pubs), "PL", JournalIndex{{"J20", 20}, {"J30", 30}, {"J90", 90}, {"J91", 91}});
  EXPECT_DOUBLE_EQ(c.median_journal_percentile, 60.0);
}

TEST(ComputeCovariates, UnrankedVenuesCountAsTen) {
  std::vector<PublicationRecord> pubs{pub("P1", 2000, "V1", team(1)), pub("P2", 2000, "V2", team(1)),
                                      pub("P3", 2000, "J1", team(1))};
  auto c = compute_covariates(ptrs(pubs), "PL", JournalIndex{{"J1", 70}});
  EXPECT_DOUBLE_EQ(c.median_journal_percentile, 10.0);
  std::vector<PublicationRecord> only_unranked{pub("P1", 2000, "V1", team(1))};
  EXPECT_DOUBLE_EQ(compute_covariates(ptrs(only_unranked), "PL", {}).median_journal_percentile, 10.0);
}

TEST(ComputeMeasures, AddingAPublicationIncreasesEveryMeasure) {
  const JournalIndex j{{"J1", 3}, {"J2", 60}};
  std::vector<PublicationRecord> pubs{pub("P1", 2000, "J2", team(2))};
  auto before = compute_measures(ptrs(pubs), j);
  for (int size : {1, 5, 20}) {
    for (const char* venue : {"J1", "J2", "UNRANKED"}) {
      auto grown = pubs;
      grown.push_back(pub("P2", 2001, venue, team(size)));
      auto after = compute_measures(ptrs(grown), j);
      for (Measure m : kAllMeasures) EXPECT_GT(after[m], before[m]) << to_string(m);
    }
  }
}

namespace {

Pipeline closed_world(std::uint64_t seed) {
  SimConfig sim;
  sim.seed = seed;
  sim.n_authors = 500;
  sim.unranked_venue_prob = 0.1;
  sim.undeclared_first_year_prob = 0.0;
  return simulate(sim, 2);
}

}  // namespace

TEST(ProductivityProperties, FractionalCountsCloseOverEachPeriod) {
  auto pl = closed_world(21);
  ASSERT_TRUE(pl.corpus.report.unknown_authors.empty());
  std::map<std::size_t, double> p4_sum;
  std::map<std::size_t, double> pubs;
  for (const auto& u : pl.panel.units) p4_sum[u.period_index] += u.measures.p4;
  for (const auto& p : pl.corpus.publications) pubs[assign_period(p.year, pl.panel.periods)] += 1;
  ASSERT_EQ(p4_sum.size(), pubs.size());
  for (const auto& [period, n] : pubs) EXPECT_NEAR(p4_sum[period], n, 1e-9) << "period " << period;
}

TEST(ProductivityProperties, BoundsHoldForEveryUnit) {
  auto pl = closed_world(22);
  for (const auto& u : pl.panel.units) {
    const auto& m = u.measures;
    EXPECT_EQ(m.p3, static_cast<double>(u.publications.size()));
    EXPECT_LE(0.10 * m.p3, m.p1 + 1e-12);
    EXPECT_LE(m.p1, 0.99 * m.p3 + 1e-12);
    EXPECT_LE(m.p2, m.p1 + 1e-12);
    EXPECT_LE(m.p4, m.p3 + 1e-12);
    bool all_solo = true;
    for (std::size_t pi : u.publications) all_solo = all_solo && pl.corpus.publications[pi].authors.size() == 1;
    if (all_solo) {
      EXPECT_DOUBLE_EQ(m.p2, m.p1);
    }
    const auto& c = u.covariates;
    EXPECT_GE(c.avg_team_size, 1.0);
    EXPECT_GE(c.collaboration_rate, 0.0);
    EXPECT_LE(c.collaboration_rate, 100.0);
    EXPECT_GE(c.intl_collaboration_rate, 0.0);
    EXPECT_LE(c.intl_collaboration_rate, 100.0);
    EXPECT_GE(c.median_journal_percentile, 0.0);
    EXPECT_LE(c.median_journal_percentile, 99.0);
  }
}

TEST(ProductivityProperties, FullCountingMeasuresCorrelateMost) {
  auto pl = closed_world(23);
  // Brute-force two-pass Pearson over the pooled panel.
  auto r = [&](Measure a, Measure b) {
    const double n = static_cast<double>(pl.panel.units.size());
    double ma = 0, mb = 0;
    for (const auto& u : pl.panel.units) {
      ma += u.measure(a);
      mb += u.measure(b);
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (const auto& u : pl.panel.units) {
      sab += (u.measure(a) - ma) * (u.measure(b) - mb);
      saa += (u.measure(a) - ma) * (u.measure(a) - ma);
      sbb += (u.measure(b) - mb) * (u.measure(b) - mb);
    }
    return sab / std::sqrt(saa * sbb);
  };
  const double r14 = r(Measure::P1, Measure::P4);
  EXPECT_GT(r(Measure::P1, Measure::P3), r14);
  EXPECT_GT(r(Measure::P2, Measure::P4), r14);
}

TEST(ProductivityProperties, CovariatesAgreeWithGeneratorTeamSizes) {
  SimConfig sim;
  sim.seed = 24;
  sim.n_authors = 300;
  auto result = generate(sim, 1);
  auto truth = result.truth;
  auto pl = run(std::move(result.tables), run_config_for(sim));
  ASSERT_EQ(pl.panel.units.size(), truth.units.size());
  for (std::size_t i = 0; i < truth.units.size(); ++i) {
    EXPECT_NEAR(pl.panel.units[i].covariates.avg_team_size, truth.units[i].avg_team_size, 1e-12);
  }
}
