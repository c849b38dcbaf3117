#include <gtest/gtest.h>

#include <random>
#include <set>

#include "interline/allocation.hpp"
#include "oracles.hpp"

using namespace interline;

namespace {

AllocationRoute even_route(std::string id, Seconds headway, RunTimeModel model, int fleet) {
  return {ServicePlan::even(std::move(id), headway, 0, 9000), std::move(model), fleet};
}

}  // namespace

TEST(FleetSizeEvenHeadway, ExactMultiple) { EXPECT_EQ(fleet_size_even_headway(5400, 540), 10); }

TEST(FleetSizeEvenHeadway, RoundsUp) { EXPECT_EQ(fleet_size_even_headway(5401, 540), 11); }

TEST(FleetSizeEvenHeadway, TenBusesAtSixMinutesBoundsTheCycle) {
  EXPECT_EQ(fleet_size_even_headway(3240, 360), 9);
  EXPECT_EQ(fleet_size_even_headway(3240.5, 360), 10);
  EXPECT_EQ(fleet_size_even_headway(3600, 360), 10);
  EXPECT_EQ(fleet_size_even_headway(3600.5, 360), 11);
}

TEST(FleetSizeEvenHeadway, RejectsNonPositive) {
  EXPECT_THROW(fleet_size_even_headway(0, 540), DomainError);
  EXPECT_THROW(fleet_size_even_headway(5400, -1), DomainError);
}

TEST(FleetSizeDeficit, OverlappingTrips) {
  EXPECT_EQ(fleet_size_deficit(ServicePlan::timetable("X", {0, 600, 1200}, 0, 3600), 1500), 3);
}

TEST(FleetSizeDeficit, BusReturnsBeforeNextDeparture) {
  EXPECT_EQ(fleet_size_deficit(ServicePlan::timetable("X", {0, 600, 1200}, 0, 3600), 500), 1);
}

TEST(FleetSizeDeficit, SingleDeparture) {
  EXPECT_EQ(fleet_size_deficit(ServicePlan::timetable("X", {100}, 0, 3600), 99999), 1);
}

TEST(FleetSizeDeficit, ArrivalAtDepartureInstantIsReused) {
  EXPECT_EQ(fleet_size_deficit(ServicePlan::timetable("X", {0, 600}, 0, 3600), 600), 1);
}

TEST(FleetSizeDeficit, Errors) {
  EXPECT_THROW(fleet_size_deficit(ServicePlan::timetable("X", {}, 0, 3600), 100), DomainError);
  EXPECT_THROW(fleet_size_deficit(ServicePlan::even("X", 300, 0, 3600), 100), DomainError);
  EXPECT_THROW(fleet_size_deficit(ServicePlan::timetable("X", {0}, 0, 3600), 0), DomainError);
}

TEST(FleetSizeDeficit, MatchesMinuteScan) {
  std::mt19937_64 gen(42);
  std::uniform_int_distribution<int> count(1, 25), minute(0, 240), duration(1, 180);
  for (int k = 0; k < 300; ++k) {
    std::set<int> mins;
    const int n = count(gen);
    while (static_cast<int>(mins.size()) < n) mins.insert(minute(gen));
    const std::vector<int> dep_min(mins.begin(), mins.end());
    std::vector<Seconds> deps;
    for (int m : dep_min) deps.push_back(60.0 * m);
    const int dur = duration(gen);
    const auto plan = ServicePlan::timetable("R", deps, 0, 60.0 * 241);
    EXPECT_EQ(fleet_size_deficit(plan, 60.0 * dur), oracle::minute_scan_deficit(dep_min, dur));
  }
}

TEST(FleetSizeDeficit, AgreesWithEvenHeadwayFormula) {
  for (Seconds h : {300.0, 360.0, 420.0, 510.0, 540.0}) {
    for (Seconds cycle : {1000.0, 2972.0, 3600.0, 4761.0, 6200.0}) {
      const auto even = ServicePlan::even("R", h, 0, 4 * cycle + 10 * h);
      const auto explicit_plan = ServicePlan::timetable("R", scheduled_departures(even), 0, even.period_end);
      EXPECT_EQ(fleet_size_deficit(explicit_plan, cycle), fleet_size_even_headway(cycle, h)) << h << " " << cycle;
    }
  }
}

TEST(EffectivePercentile, NormalSevenBuses) {
  EXPECT_NEAR(effective_percentile(RunTimeModel::normal(3600, 300), 7, 540), 0.7257, 0.001);
}

TEST(EffectivePercentile, NormalEightBuses) {
  EXPECT_NEAR(effective_percentile(RunTimeModel::normal(3600, 300), 8, 540), 0.9918, 0.001);
}

TEST(EffectivePercentile, SymmetricAtMean) {
  EXPECT_NEAR(effective_percentile(RunTimeModel::normal(3600, 250), 10, 360), 0.5, 1e-12);
  EXPECT_NEAR(effective_percentile(RunTimeModel::empirical({100, 200, 300, 400}), 5, 50), 0.5, 1e-12);
}

TEST(EffectivePercentile, MonotoneInFleetAndHeadway) {
  const auto m = RunTimeModel::lognormal(4761, 0.15);
  for (int n = 1; n < 20; ++n) {
    EXPECT_LE(effective_percentile(m, n, 540), effective_percentile(m, n + 1, 540));
    EXPECT_LE(effective_percentile(m, n, 500), effective_percentile(m, n, 540));
  }
  EXPECT_THROW(effective_percentile(m, 0, 540), DomainError);
}

TEST(EffectivePercentile, MatchesNumericalIntegration) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> mean(1500, 7000), cov(0.05, 0.4), headway(240, 900);
  std::uniform_int_distribution<int> fleet(1, 20);
  for (int k = 0; k < 60; ++k) {
    const double mu = mean(gen), cv = cov(gen), h = headway(gen);
    const int n = fleet(gen);
    EXPECT_NEAR(effective_percentile(RunTimeModel::normal(mu, cv * mu), n, h),
                oracle::normal_cdf_numeric(mu, cv * mu, n * h), 1e-3);
    EXPECT_NEAR(effective_percentile(RunTimeModel::lognormal(mu, cv), n, h),
                oracle::lognormal_cdf_numeric(mu, cv, n * h), 1e-3);
  }
}

TEST(EffectiveCycle, ExplicitTimetable) {
  const auto plan = ServicePlan::timetable("X", {0, 600, 1200}, 0, 3600);
  EXPECT_DOUBLE_EQ(effective_cycle(plan, 1), 600);
  EXPECT_DOUBLE_EQ(effective_cycle(plan, 2), 1200);
  EXPECT_TRUE(std::isinf(effective_cycle(plan, 3)));
  EXPECT_EQ(effective_cycle(plan, 0), 0);
}

TEST(Allocate, ZeroSharedKeepsBaseFleet) {
  const std::vector<AllocationRoute> routes{even_route("A", 540, RunTimeModel::normal(4761, 300), 10),
                                            even_route("C", 420, RunTimeModel::normal(2972, 450), 9)};
  const auto r = allocate(routes, 0);
  EXPECT_EQ(r.dedicated, (std::vector<int>{10, 9}));
  EXPECT_EQ(r.shared_fleet_size, 0);
  EXPECT_TRUE(r.trace.empty());
}

TEST(Allocate, IdenticalRoutesAlternateDonors) {
  const auto m = RunTimeModel::normal(3000, 300);
  const std::vector<AllocationRoute> routes{even_route("X", 400, m, 9), even_route("Y", 400, m, 9)};
  const auto r = allocate(routes, 2);
  EXPECT_EQ(r.dedicated, (std::vector<int>{8, 8}));
  ASSERT_EQ(r.trace.size(), 2u);
  EXPECT_EQ(r.trace[0].route_id, "X");
  EXPECT_EQ(r.trace[1].route_id, "Y");
}

TEST(Allocate, DonorHasHigherPercentileAfterDonation) {
  const auto a = RunTimeModel::normal(4761, 300);
  const auto c = RunTimeModel::normal(2972, 450);
  const std::vector<AllocationRoute> routes{even_route("A", 540, a, 10), even_route("C", 420, c, 9)};
  const double pa = oracle::normal_cdf_numeric(4761, 300, 9 * 540.0);
  const double pc = oracle::normal_cdf_numeric(2972, 450, 8 * 420.0);
  const auto r = allocate(routes, 1);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].route_id, pa > pc ? "A" : "C");
  EXPECT_NEAR(r.trace[0].effective_percentile, std::max(pa, pc), 1e-6);
}

TEST(Allocate, TooManySharedNamesBindingRoute) {
  const std::vector<AllocationRoute> routes{even_route("A", 540, RunTimeModel::normal(4761, 300), 2),
                                            even_route("C", 420, RunTimeModel::normal(2972, 450), 1)};
  EXPECT_NO_THROW(allocate(routes, 1));
  try {
    allocate(routes, 2);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("'A'"), std::string::npos) << e.what();
  }
  EXPECT_THROW(allocate(routes, -1), DomainError);
  EXPECT_NO_THROW(allocate(routes, 3, {0.95, 0}));
}

TEST(Allocate, BaseFleetFromDesignPercentile) {
  const AllocationRoute r{ServicePlan::even("A", 540, 0, 9000), RunTimeModel::normal(3600, 300), std::nullopt};
  // 95th percentile 4093.5 s -> ceil(4093.5 / 540) = 8
  EXPECT_EQ(base_fleet_size(r, 0.95), 8);
  EXPECT_EQ(base_fleet_size(r, 0.5), 7);
  EXPECT_THROW(base_fleet_size(r, 1.0), DomainError);
}

TEST(Allocate, ConservationAndGreedyConsistency) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> mean(2000, 6500), cov(0.05, 0.35), headway(240, 720);
  std::uniform_int_distribution<int> nroutes(1, 6);
  for (int k = 0; k < 200; ++k) {
    std::vector<AllocationRoute> routes;
    const int n = nroutes(gen);
    int donatable = 0;
    for (int r = 0; r < n; ++r) {
      const double mu = mean(gen);
      routes.push_back({ServicePlan::even("R" + std::to_string(r), headway(gen), 0, 9000),
                        RunTimeModel::lognormal(mu, cov(gen)), std::nullopt});
    }
    auto res = allocate(routes, 0);
    for (int f : res.base_fleet) donatable += f - 1;
    const int target = std::uniform_int_distribution<int>(0, donatable)(gen);
    res = allocate(routes, target);
    int base_total = 0;
    for (int f : res.base_fleet) base_total += f;
    EXPECT_EQ(res.total_fleet(), base_total);
    for (int d : res.dedicated) EXPECT_GE(d, 1);

    // Replay the trace and check each donor was a maximizer.
    std::vector<int> fleet = res.base_fleet;
    for (const auto& step : res.trace) {
      for (int r = 0; r < n; ++r) {
        if (fleet[r] - 1 < 1) continue;
        EXPECT_GE(step.effective_percentile, route_percentile(routes[r], fleet[r] - 1));
      }
      --fleet[step.route];
    }
    EXPECT_EQ(fleet, res.dedicated);
  }
}
