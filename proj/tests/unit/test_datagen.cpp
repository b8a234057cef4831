#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "siginv/datagen.hpp"
#include "siginv/errors.hpp"

using namespace siginv;

TEST(Sines, DeterministicAndBounded) {
  SinesConfig c;
  c.count = 20;
  c.length = 50;
  c.channels = 2;
  c.seed = 9;
  const auto a = gen_sines(c), b = gen_sines(c);
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].values(), b[i].values());
    EXPECT_EQ(a[i].dim(), 2);
    for (double v : a[i].values()) {
      EXPECT_LE(v, 1.0);
      EXPECT_GE(v, -1.0);
    }
  }
  c.seed = 10;
  EXPECT_NE(gen_sines(c)[0].values(), a[0].values());
}

TEST(Sines, ArcsineMoments) {
  SinesConfig c;
  c.count = 10000;
  c.length = 11;
  const auto paths = gen_sines(c);
  for (std::size_t tp : {0u, 5u, 10u}) {
    double m1 = 0, m2 = 0, m4 = 0;
    for (const auto& p : paths) {
      const double v = p.value(tp, 0);
      m1 += v;
      m2 += v * v;
      m4 += v * v * v * v;
    }
    m1 /= c.count;
    m2 /= c.count;
    m4 /= c.count;
    EXPECT_NEAR(m1, 0.0, 0.02);
    EXPECT_NEAR(m2, 0.5, 0.02 * 0.5);
    EXPECT_NEAR(m4, 0.375, 0.02 * 0.375);
  }
}

TEST(NoisySines, ShapeAndDeterminism) {
  NoisySinesConfig c;
  const auto a = gen_noisy_sines(c);
  ASSERT_EQ(a.size(), 15u);
  EXPECT_EQ(a[0].size(), 200u);
  EXPECT_EQ(a[3].values(), gen_noisy_sines(c)[3].values());
}

TEST(PredatorPrey, EquilibriumIsFixed) {
  double dx = 1, dy = 1;
  predator_prey_rhs(1.0, 1.0, dx, dy);
  EXPECT_EQ(dx, 0.0);
  EXPECT_EQ(dy, 0.0);
  const auto p = predator_prey_trajectory(1.0, 1.0, 100, 10.0, 10);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(p.value(i, 0), 1.0);
    EXPECT_EQ(p.value(i, 1), 1.0);
  }
}

TEST(PredatorPrey, InvariantConservedAndPositive) {
  const auto p = predator_prey_trajectory(1.0, 2.0 / 3.0, 1001, 10.0, 10);
  const double h0 = predator_prey_invariant(1.0, 2.0 / 3.0);
  double drift = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_GT(p.value(i, 0), 0.0);
    EXPECT_GT(p.value(i, 1), 0.0);
    drift = std::max(drift, std::abs(predator_prey_invariant(p.value(i, 0), p.value(i, 1)) - h0));
  }
  EXPECT_LT(drift, 1e-4);
}

TEST(PredatorPrey, StepHalvingAgrees) {
  const auto a = predator_prey_trajectory(0.6, 1.4, 201, 10.0, 10);
  const auto b = predator_prey_trajectory(0.6, 1.4, 201, 10.0, 20);
  for (std::size_t i = 0; i < a.values().size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-6);
}

TEST(PredatorPrey, DatasetInBox) {
  PredatorPreyConfig c;
  c.count = 10;
  c.length = 50;
  const auto ps = gen_predator_prey(c);
  ASSERT_EQ(ps.size(), 10u);
  for (const auto& p : ps) {
    EXPECT_GE(p.value(0, 0), c.ic_min);
    EXPECT_LE(p.value(0, 1), c.ic_max);
  }
}

TEST(Fbm, BrownianIncrementsUncorrelated) {
  FbmConfig c;
  c.count = 1000;
  c.length = 50;
  c.hurst = 0.5;
  c.seed = 3;
  const auto ps = gen_fbm(c);
  double sxy = 0, sxx = 0;
  int n = 0;
  for (const auto& p : ps) {
    EXPECT_EQ(p.value(0, 0), 0.0);
    for (std::size_t i = 2; i < p.size(); ++i) {
      const double a = p.value(i - 1, 0) - p.value(i - 2, 0);
      const double b = p.value(i, 0) - p.value(i - 1, 0);
      sxy += a * b;
      sxx += a * a;
      ++n;
    }
  }
  const double rho = sxy / sxx;
  EXPECT_LT(std::abs(rho), 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Fbm, VarianceScaling) {
  for (double h : {0.3, 0.5, 0.75}) {
    FbmConfig c;
    c.count = 2000;
    c.length = 21;
    c.hurst = h;
    c.seed = 4;
    const auto ps = gen_fbm(c);
    for (std::size_t i : {5u, 10u, 20u}) {
      double s2 = 0.0;
      for (const auto& p : ps) s2 += p.value(i, 0) * p.value(i, 0);
      s2 /= c.count;
      const double t = ps[0].time(i);
      const double expect = std::pow(t, 2 * h);
      EXPECT_NEAR(s2, expect, 3.0 * expect * std::sqrt(2.0 / c.count)) << h << " " << t;
    }
  }
}

TEST(Fbm, Reproducible) {
  FbmConfig c;
  c.seed = 8;
  EXPECT_EQ(gen_fbm(c)[4].values(), gen_fbm(c)[4].values());
}

TEST(IngestCsv, WindowCount) {
  std::ostringstream csv;
  csv << "value\n";
  for (int i = 0; i < 10242; ++i) csv << std::sin(0.01 * i) << '\n';
  std::istringstream in(csv.str());
  CsvLayout layout;
  layout.window = 1000;
  layout.stride = 200;
  const auto r = ingest_csv(in, layout);
  EXPECT_EQ(r.rows, 10242u);
  EXPECT_EQ(r.window_count, (10242u - 1000u) / 200u + 1u);
  EXPECT_EQ(r.paths.size(), r.window_count);
  EXPECT_EQ(r.paths[0].dim(), 1);
  EXPECT_EQ(r.paths[1].value(0, 0), r.paths[0].value(200, 0));
}

TEST(IngestCsv, StrideBeyondFileWarns) {
  std::istringstream in("a\n1\n2\n3\n");
  CsvLayout layout;
  layout.window = 10;
  layout.stride = 50;
  const auto r = ingest_csv(in, layout);
  EXPECT_EQ(r.window_count, 0u);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(IngestCsv, TimeColumnAndErrors) {
  std::istringstream in("t,x,y\n0,1,2\n0.5,2,3\n1.5,3,4\n");
  CsvLayout layout;
  layout.time_column = 0;
  layout.channels = {1, 2};
  layout.window = 3;
  layout.stride = 1;
  const auto r = ingest_csv(in, layout);
  ASSERT_EQ(r.paths.size(), 1u);
  EXPECT_EQ(r.paths[0].time(2), 1.5);
  EXPECT_EQ(r.paths[0].value(1, 1), 3.0);

  std::istringstream bad("x\n1\nfoo\n");
  layout = CsvLayout{};
  layout.window = 2;
  try {
    ingest_csv(bad, layout);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 3);
  }
}

TEST(PathsCsv, RoundTripIsExact) {
  SinesConfig c;
  c.count = 3;
  c.length = 7;
  c.channels = 2;
  const auto a = gen_sines(c);
  std::ostringstream out;
  write_paths_csv(out, a);
  EXPECT_EQ(out.str().rfind("series,time,c0,c1\n", 0), 0u);
  std::istringstream in(out.str());
  const auto b = read_paths_csv(in);
  ASSERT_EQ(b.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].times(), b[i].times());
    EXPECT_EQ(a[i].values(), b[i].values());
  }
  std::istringstream bad("series,time,c0\n0,0,1\n0,1\n");
  EXPECT_THROW(read_paths_csv(bad), ParseError);
}
