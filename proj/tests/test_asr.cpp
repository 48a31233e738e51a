#include <gtest/gtest.h>

#include <cmath>

#include "graad/asr/asr.hpp"

using namespace graad::asr;

namespace {

// Closed-form values from an independent 50-digit evaluation.
struct Frozen {
  SweepPoint p;
  double value;
  double joint_gap;  // product form minus shared-queue joint value (CN)
};

const std::vector<Frozen> kGrid = {
    {{Mode::na, 2, 11.091, 0}, 0.79999259896077566, 0},
    {{Mode::na, 2, 5, 0}, 0.61291797024687872, 0},
    {{Mode::na, 2, 20, 0}, 0.88312276280143301, 0},
    {{Mode::na, 4, 10, 0}, 0.80573844085774453, 0},
    {{Mode::na, 1.5, 20, 0}, 0.86242591598924366, 0},
    {{Mode::na, 10, 50, 0}, 0.95973014603174057, 0},
    {{Mode::cn, 2, 83.022, 12.915}, 0.80094008177399017, -0.000405},
    {{Mode::cn, 2, 20, 10}, 0.68967719559892272, -0.00178},
    {{Mode::cn, 2, 50, 20}, 0.84014926236850009, -0.000462},
    {{Mode::cn, 4, 30, 10}, 0.74965508101738676, -0.000324},
    {{Mode::cn, 1.5, 20, 20}, 0.74377846056988596, -0.00273},
    {{Mode::cn, 10, 100, 50}, 0.9402056161967668, -7.45e-6},
};

QueueModel model(const SweepPoint& p) {
  return QueueModel::from_ratios(p.c_t, p.c_rd, p.mode == Mode::cn ? p.c_r : 0);
}

}  // namespace

TEST(AsrAnalytic, MatchesOracle) {
  for (const auto& f : kGrid) {
    EXPECT_NEAR(asr_analytic(f.p.mode, model(f.p)), f.value, 1e-12)
        << to_string(f.p.mode) << " " << f.p.c_t << " " << f.p.c_rd << " " << f.p.c_r;
  }
}

TEST(AsrAnalytic, OperatingPoints) {
  EXPECT_NEAR(asr_na_analytic(QueueModel::from_ratios(2, 11.091)), 0.800, 0.001);
  EXPECT_NEAR(asr_cn_analytic(QueueModel::from_ratios(2, 83.022, 12.915)), 0.80, 0.005);
  EXPECT_GT(asr_na_analytic(QueueModel::from_ratios(2, 10)), 0.77);
}

TEST(AsrAnalytic, ServiceTimeScaleFree) {
  for (double t : {1e-3, 6.826e-3, 1.0, 250.0}) {
    EXPECT_NEAR(asr_na_analytic(QueueModel::from_ratios(2, 11.091, 0, t)),
                0.79999259896077566, 1e-12);
  }
}

TEST(AsrAnalytic, Limits) {
  QueueModel tiny{0.3, 0.7, 0.2, 1e-12};
  EXPECT_NEAR(asr_na_analytic(tiny), 1.0, 1e-6);
  EXPECT_NEAR(asr_cn_analytic(tiny), 1.0, 1e-6);

  QueueModel m = QueueModel::from_ratios(2, 11.091);
  m.lambda_r = 1e-12;
  EXPECT_NEAR(asr_cn_analytic(m), asr_na_analytic(m), 1e-6);

  QueueModel fast = QueueModel::from_ratios(2, 1e-4);
  EXPECT_LT(asr_na_analytic(fast), 1e-4);
}

TEST(AsrAnalytic, Errors) {
  EXPECT_THROW(asr_na_analytic(QueueModel{1.0, 0.1, 0, 1.0}), StabilityError);
  EXPECT_THROW(asr_na_analytic(QueueModel{2.0, 0.1, 0, 1.0}), StabilityError);
  EXPECT_THROW(asr_na_analytic(QueueModel{0.5, 0.0, 0, 1.0}), graad::InvalidArgument);
  EXPECT_THROW(asr_na_analytic(QueueModel{0.5, 0.1, 0, -1.0}), graad::InvalidArgument);
  EXPECT_THROW(asr_cn_analytic(QueueModel{0.5, 0.1, 0, 1.0}), graad::InvalidArgument);
  EXPECT_THROW(QueueModel::from_ratios(0, 1), graad::InvalidArgument);
}

TEST(AsrAnalytic, MonotoneInRatios) {
  std::vector<double> crd = {2, 5, 10, 20, 50};
  std::vector<double> frozen = {0.30326532985631671, 0.61291797024687872, 0.78095280141023176,
                                0.88312276280143301, 0.95133915437009819};
  double prev = 0;
  for (std::size_t k = 0; k < crd.size(); ++k) {
    double v = asr_na_analytic(QueueModel::from_ratios(2, crd[k]));
    EXPECT_NEAR(v, frozen[k], 1e-12);
    EXPECT_GT(v, prev);
    prev = v;
  }
  // Non-increasing in every rate and in T_s.
  QueueModel base{0.4, 0.05, 0.08, 1.0};
  double r0 = asr_cn_analytic(base);
  for (int field = 0; field < 4; ++field) {
    QueueModel m = base;
    double* p[] = {&m.lambda_t, &m.lambda_rd, &m.lambda_r, &m.service};
    *p[field] *= 1.2;
    EXPECT_LE(asr_cn_analytic(m), r0) << field;
  }
}

TEST(AsrSim, Deterministic) {
  SimConfig cfg{QueueModel::from_ratios(2, 11.091), Mode::na, 20000, 42, false};
  EXPECT_EQ(simulate_asr(cfg), simulate_asr(cfg));
  SimConfig other = cfg;
  other.seed = 43;
  EXPECT_NE(simulate_asr(cfg).successes, simulate_asr(other).successes);
}

TEST(AsrSim, CountsAddUp) {
  for (bool reneging : {false, true}) {
    SimConfig cfg{QueueModel::from_ratios(1.2, 4, 6), Mode::cn, 50000, 7, reneging};
    SimResult r = simulate_asr(cfg);
    EXPECT_EQ(r.successes + r.fail_rd + r.fail_r, r.arrivals);
    EXPECT_GT(r.fail_r, 0u);
    EXPECT_GE(r.asr, 0.0);
    EXPECT_LE(r.asr, 1.0);
    EXPECT_EQ(r.reneged > 0, reneging);
  }
}

TEST(AsrSim, Errors) {
  SimConfig cfg{QueueModel::from_ratios(2, 10), Mode::na, 0, 1, false};
  EXPECT_THROW(simulate_asr(cfg), graad::InvalidArgument);
  // Unstable models still run, with a warning available.
  SimConfig hot{QueueModel{1.5, 0.1, 0, 1.0}, Mode::na, 1000, 1, false};
  EXPECT_NO_THROW(simulate_asr(hot));
  EXPECT_FALSE(stability_warning(hot.model).empty());
  EXPECT_TRUE(stability_warning(QueueModel::from_ratios(2, 10)).empty());
}

TEST(AsrSim, EmptyQueueLimit) {
  SimConfig cfg{QueueModel::from_ratios(1e6, 7), Mode::na, 200000, 3, false};
  SimResult r = simulate_asr(cfg);
  EXPECT_NEAR(r.asr, std::exp(-2.0 / 7), 3 * r.ci_half);
}

TEST(AsrSim, RenegingDiffersFromAnalyticModel) {
  QueueModel m = QueueModel::from_ratios(1.2, 3);
  SimResult plain = simulate_asr(SimConfig{m, Mode::na, 200000, 5, false});
  SimResult ren = simulate_asr(SimConfig{m, Mode::na, 200000, 5, true});
  EXPECT_NEAR(plain.asr, asr_na_analytic(m), std::max(0.005, 3 * plain.ci_half));
  EXPECT_GT(ren.asr, plain.asr + 0.01);
}

TEST(AsrSim, AgreesWithClosedForms) {
  for (const auto& f : kGrid) {
    QueueModel m = model(f.p);
    SimResult r = simulate_asr(SimConfig{m, f.p.mode, 200000, 11, false});
    EXPECT_NEAR(r.asr, f.value, std::max(0.005, 3 * r.ci_half)) << to_string(f.p.mode);
  }
}

TEST(AsrSim, PollaczekKhinchineMeanWait) {
  QueueModel m = QueueModel::from_ratios(2, 10);  // rho = 0.5
  SimResult r = simulate_asr(SimConfig{m, Mode::na, 1000000, 9, false});
  double pk = md1_mean_wait(m);
  EXPECT_DOUBLE_EQ(pk, 0.5);
  EXPECT_NEAR(r.mean_wait / pk, 1.0, 0.02);
}

TEST(AsrSim, StreamsIndependentOfEachOther) {
  Stream a(1, 0), b(1, 1), a2(1, 0);
  int same = 0;
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t x = a.next();
    same += x == b.next();
    EXPECT_EQ(x, a2.next());
  }
  EXPECT_EQ(same, 0);
  Stream u(5, 0);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) sum += u.exponential(2.0);
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(AsrSweep, CsvAndAudit) {
  std::vector<SweepPoint> grid;
  for (double crd : {2.0, 5.0, 10.0, 20.0, 50.0}) grid.push_back({Mode::na, 2, crd, 0});
  for (double cr : {5.0, 10.0, 20.0}) grid.push_back({Mode::cn, 2, 10, cr});
  auto rows = asr_sweep(grid, 1000, 77);
  ASSERT_EQ(rows.size(), grid.size());
  EXPECT_TRUE(monotonicity_violations(rows).empty());
  EXPECT_EQ(rows[0].seed, derive_seed(77, 0));
  EXPECT_EQ(rows, asr_sweep(grid, 1000, 77));

  std::string csv = sweep_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "mode,c_t,c_rd,c_r,analytic,sim,ci_half,arrivals,seed");
  EXPECT_NE(csv.find("\nna,2,10,,0.780953,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("\ncn,2,10,20,"), std::string::npos);

  // A fabricated inversion is flagged.
  rows[2].analytic = 0.1;
  EXPECT_FALSE(monotonicity_violations(rows).empty());
}

TEST(AsrSweep, FormatSixDigits) {
  EXPECT_EQ(format_g6(0.79999259896), "0.799993");
  EXPECT_EQ(format_g6(2.0), "2");
  EXPECT_EQ(format_g6(83.022), "83.022");
  EXPECT_EQ(format_g6(1234567.0), "1.23457e+06");
}
