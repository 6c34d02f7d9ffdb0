// Copyright 2026 The coldstart-dsmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "coldstart/errors.hpp"
#include "coldstart/identify.hpp"

namespace coldstart {
namespace {

std::vector<double> random_steps(std::mt19937_64& rng, std::size_t n, std::size_t hold) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> u(n);
  double v = d(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % hold == 0) v = d(rng);
    u[i] = v;
  }
  return u;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(Identify, ZohSimulatorMatchesAnalyticStep) {
  const FirstOrderTF tf{2.0, 0.5};
  const std::vector<double> u(300, 1.0);
  const auto y = simulate_first_order(tf, u, 0.02);
  // Step response of 1/(2s + 0.5): 2 (1 - exp(-t/4)).
  for (std::size_t k = 0; k < y.size(); ++k) {
    EXPECT_NEAR(y[k], 2.0 * (1.0 - std::exp(-0.02 * k / 4.0)), 1e-12);
  }
}

TEST(Identify, NoiselessRoundTrip) {
  std::mt19937_64 rng(1);
  const FirstOrderTF tf{2.0, 0.5};
  const auto u = random_steps(rng, 3000, 50);
  const auto y = simulate_first_order(tf, u, 0.02);
  const FirstOrderFit f = identify_first_order(u, y, 0.02);
  EXPECT_LE(rel(f.tf.tau, 2.0), 1e-3);
  EXPECT_LE(rel(f.tf.k, 0.5), 1e-3);
  EXPECT_TRUE(f.tau_identifiable);
}

TEST(Identify, NoiselessRoundTripAcrossPoleRange) {
  const double T = 0.02;
  std::mt19937_64 rng(2);
  for (double pole : {0.01, 0.1, 1.0, 10.0, 0.5 * 3.14159 / T}) {
    const FirstOrderTF tf{1.0 / pole * 1.7, 1.7};  // pole k/tau
    const std::size_t n = pole < 0.05 ? 60000 : 4000;
    const auto u = random_steps(rng, n, 7);
    const auto y = simulate_first_order(tf, u, T);
    const FirstOrderFit f = identify_first_order(u, y, T);
    EXPECT_LE(rel(f.tf.tau, tf.tau), 1e-3) << "pole " << pole;
    EXPECT_LE(rel(f.tf.k, tf.k), 1e-3) << "pole " << pole;
  }
}

TEST(Identify, SixtyDbNoiseWithinTwoPercent) {
  const FirstOrderTF tf{2.0, 0.5};
  int bad = 0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    std::normal_distribution<double> white(0.0, 1.0);
    std::vector<double> u(5000);
    for (double& v : u) v = white(rng);
    auto y = simulate_first_order(tf, u, 0.02);
    double power = 0.0;
    for (double v : y) power += v * v;
    const double sigma = std::sqrt(power / static_cast<double>(y.size())) * 1e-3;
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : y) v += noise(rng);
    const FirstOrderFit f = identify_first_order(u, y, 0.02);
    if (rel(f.tf.tau, 2.0) > 0.02 || rel(f.tf.k, 0.5) > 0.02) ++bad;
  }
  EXPECT_EQ(bad, 0);
}

TEST(Identify, DcOnlyFlagsTau) {
  const std::vector<double> u(50, 2.0), y(50, 8.0);
  const FirstOrderFit f = identify_first_order(u, y, 0.02);
  EXPECT_FALSE(f.tau_identifiable);
  EXPECT_DOUBLE_EQ(1.0 / f.tf.k, 4.0);
}

TEST(Identify, Errors) {
  const std::vector<double> zero(50, 0.0), one(50, 1.0), shortv(5, 1.0);
  EXPECT_THROW(identify_first_order(zero, one, 0.02), IdentificationError);
  EXPECT_THROW(identify_first_order(shortv, shortv, 0.02), IdentificationError);
  EXPECT_THROW(identify_first_order(one, std::vector<double>(49, 1.0), 0.02),
               IdentificationError);
  // Growing output: pole outside (0, 1).
  std::vector<double> u(100, 1.0), y(100);
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = std::pow(1.05, static_cast<double>(k));
  EXPECT_THROW(identify_first_order(u, y, 0.02), IdentificationError);
}

TEST(PairSpecs, Parse) {
  const auto p = parse_pair_specs("1.1=afr/mdot_fc, 2.3=omega/delta");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[1].i, 1u);
  EXPECT_EQ(p[1].j, 2u);
  EXPECT_EQ(p[1].y_column, "omega");
  EXPECT_EQ(p[1].u_column, "delta");
  EXPECT_THROW(parse_pair_specs("1.1=afr"), ValidationError);
  EXPECT_THROW(parse_pair_specs("0.1=a/b"), ValidationError);
  EXPECT_THROW(parse_pair_specs(""), ValidationError);
}

// Synthetic single-input experiments for every (i, j) of a 3x3 model.
csv::Table mimo_table(const TFMatrix& m, double T, std::size_t n) {
  csv::Table t;
  std::vector<std::vector<double>> cols;
  std::mt19937_64 rng(77);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const auto u = random_steps(rng, n, 25);
      const auto y = m.at(i, j) ? simulate_first_order(*m.at(i, j), u, T)
                                : std::vector<double>(n, 0.0);
      t.header.push_back("u" + std::to_string(i + 1) + std::to_string(j + 1));
      t.header.push_back("y" + std::to_string(i + 1) + std::to_string(j + 1));
      cols.push_back(u);
      cols.push_back(y);
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::string> row;
    for (const auto& c : cols) row.push_back(csv::format_double(c[r]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string all_pairs() {
  std::string s;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      const std::string ij = std::to_string(i) + std::to_string(j);
      s += (s.empty() ? "" : ",") + std::to_string(i) + "." + std::to_string(j) + "=y" + ij +
           "/u" + ij;
    }
  return s;
}

TEST(IdentifyMimo, ThreeByThreeRoundTrip) {
  const TFMatrix truth = default_engine_model();
  const MimoFit fit = identify_mimo(mimo_table(truth, 0.02, 4000), parse_pair_specs(all_pairs()),
                                    0.02);
  ASSERT_TRUE(fit.complete());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_LE(rel(fit.model.at(i, j)->tau, truth.at(i, j)->tau), 1e-3);
      EXPECT_LE(rel(fit.model.at(i, j)->k, truth.at(i, j)->k), 1e-3);
    }
}

TEST(IdentifyMimo, ZeroResponseIsZeroCoupling) {
  TFMatrix truth = default_engine_model();
  truth.set(0, 2, std::nullopt);
  const MimoFit fit = identify_mimo(mimo_table(truth, 0.02, 2000), parse_pair_specs(all_pairs()),
                                    0.02);
  EXPECT_TRUE(fit.complete());
  EXPECT_FALSE(fit.model.at(0, 2));
  bool found = false;
  for (const auto& r : fit.reports) {
    if (r.spec.i == 0 && r.spec.j == 2) {
      EXPECT_EQ(r.status, PairStatus::kZeroCoupling);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(IdentifyMimo, PermutedInputsPermuteColumns) {
  const TFMatrix truth = default_engine_model();
  const csv::Table t = mimo_table(truth, 0.02, 3000);
  // Declare input j as column perm[j]: the fitted model's columns move too.
  std::string spec;
  const int perm[3] = {3, 1, 2};
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      const std::string ij = std::to_string(i) + std::to_string(perm[j - 1]);
      spec += (spec.empty() ? "" : ",") + std::to_string(i) + "." + std::to_string(j) + "=y" +
              ij + "/u" + ij;
    }
  const MimoFit a = identify_mimo(t, parse_pair_specs(all_pairs()), 0.02);
  const MimoFit b = identify_mimo(t, parse_pair_specs(spec), 0.02);
  EXPECT_EQ(b.model, a.model.permute_inputs({2, 0, 1}));
}

TEST(IdentifyMimo, MissingColumnNamed) {
  const csv::Table t = mimo_table(default_engine_model(), 0.02, 100);
  try {
    identify_mimo(t, parse_pair_specs("1.1=nope/u11"), 0.02);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos) << e.what();
  }
}

TEST(IdentifyMimo, FailedPairLeavesHoleAndContinues) {
  csv::Table t;
  t.header = {"u", "y", "z"};
  for (int k = 0; k < 50; ++k) {
    t.rows.push_back({csv::format_double(k % 5 ? 1.0 : -1.0), csv::format_double(std::pow(1.1, k)),
                      "0"});
  }
  const MimoFit fit = identify_mimo(t, parse_pair_specs("1.1=y/u,1.2=z/u"), 0.02);
  EXPECT_FALSE(fit.complete());
  EXPECT_EQ(fit.reports[0].status, PairStatus::kError);
  EXPECT_NE(fit.reports[0].message.find("(1,1)"), std::string::npos) << fit.reports[0].message;
  EXPECT_NE(mimo_model_csv(fit).find("error"), std::string::npos);
}

}  // namespace
}  // namespace coldstart
