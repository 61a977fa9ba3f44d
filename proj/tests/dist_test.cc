// Copyright 2026 The ADR Benchmark Authors
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

#include "adr/dist/distribution.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

namespace adr {
namespace {

TEST(ParamSpaceTest, Endpoints) {
  const ParamSpace space(Eigen::Vector2d(0.25, 1.0), Eigen::Vector2d(2.5, 3.0));
  EXPECT_EQ(space.Normalize(space.lo()), Eigen::Vector2d(0.0, 0.0));
  EXPECT_EQ(space.Normalize(space.hi()), Eigen::Vector2d(4.0, 4.0));
}

TEST(ParamSpaceTest, HandArithmetic) {
  const ParamSpace space(Eigen::VectorXd::Constant(1, 0.25),
                         Eigen::VectorXd::Constant(1, 2.5));
  EXPECT_NEAR(space.Normalize(Eigen::VectorXd::Constant(1, 1.0))[0],
              4.0 / 3.0, 1e-15);
}

TEST(ParamSpaceTest, RoundTripOnRandomVectors) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(-3.0, 7.0);
  const ParamSpace space(Eigen::Vector3d(0.1, 2.0, -1.0),
                         Eigen::Vector3d(0.7, 9.0, 4.0));
  for (int i = 0; i < 1000; ++i) {
    Eigen::Vector3d z(u(rng), u(rng), u(rng));
    const Eigen::VectorXd xi = space.Denormalize(z);
    EXPECT_LT((space.Normalize(xi) - z).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((space.Denormalize(space.Normalize(xi)) - xi)
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

TEST(ParamSpaceTest, RejectsInvertedBounds) {
  EXPECT_THROW(ParamSpace(Eigen::VectorXd::Constant(1, 1.0),
                          Eigen::VectorXd::Constant(1, 1.0)),
               std::invalid_argument);
}

TEST(PriorTest, CenteredWithIdentityCovariance) {
  const DomainDistribution p = Prior(3);
  ASSERT_TRUE(p.is_gaussian());
  EXPECT_EQ(p.gaussian().mean, Eigen::Vector3d::Constant(2.0));
  EXPECT_EQ(p.gaussian().var, Eigen::Vector3d::Ones());
}

TEST(PriorTest, MeanMapsToRangeMidpoint) {
  const ParamSpace space(Eigen::Vector2d(0.25, 0.5), Eigen::Vector2d(2.5, 5.0));
  const Eigen::VectorXd mid = space.Denormalize(Prior(2).gaussian().mean);
  EXPECT_NEAR(mid[0], 1.375, 1e-15);
  EXPECT_NEAR(mid[1], 2.75, 1e-15);
}

TEST(SampleTest, ClampedPriorStaysInRange) {
  Rng rng(4);
  const DomainDistribution p = Prior(4);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_TRUE(InNormalizedRange(Sample(p, rng, true)));
  }
}

TEST(SampleTest, DegenerateUniform) {
  Rng rng(4);
  const DomainDistribution d = PointMass(Eigen::Vector2d(1.5, 3.0));
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(Sample(d, rng, false), Eigen::Vector2d(1.5, 3.0));
  }
}

TEST(SampleTest, GaussianMeanMonteCarlo) {
  Rng rng(9);
  const Gaussian g{Eigen::Vector2d(1.0, 3.0), Eigen::Vector2d(0.25, 2.0)};
  const int n = 100000;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (int i = 0; i < n; ++i) sum += Sample(g, rng, false);
  const Eigen::Vector2d mean = sum / n;
  for (int d = 0; d < 2; ++d) {
    EXPECT_NEAR(mean[d], g.mean[d], 4.0 * std::sqrt(g.var[d] / n));
  }
}

TEST(SampleTest, SameSeedSameSequence) {
  Rng a(17), b(17);
  const DomainDistribution p = Prior(3);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(Sample(p, a, false), Sample(p, b, false));
  }
}

TEST(KlTest, SelfIsZero) {
  const Gaussian p{Eigen::Vector2d(0.3, 1.0), Eigen::Vector2d(0.5, 2.0)};
  EXPECT_DOUBLE_EQ(KlGaussian(p, p), 0.0);
}

TEST(KlTest, UnitShift) {
  const Gaussian p{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
  const Gaussian q{Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)};
  EXPECT_NEAR(KlGaussian(p, q), 0.5, 1e-15);
}

TEST(KlTest, NonNegativeOnRandomPairs) {
  Rng rng(2);
  std::uniform_real_distribution<double> m(-3.0, 3.0), v(0.01, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const Gaussian p{Eigen::Vector3d(m(rng), m(rng), m(rng)),
                     Eigen::Vector3d(v(rng), v(rng), v(rng))};
    const Gaussian q{Eigen::Vector3d(m(rng), m(rng), m(rng)),
                     Eigen::Vector3d(v(rng), v(rng), v(rng))};
    EXPECT_GE(KlGaussian(p, q), 0.0);
  }
}

TEST(KlTest, RejectsNonPositiveVariance) {
  const Gaussian p{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
  const Gaussian q{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
  EXPECT_THROW(KlGaussian(p, q), std::invalid_argument);
}

TEST(DistributionTest, ValidateCatchesBadParameters) {
  EXPECT_THROW(
      DomainDistribution(Gaussian{Eigen::VectorXd::Zero(1),
                                  Eigen::VectorXd::Constant(1, -1.0)})
          .Validate(),
      std::invalid_argument);
  EXPECT_THROW(DomainDistribution(Uniform{Eigen::VectorXd::Constant(1, 3.0),
                                          Eigen::VectorXd::Constant(1, 1.0)})
                   .Validate(),
               std::invalid_argument);
}

TEST(DistributionTest, TextRoundTripIsExact) {
  const DomainDistribution g =
      Gaussian{Eigen::Vector2d(0.1, 2.0 / 3.0), Eigen::Vector2d(1e-17, 3.5)};
  const DomainDistribution u =
      Uniform{Eigen::Vector2d(0.0, 1.0 / 7.0), Eigen::Vector2d(4.0, 2.0)};
  EXPECT_EQ(DistributionFromString(ToString(g)), g);
  EXPECT_EQ(DistributionFromString(ToString(u)), u);
  EXPECT_THROW(DistributionFromString("gaussian mean=1"),
               std::invalid_argument);
}

TEST(SourceSpaceTest, FrozenDimensionsKeepBaseValue) {
  SourceSpace s;
  s.space = ParamSpace(Eigen::Vector2d(0.25, 0.5), Eigen::Vector2d(2.5, 5.0));
  s.free_indices = {0, 2};
  s.base = Eigen::Vector3d(1.0, 0.04, 2.0);
  const Eigen::VectorXd full = s.ToPhysical(Eigen::Vector2d(2.0, 4.0));
  EXPECT_DOUBLE_EQ(full[1], 0.04);
  EXPECT_DOUBLE_EQ(full[2], 5.0);
  EXPECT_EQ(s.ToNormalized(full), Eigen::Vector2d(2.0, 4.0));
}

}  // namespace
}  // namespace adr
