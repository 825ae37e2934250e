// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "css/pit.h"
#include "css/rng.h"
#include "test_util.h"

using namespace css;

namespace {

MagPair RandomMags(int frames, int bins, uint64_t seed) {
  Rng rng(seed);
  MagPair p = MagPair::Zeros(frames, bins);
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < frames; ++t) {
      for (int f = 0; f < bins; ++f) p.At(c, t, f) = rng.Uniform(0.0, 2.0);
    }
  }
  return p;
}

// Naive double-loop recomputation of one cost entry.
double NaiveCost(const MagPair& ref, const MagPair& est, int n, int m) {
  double sum = 0.0;
  for (int t = 0; t < ref.frames; ++t) {
    for (int f = 0; f < ref.bins; ++f) {
      const double d = ref.At(n, t, f) - est.At(m, t, f);
      sum += d * d;
    }
  }
  return sum / (static_cast<double>(ref.frames) * ref.bins);
}

}  // namespace

TEST_CASE("pairwise L2 diagonal and anti-diagonal zeros") {
  const ChannelPair ref = test::RandomPair(5, 1);
  const auto diag = PairwiseL2(ref, ref);
  CHECK(diag[0][0] == 0.0);
  CHECK(diag[1][1] == 0.0);
  const auto anti = PairwiseL2(ref, ref.Swapped());
  CHECK(anti[0][1] == 0.0);
  CHECK(anti[1][0] == 0.0);
}

TEST_CASE("pairwise L2 matches the naive oracle") {
  const MagPair ref = RandomMags(7, 9, 2);
  const MagPair est = RandomMags(7, 9, 3);
  const auto cost = PairwiseL2(ref, est);
  for (int n = 0; n < 2; ++n) {
    for (int m = 0; m < 2; ++m) {
      CHECK(std::abs(cost[n][m] - NaiveCost(ref, est, n, m)) < 1e-12);
    }
  }
}

TEST_CASE("geometry mismatch is an error") {
  const ChannelPair a = test::RandomPair(5, 4);
  const ChannelPair b = test::RandomPair(6, 5);
  CHECK_THROWS_AS(PairwiseL2(a, b), std::runtime_error);
  CHECK_THROWS_AS(GroupPitLoss(a, b), std::runtime_error);
}

TEST_CASE("loss against references and swapped references") {
  const ChannelPair ref = test::RandomPair(6, 6);
  const PitResult id = GroupPitLoss(ref, ref);
  CHECK(id.loss == 0.0);
  CHECK_FALSE(id.swapped);
  const PitResult sw = GroupPitLoss(ref, ref.Swapped());
  CHECK(sw.loss == 0.0);
  CHECK(sw.swapped);
}

TEST_CASE("brute force equality on 200 random instances") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const MagPair ref = RandomMags(4, 8, seed * 2 + 1);
    const MagPair est = RandomMags(4, 8, seed * 2 + 2);
    const double keep = NaiveCost(ref, est, 0, 0) + NaiveCost(ref, est, 1, 1);
    const double swap = NaiveCost(ref, est, 0, 1) + NaiveCost(ref, est, 1, 0);
    const PitResult r = GroupPitLoss(ref, est);
    CHECK(std::abs(r.loss - std::min(keep, swap)) < 1e-12);
    CHECK(r.swapped == (swap < keep));
    CHECK(r.loss <= keep + 1e-15);
    CHECK(r.loss <= swap + 1e-15);
  }
}

TEST_CASE("tie resolves to identity") {
  MagPair ref = MagPair::Zeros(2, 3);
  MagPair est = RandomMags(2, 3, 10);
  // Symmetric references make both permutations cost the same.
  const PitResult r = GroupPitLoss(ref, est);
  CHECK_FALSE(r.swapped);
}

TEST_CASE("reference relabeling invariance") {
  for (uint64_t seed = 20; seed < 30; ++seed) {
    const ChannelPair ref = test::RandomPair(5, seed);
    const ChannelPair est = test::RandomPair(5, seed + 1000);
    const PitResult a = GroupPitLoss(ref, est);
    const PitResult b = GroupPitLoss(ref.Swapped(), est);
    CHECK(a.loss == doctest::Approx(b.loss).epsilon(1e-15));
    CHECK(a.swapped == !b.swapped);
  }
}

TEST_CASE("gradient is zero at est = ref") {
  const MagPair ref = RandomMags(4, 5, 40);
  const MagPair grad = GradGroupPit(ref, ref);
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 4; ++t) {
      for (int f = 0; f < 5; ++f) CHECK(grad.At(c, t, f) == 0.0);
    }
  }
}

TEST_CASE("gradient matches central finite differences") {
  const MagPair ref = RandomMags(3, 4, 50);
  MagPair est = RandomMags(3, 4, 51);
  const MagPair grad = GradGroupPit(ref, est);
  const double h = 1e-6;
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 3; ++t) {
      for (int f = 0; f < 4; ++f) {
        const double save = est.At(c, t, f);
        est.At(c, t, f) = save + h;
        const double up = GroupPitLoss(ref, est).loss;
        est.At(c, t, f) = save - h;
        const double down = GroupPitLoss(ref, est).loss;
        est.At(c, t, f) = save;
        const double fd = (up - down) / (2.0 * h);
        const double scale = std::max({1.0, std::abs(fd), std::abs(grad.At(c, t, f))});
        CHECK(std::abs(grad.At(c, t, f) - fd) / scale < 1e-4);
      }
    }
  }
}

TEST_CASE("gradient is permutation covariant") {
  const MagPair ref = RandomMags(3, 4, 60);
  MagPair est = RandomMags(3, 4, 61);
  const MagPair grad = GradGroupPit(ref, est);
  MagPair est_sw = est;
  std::swap(est_sw.ch[0], est_sw.ch[1]);
  const MagPair grad_sw = GradGroupPit(ref, est_sw);
  for (int t = 0; t < 3; ++t) {
    for (int f = 0; f < 4; ++f) {
      CHECK(grad.At(0, t, f) == doctest::Approx(grad_sw.At(1, t, f)).epsilon(1e-15));
      CHECK(grad.At(1, t, f) == doctest::Approx(grad_sw.At(0, t, f)).epsilon(1e-15));
    }
  }
}
