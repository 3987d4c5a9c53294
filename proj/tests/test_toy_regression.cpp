#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "fer/layers.hpp"

using namespace fer;

TEST_CASE("arm names round trip") {
  for (ToyArm a : {ToyArm::kDim3, ToyArm::kDim3Repeat, ToyArm::kDim35LowFreq,
                   ToyArm::kDim35MaxFreq, ToyArm::kDim357MaxFreq}) {
    ToyArm back;
    REQUIRE(toy_arm_from_name(toy_arm_name(a), &back));
    CHECK(back == a);
  }
  ToyArm ignored;
  CHECK(!toy_arm_from_name("dim42", &ignored));
}

TEST_CASE("target radius is positive and band-limited by construction") {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    Vec3 u(rng.normal(), rng.normal(), rng.normal());
    u.normalize();
    const double r = toy_target_radius(u);
    CHECK(r > 0.0);
    CHECK(r < 3.0);
  }
}

TEST_CASE("training is deterministic per seed") {
  const ToyGenerators gens = ToyGenerators::build(99);
  ToyRegressionConfig cfg;
  cfg.arm = ToyArm::kDim35MaxFreq;
  cfg.seed = 4;
  const ToyRegressionResult a = toy_regression_train(cfg, gens);
  const ToyRegressionResult b = toy_regression_train(cfg, gens);
  CHECK(a.final_mse == b.final_mse);
  REQUIRE(a.loss_trace.size() == b.loss_trace.size());
  CHECK(a.loss_trace.back() == b.loss_trace.back());
}

TEST_CASE("frequency ordering across five seeds") {
  const ToyGenerators gens = ToyGenerators::build(99);

  int max_beats_low = 0, seven_beats_five = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::map<ToyArm, double> mse;
    for (ToyArm arm : {ToyArm::kDim3, ToyArm::kDim3Repeat, ToyArm::kDim35LowFreq,
                       ToyArm::kDim35MaxFreq, ToyArm::kDim357MaxFreq}) {
      ToyRegressionConfig cfg;
      cfg.arm = arm;
      cfg.seed = seed;
      mse[arm] = toy_regression_train(cfg, gens).final_mse;
    }

    // duplicating the 3D input buys nothing: same MSE within 10%
    CHECK(std::abs(mse[ToyArm::kDim3Repeat] - mse[ToyArm::kDim3]) <=
          0.1 * mse[ToyArm::kDim3]);

    if (mse[ToyArm::kDim35MaxFreq] < mse[ToyArm::kDim35LowFreq]) ++max_beats_low;
    if (mse[ToyArm::kDim357MaxFreq] <= mse[ToyArm::kDim35MaxFreq]) ++seven_beats_five;
  }
  CHECK(max_beats_low >= 4);
  CHECK(seven_beats_five >= 4);
}

TEST_CASE("divergent learning rate raises with a trace attached") {
  const ToyGenerators gens = ToyGenerators::build(99);
  ToyRegressionConfig cfg;
  cfg.arm = ToyArm::kDim3;
  cfg.learning_rate = 1e6;  // way past stability for the quadratic
  cfg.seed = 1;
  CHECK_THROWS_AS(toy_regression_train(cfg, gens), std::runtime_error);
}
