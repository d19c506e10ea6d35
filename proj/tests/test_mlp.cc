#include "jamlab/mlp.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "jamlab/rng.h"

namespace jamlab {
namespace {

TrainBatch make_batch(const MlpSpec& spec, int samples, std::uint64_t seed) {
  Rng rng(seed);
  TrainBatch batch;
  batch.inputs.resize(spec.layer_sizes.front(), samples);
  batch.targets.resize(spec.layer_sizes.back(), samples);
  batch.weights.resize(samples);
  for (int j = 0; j < samples; ++j) {
    for (int i = 0; i < batch.inputs.rows(); ++i) {
      batch.inputs(i, j) = 2.0 * rng.uniform() - 1.0;
    }
    for (int i = 0; i < batch.targets.rows(); ++i) {
      batch.targets(i, j) = rng.uniform();
    }
    if (spec.head == OutputHead::kSoftmax) {
      batch.targets.col(j) /= batch.targets.col(j).sum();
    }
    batch.weights(j) = 0.5 + 1.5 * rng.uniform();
  }
  return batch;
}

// Max relative error between the analytic gradient and central finite
// differences of the loss.
double gradcheck(Mlp& net, const TrainBatch& batch) {
  const std::vector<double> analytic = net.gradient(batch);
  std::vector<double> flat = net.parameters();
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double saved = flat[i];
    flat[i] = saved + h;
    net.set_parameters(flat);
    const double up = net.loss(batch);
    flat[i] = saved - h;
    net.set_parameters(flat);
    const double down = net.loss(batch);
    flat[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double scale = std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric));
    worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
  }
  net.set_parameters(flat);
  return worst;
}

TEST(Mlp, GradientCheckIdentityHead) {
  Mlp net(MlpSpec{{5, 8, 3}, OutputHead::kIdentity}, 3);
  const TrainBatch batch = make_batch(net.spec(), 4, 101);
  EXPECT_LT(gradcheck(net, batch), 1e-4);
}

TEST(Mlp, GradientCheckSoftmaxHead) {
  Mlp net(MlpSpec{{6, 10, 4}, OutputHead::kSoftmax}, 5);
  const TrainBatch batch = make_batch(net.spec(), 5, 102);
  EXPECT_LT(gradcheck(net, batch), 1e-4);
}

TEST(Mlp, GradientCheckTwoHiddenLayers) {
  Mlp net(MlpSpec{{3, 4, 4, 2}, OutputHead::kSoftmax}, 9);
  const TrainBatch batch = make_batch(net.spec(), 6, 103);
  EXPECT_LT(gradcheck(net, batch), 1e-4);
}

TEST(Mlp, OverfitsTinyDataset) {
  Mlp net(MlpSpec{{4, 16, 2}, OutputHead::kIdentity}, 7);
  AdamState state(net);
  const TrainBatch batch = make_batch(net.spec(), 8, 104);
  const double initial = net.loss(batch);
  for (int step = 0; step < 4000; ++step) {
    net.train_adam(batch, state, 0.01);
  }
  const double final_loss = net.loss(batch);
  EXPECT_LT(final_loss, 1e-6);
  EXPECT_LT(final_loss, initial);
}

TEST(Mlp, ZeroParametersSoftmaxIsExactlyUniform) {
  Mlp net(MlpSpec{{3, 4}, OutputHead::kSoftmax}, 1);
  net.set_parameters(std::vector<double>(net.num_parameters(), 0.0));
  const Eigen::VectorXd out = net.forward(Eigen::VectorXd::Constant(3, 0.7));
  ASSERT_EQ(out.size(), 4);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(out(i), 0.25);
}

TEST(Mlp, SoftmaxOutputsAreDistributions) {
  Mlp net(MlpSpec{{6, 8, 5}, OutputHead::kSoftmax}, 23);
  Rng rng(55);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd input(6);
    for (int i = 0; i < 6; ++i) input(i) = 4.0 * rng.uniform() - 2.0;
    const Eigen::VectorXd out = net.forward(input);
    double sum = 0.0;
    for (int i = 0; i < out.size(); ++i) {
      EXPECT_GT(out(i), 0.0);
      sum += out(i);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Mlp, ZeroLearningRateLeavesParametersBitExact) {
  Mlp net(MlpSpec{{4, 6, 2}, OutputHead::kIdentity}, 13);
  const TrainBatch batch = make_batch(net.spec(), 4, 105);
  const std::vector<double> before = net.parameters();
  net.train_sgd(batch, 0.0);
  const std::vector<double> after = net.parameters();
  ASSERT_EQ(before.size(), after.size());
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_EQ(before[i], after[i]);
}

TEST(Mlp, SingleLayerIdentityIsAffineInParameterOrder) {
  // Parameter layout: row-major weights, then biases.
  Mlp net(MlpSpec{{3, 2}, OutputHead::kIdentity}, 1);
  net.set_parameters({1.0, 2.0, 3.0,   // W row 0
                      4.0, 5.0, 6.0,   // W row 1
                      0.5, -1.0});     // b
  Eigen::VectorXd x(3);
  x << 1.0, 0.0, -2.0;
  const Eigen::VectorXd y = net.forward(x);
  EXPECT_DOUBLE_EQ(y(0), 1.0 * 1.0 + 2.0 * 0.0 + 3.0 * -2.0 + 0.5);
  EXPECT_DOUBLE_EQ(y(1), 4.0 * 1.0 + 5.0 * 0.0 + 6.0 * -2.0 - 1.0);
}

TEST(Mlp, ForwardIsPureAndBatchAgreesWithSingle) {
  Mlp net(MlpSpec{{5, 9, 3}, OutputHead::kSoftmax}, 31);
  const TrainBatch batch = make_batch(net.spec(), 6, 106);
  const Eigen::MatrixXd batched = net.forward_batch(batch.inputs);
  for (int j = 0; j < batch.inputs.cols(); ++j) {
    const Eigen::VectorXd single = net.forward(batch.inputs.col(j));
    const Eigen::VectorXd again = net.forward(batch.inputs.col(j));
    for (int i = 0; i < single.size(); ++i) {
      EXPECT_EQ(single(i), again(i));
      EXPECT_EQ(single(i), batched(i, j));
    }
  }
}

TEST(Mlp, SeedDeterminesInitialization) {
  const MlpSpec spec{{4, 7, 2}, OutputHead::kIdentity};
  Mlp a(spec, 42);
  Mlp b(spec, 42);
  Mlp c(spec, 43);
  const auto pa = a.parameters();
  const auto pb = b.parameters();
  const auto pc = c.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pa[i], pb[i]);
  bool any_diff = false;
  for (std::size_t i = 0; i < pa.size(); ++i) any_diff |= pa[i] != pc[i];
  EXPECT_TRUE(any_diff);
}

TEST(Mlp, CheckpointRoundTripIsBitExact) {
  Mlp net(MlpSpec{{5, 7, 3}, OutputHead::kSoftmax}, 17);
  const TrainBatch batch = make_batch(net.spec(), 4, 107);
  for (int step = 0; step < 25; ++step) net.train_sgd(batch, 0.01);

  const std::string path = testing::TempDir() + "/mlp_checkpoint.bin";
  net.save_file(path);
  const Mlp loaded = Mlp::load_file(path);
  std::remove(path.c_str());

  ASSERT_EQ(loaded.spec().layer_sizes, net.spec().layer_sizes);
  ASSERT_EQ(loaded.spec().head, net.spec().head);
  const auto original = net.parameters();
  const auto restored = loaded.parameters();
  ASSERT_EQ(original.size(), restored.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    EXPECT_EQ(original[i], restored[i]);
  }
  const Eigen::VectorXd input = batch.inputs.col(0);
  const Eigen::VectorXd a = net.forward(input);
  const Eigen::VectorXd b = loaded.forward(input);
  for (int i = 0; i < a.size(); ++i) EXPECT_EQ(a(i), b(i));
}

TEST(Mlp, AdamDescendsAndTracksSteps) {
  Mlp net(MlpSpec{{4, 8, 1}, OutputHead::kIdentity}, 19);
  AdamState state(net);
  const TrainBatch batch = make_batch(net.spec(), 8, 108);
  const double initial = net.loss(batch);
  for (int step = 0; step < 200; ++step) net.train_adam(batch, state, 0.01);
  EXPECT_LT(net.loss(batch), initial);
  EXPECT_EQ(state.step, 200);
}

TEST(Mlp, ValidationThrows) {
  EXPECT_THROW(Mlp(MlpSpec{{4}, OutputHead::kIdentity}, 1), std::invalid_argument);
  EXPECT_THROW(Mlp(MlpSpec{{4, 0, 2}, OutputHead::kIdentity}, 1), std::invalid_argument);

  Mlp net(MlpSpec{{3, 2}, OutputHead::kIdentity}, 1);
  EXPECT_THROW(net.forward(Eigen::VectorXd::Zero(4)), std::invalid_argument);
  EXPECT_THROW(net.set_parameters({1.0, 2.0}), std::invalid_argument);

  TrainBatch bad = make_batch(net.spec(), 3, 109);
  bad.targets.resize(5, 3);
  EXPECT_THROW(net.loss(bad), std::invalid_argument);

  TrainBatch bad_weights = make_batch(net.spec(), 3, 110);
  bad_weights.weights.resize(2);
  EXPECT_THROW(net.loss(bad_weights), std::invalid_argument);

  TrainBatch zero_weights = make_batch(net.spec(), 3, 111);
  zero_weights.weights.setZero();
  EXPECT_THROW(net.loss(zero_weights), std::invalid_argument);

  Mlp other(MlpSpec{{3, 4, 2}, OutputHead::kIdentity}, 2);
  AdamState state(other);
  TrainBatch batch = make_batch(net.spec(), 3, 112);
  EXPECT_THROW(net.train_adam(batch, state, 0.01), std::invalid_argument);

  const std::string path = testing::TempDir() + "/mlp_corrupt.bin";
  std::ofstream(path, std::ios::binary) << "not a checkpoint";
  EXPECT_THROW(Mlp::load_file(path), std::runtime_error);
  std::remove(path.c_str());
}

}  // namespace
}  // namespace jamlab
