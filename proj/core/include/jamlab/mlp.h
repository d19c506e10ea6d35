#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace jamlab {

enum class OutputHead : std::uint8_t { kIdentity = 0, kSoftmax = 1 };

struct MlpSpec {
  std::vector<int> layer_sizes;  // input, hidden..., output
  OutputHead head = OutputHead::kIdentity;
};

// One training batch, one column per sample. For the identity head, targets
// are regression values (squared-error loss); for the softmax head, targets
// are soft label distributions (cross-entropy loss). Per-sample weights are
// normalized inside the loss so only their relative sizes matter.
struct TrainBatch {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd targets;
  Eigen::VectorXd weights;
};

struct AdamState;

// Small fully connected net: ReLU hidden layers plus an identity or softmax
// head, double precision throughout. Backprop is hand-rolled; Eigen only
// supplies the matrix arithmetic.
class Mlp {
 public:
  Mlp(MlpSpec spec, std::uint64_t seed);  // fan-in-scaled uniform init

  const MlpSpec& spec() const { return spec_; }
  int input_size() const { return spec_.layer_sizes.front(); }
  int output_size() const { return spec_.layer_sizes.back(); }

  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

  // Weighted mean loss over the batch.
  double loss(const TrainBatch& batch) const;
  // One SGD step; returns the pre-step loss.
  double train_sgd(const TrainBatch& batch, double learning_rate);
  // One Adam step; state must have been created for this net.
  double train_adam(const TrainBatch& batch, AdamState& state, double learning_rate);

  // Flat parameter order: per layer, row-major weights then biases. Used by
  // checkpoints and the finite-difference gradient test.
  std::size_t num_parameters() const;
  std::vector<double> parameters() const;
  void set_parameters(const std::vector<double>& flat);
  std::vector<double> gradient(const TrainBatch& batch) const;

  // Binary checkpoint, bit-exact round trip.
  void save(std::ostream& out) const;
  static Mlp load(std::istream& in);
  void save_file(const std::string& path) const;
  static Mlp load_file(const std::string& path);

 private:
  Mlp() = default;
  struct Tape;
  Eigen::MatrixXd run_forward(const Eigen::MatrixXd& inputs, Tape* tape) const;
  void backward(const TrainBatch& batch, const Tape& tape,
                std::vector<Eigen::MatrixXd>& grad_w,
                std::vector<Eigen::VectorXd>& grad_b, double* loss_out) const;

  MlpSpec spec_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

struct AdamState {
  explicit AdamState(const Mlp& net);
  std::vector<Eigen::MatrixXd> m_w, v_w;
  std::vector<Eigen::VectorXd> m_b, v_b;
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

}  // namespace jamlab
