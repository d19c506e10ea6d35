#include "jamlab/mlp.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "jamlab/rng.h"

namespace jamlab {
namespace {

void check_spec(const MlpSpec& spec) {
  if (spec.layer_sizes.size() < 2) {
    throw std::invalid_argument("mlp needs at least input and output sizes");
  }
  for (int size : spec.layer_sizes) {
    if (size <= 0) throw std::invalid_argument("mlp layer sizes must be positive");
  }
}

}  // namespace

struct Mlp::Tape {
  std::vector<Eigen::MatrixXd> activations;  // activations[0] is the input
  std::vector<Eigen::MatrixXd> pre;          // pre[l] feeds layer l's output
};

Mlp::Mlp(MlpSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
  check_spec(spec_);
  Rng rng(seed);
  const std::size_t num_layers = spec_.layer_sizes.size() - 1;
  weights_.reserve(num_layers);
  biases_.reserve(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) {
    const int fan_in = spec_.layer_sizes[l];
    const int fan_out = spec_.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / fan_in);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        w(r, c) = (2.0 * rng.uniform() - 1.0) * limit;
      }
    }
    weights_.push_back(std::move(w));
    biases_.emplace_back(Eigen::VectorXd::Zero(fan_out));
  }
}

Eigen::MatrixXd Mlp::run_forward(const Eigen::MatrixXd& inputs, Tape* tape) const {
  if (inputs.rows() != input_size()) {
    throw std::invalid_argument("mlp input has wrong row count");
  }
  Eigen::MatrixXd act = inputs;
  if (tape != nullptr) tape->activations.push_back(act);
  const std::size_t last = weights_.size() - 1;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = weights_[l] * act;
    z.colwise() += biases_[l];
    if (tape != nullptr) tape->pre.push_back(z);
    if (l < last) {
      act = z.cwiseMax(0.0);
    } else if (spec_.head == OutputHead::kSoftmax) {
      act.resize(z.rows(), z.cols());
      for (Eigen::Index col = 0; col < z.cols(); ++col) {
        const double zmax = z.col(col).maxCoeff();
        Eigen::VectorXd e = (z.col(col).array() - zmax).exp();
        act.col(col) = e / e.sum();
      }
    } else {
      act = std::move(z);
    }
    if (tape != nullptr) tape->activations.push_back(act);
  }
  return act;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input) const {
  return run_forward(input, nullptr).col(0);
}

Eigen::MatrixXd Mlp::forward_batch(const Eigen::MatrixXd& inputs) const {
  return run_forward(inputs, nullptr);
}

void Mlp::backward(const TrainBatch& batch, const Tape& tape,
                   std::vector<Eigen::MatrixXd>& grad_w,
                   std::vector<Eigen::VectorXd>& grad_b, double* loss_out) const {
  const Eigen::Index n = batch.inputs.cols();
  if (batch.targets.cols() != n || batch.targets.rows() != output_size()) {
    throw std::invalid_argument("mlp batch targets have wrong shape");
  }
  if (batch.weights.size() != 0 && batch.weights.size() != n) {
    throw std::invalid_argument("mlp batch weights have wrong length");
  }
  Eigen::VectorXd w = batch.weights.size() == 0
                          ? Eigen::VectorXd::Ones(n)
                          : batch.weights;
  const double wsum = w.sum();
  if (!(wsum > 0.0)) throw std::invalid_argument("mlp batch weights must sum > 0");
  w /= wsum;

  const Eigen::MatrixXd& out = tape.activations.back();
  double loss = 0.0;
  Eigen::MatrixXd dz(out.rows(), out.cols());
  if (spec_.head == OutputHead::kSoftmax) {
    const Eigen::MatrixXd& z = tape.pre.back();
    for (Eigen::Index col = 0; col < n; ++col) {
      const double zmax = z.col(col).maxCoeff();
      const double lse = zmax + std::log((z.col(col).array() - zmax).exp().sum());
      const Eigen::ArrayXd logp = z.col(col).array() - lse;
      loss += w(col) * (-(batch.targets.col(col).array() * logp).sum());
      dz.col(col) = w(col) * (out.col(col) - batch.targets.col(col));
    }
  } else {
    for (Eigen::Index col = 0; col < n; ++col) {
      const Eigen::VectorXd diff = out.col(col) - batch.targets.col(col);
      loss += w(col) * diff.squaredNorm();
      dz.col(col) = 2.0 * w(col) * diff;
    }
  }

  grad_w.resize(weights_.size());
  grad_b.resize(biases_.size());
  for (std::size_t l = weights_.size(); l-- > 0;) {
    grad_w[l] = dz * tape.activations[l].transpose();
    grad_b[l] = dz.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd da = weights_[l].transpose() * dz;
      dz = da.cwiseProduct(
          (tape.pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  if (loss_out != nullptr) *loss_out = loss;
}

double Mlp::loss(const TrainBatch& batch) const {
  Tape tape;
  run_forward(batch.inputs, &tape);
  std::vector<Eigen::MatrixXd> gw;
  std::vector<Eigen::VectorXd> gb;
  double value = 0.0;
  backward(batch, tape, gw, gb, &value);
  return value;
}

double Mlp::train_sgd(const TrainBatch& batch, double learning_rate) {
  Tape tape;
  run_forward(batch.inputs, &tape);
  std::vector<Eigen::MatrixXd> gw;
  std::vector<Eigen::VectorXd> gb;
  double value = 0.0;
  backward(batch, tape, gw, gb, &value);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l] -= learning_rate * gw[l];
    biases_[l] -= learning_rate * gb[l];
  }
  return value;
}

AdamState::AdamState(const Mlp& net) {
  const auto& sizes = net.spec().layer_sizes;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    m_w.emplace_back(Eigen::MatrixXd::Zero(sizes[l + 1], sizes[l]));
    v_w.emplace_back(Eigen::MatrixXd::Zero(sizes[l + 1], sizes[l]));
    m_b.emplace_back(Eigen::VectorXd::Zero(sizes[l + 1]));
    v_b.emplace_back(Eigen::VectorXd::Zero(sizes[l + 1]));
  }
}

double Mlp::train_adam(const TrainBatch& batch, AdamState& state, double learning_rate) {
  if (state.m_w.size() != weights_.size()) {
    throw std::invalid_argument("adam state does not match this net");
  }
  Tape tape;
  run_forward(batch.inputs, &tape);
  std::vector<Eigen::MatrixXd> gw;
  std::vector<Eigen::VectorXd> gb;
  double value = 0.0;
  backward(batch, tape, gw, gb, &value);
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    state.m_w[l] = state.beta1 * state.m_w[l] + (1.0 - state.beta1) * gw[l];
    state.v_w[l] = state.beta2 * state.v_w[l] + (1.0 - state.beta2) * gw[l].cwiseProduct(gw[l]);
    state.m_b[l] = state.beta1 * state.m_b[l] + (1.0 - state.beta1) * gb[l];
    state.v_b[l] = state.beta2 * state.v_b[l] + (1.0 - state.beta2) * gb[l].cwiseProduct(gb[l]);
    weights_[l] -= learning_rate *
                   ((state.m_w[l] / bc1).array() /
                    ((state.v_w[l] / bc2).array().sqrt() + state.eps))
                       .matrix();
    biases_[l] -= learning_rate *
                  ((state.m_b[l] / bc1).array() /
                   ((state.v_b[l] / bc2).array().sqrt() + state.eps))
                      .matrix();
  }
  return value;
}

std::size_t Mlp::num_parameters() const {
  std::size_t total = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    total += static_cast<std::size_t>(weights_[l].size()) +
             static_cast<std::size_t>(biases_[l].size());
  }
  return total;
}

std::vector<double> Mlp::parameters() const {
  std::vector<double> flat;
  flat.reserve(num_parameters());
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) {
        flat.push_back(weights_[l](r, c));
      }
    }
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) {
      flat.push_back(biases_[l](r));
    }
  }
  return flat;
}

void Mlp::set_parameters(const std::vector<double>& flat) {
  if (flat.size() != num_parameters()) {
    throw std::invalid_argument("parameter vector has wrong length");
  }
  std::size_t i = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) {
        weights_[l](r, c) = flat[i++];
      }
    }
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) {
      biases_[l](r) = flat[i++];
    }
  }
}

std::vector<double> Mlp::gradient(const TrainBatch& batch) const {
  Tape tape;
  run_forward(batch.inputs, &tape);
  std::vector<Eigen::MatrixXd> gw;
  std::vector<Eigen::VectorXd> gb;
  backward(batch, tape, gw, gb, nullptr);
  std::vector<double> flat;
  flat.reserve(num_parameters());
  for (std::size_t l = 0; l < gw.size(); ++l) {
    for (Eigen::Index r = 0; r < gw[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < gw[l].cols(); ++c) {
        flat.push_back(gw[l](r, c));
      }
    }
    for (Eigen::Index r = 0; r < gb[l].size(); ++r) {
      flat.push_back(gb[l](r));
    }
  }
  return flat;
}

namespace {

constexpr char kMagic[6] = {'J', 'L', 'N', 'E', 'T', '1'};

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("truncated network checkpoint");
  return value;
}

}  // namespace

void Mlp::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(spec_.layer_sizes.size()));
  for (int size : spec_.layer_sizes) {
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(size));
  }
  write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(spec_.head));
  const std::vector<double> flat = parameters();
  out.write(reinterpret_cast<const char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
  if (!out) throw std::runtime_error("failed to write network checkpoint");
}

Mlp Mlp::load(std::istream& in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a network checkpoint");
  }
  const auto num_sizes = read_pod<std::uint32_t>(in);
  if (num_sizes < 2 || num_sizes > 64) {
    throw std::runtime_error("corrupt network checkpoint");
  }
  MlpSpec spec;
  for (std::uint32_t i = 0; i < num_sizes; ++i) {
    spec.layer_sizes.push_back(static_cast<int>(read_pod<std::uint32_t>(in)));
  }
  const auto head = read_pod<std::uint8_t>(in);
  if (head > 1) throw std::runtime_error("corrupt network checkpoint");
  spec.head = static_cast<OutputHead>(head);
  Mlp net(spec, 0);
  std::vector<double> flat(net.num_parameters());
  in.read(reinterpret_cast<char*>(flat.data()),
          static_cast<std::streamsize>(flat.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated network checkpoint");
  net.set_parameters(flat);
  return net;
}

void Mlp::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save(out);
}

Mlp Mlp::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load(in);
}

}  // namespace jamlab
