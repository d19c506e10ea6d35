#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "jamlab/rng.h"

namespace jamlab {

// Algorithm-R reservoir: after n adds each item was kept with probability
// capacity/n, uniformly over the stream.
template <typename T>
class ReservoirBuffer {
 public:
  explicit ReservoirBuffer(std::size_t capacity) : capacity_(capacity) {}

  void add(T item, Rng& rng) {
    ++seen_;
    if (capacity_ == 0) return;
    if (items_.size() < capacity_) {
      items_.push_back(std::move(item));
      return;
    }
    const std::size_t j =
        static_cast<std::size_t>(rng.uniform() * static_cast<double>(seen_));
    if (j < capacity_) items_[j] = std::move(item);
  }

  const std::vector<T>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t seen() const { return seen_; }
  void clear() {
    items_.clear();
    seen_ = 0;
  }

 private:
  std::size_t capacity_;
  std::size_t seen_ = 0;
  std::vector<T> items_;
};

// Uniform with-replacement draw of n items, reproducible per seed.
template <typename T>
std::vector<T> sample_batch(const ReservoirBuffer<T>& buffer, std::size_t n,
                            std::uint64_t seed) {
  if (buffer.size() == 0) throw std::invalid_argument("sample_batch from empty buffer");
  Rng rng(seed);
  std::vector<T> batch;
  batch.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    batch.push_back(
        buffer.items()[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(buffer.size())))]);
  }
  return batch;
}

// Fixed-size overwrite-oldest buffer with uniform with-replacement sampling.
template <typename T>
class RingReplay {
 public:
  explicit RingReplay(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("capacity must be positive");
  }

  void push(T item) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(item));
    } else {
      items_[next_] = std::move(item);
    }
    next_ = (next_ + 1) % capacity_;
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<T>& items() const { return items_; }

  const T& sample(Rng& rng) const {
    if (items_.empty()) throw std::logic_error("sampling an empty replay buffer");
    return items_[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(items_.size())))];
  }

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<T> items_;
};

}  // namespace jamlab
