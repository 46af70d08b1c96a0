#pragma once

#include <cstddef>
#include <mutex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace uavage::agents {

struct Experience {
  Eigen::VectorXd state;
  int action = 0;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool terminal = false;
};

/// Fixed-capacity ring buffer; the oldest entry is overwritten once full.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void push(Experience e);  // serialized; safe from several producer threads
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Experience& at(std::size_t i) const { return items_.at(i); }

  /// min(b, size) distinct stored entries, uniformly at random.
  std::vector<const Experience*> sample(std::size_t b, std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Experience> items_;
  std::mutex mu_;
};

}  // namespace uavage::agents
