#include "uavage/agents/replay.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace uavage::agents {

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayMemory: capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayMemory::push(Experience e) {
  std::lock_guard lock(mu_);
  if (items_.size() < capacity_) {
    items_.push_back(std::move(e));
  } else {
    items_[next_] = std::move(e);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<const Experience*> ReplayMemory::sample(std::size_t b, std::mt19937_64& rng) const {
  const std::size_t n = items_.size();
  const std::size_t k = std::min(b, n);
  // Partial Fisher-Yates over the index range.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<const Experience*> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
    out.push_back(&items_[idx[i]]);
  }
  return out;
}

}  // namespace uavage::agents
