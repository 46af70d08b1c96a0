#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace uavage::neural {

/// Named view into a model's parameter storage.
struct ParamBlock {
  std::string name;
  std::vector<int> shape;
  std::span<double> values;
};

using ParamBlocks = std::vector<ParamBlock>;

/// Flat copy of a model's parameters plus the shape manifest needed to restore them.
struct NetworkParams {
  static constexpr int kVersion = 1;

  struct Entry {
    std::string name;
    std::vector<int> shape;
    std::size_t offset = 0;
    std::size_t size = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::vector<Entry> manifest;
  std::vector<double> values;
  int version = kVersion;

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

NetworkParams collect(const ParamBlocks& blocks);
/// Copies values back; names and shapes must match.
void apply(const NetworkParams& params, const ParamBlocks& blocks);
std::size_t total_size(const ParamBlocks& blocks);

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary checkpoint: magic, format version, JSON header (manifest + caller metadata),
/// little-endian float64 parameters, CRC-32 of everything before the footer.
void save_checkpoint(const std::filesystem::path& path, const NetworkParams& params, const nlohmann::json& meta);

struct Checkpoint {
  NetworkParams params;
  nlohmann::json meta;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace uavage::neural
