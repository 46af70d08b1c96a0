#include "uavage/neural/params.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <boost/crc.hpp>

namespace uavage::neural {

namespace {

constexpr char kMagic[8] = {'U', 'A', 'V', 'G', 'C', 'K', 'P', 'T'};

template <class T>
void put_le(std::string& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw CheckpointError("checkpoint truncated");
  unsigned char b[sizeof(T)];
  std::memcpy(b, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

std::uint32_t crc32(const char* data, std::size_t n) {
  boost::crc_32_type crc;
  crc.process_bytes(data, n);
  return crc.checksum();
}

}  // namespace

std::size_t total_size(const ParamBlocks& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.values.size();
  return n;
}

NetworkParams collect(const ParamBlocks& blocks) {
  NetworkParams p;
  for (const auto& b : blocks) {
    p.manifest.push_back({b.name, b.shape, p.values.size(), b.values.size()});
    p.values.insert(p.values.end(), b.values.begin(), b.values.end());
  }
  return p;
}

void apply(const NetworkParams& params, const ParamBlocks& blocks) {
  if (params.manifest.size() != blocks.size()) throw CheckpointError("parameter manifest has wrong block count");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& e = params.manifest[i];
    const auto& b = blocks[i];
    if (e.name != b.name || e.shape != b.shape || e.size != b.values.size())
      throw CheckpointError("parameter block '" + e.name + "' does not match model block '" + b.name + "'");
    if (e.offset + e.size > params.values.size()) throw CheckpointError("parameter block out of range");
    std::copy_n(params.values.begin() + static_cast<std::ptrdiff_t>(e.offset), e.size, b.values.begin());
  }
}

void save_checkpoint(const std::filesystem::path& path, const NetworkParams& params, const nlohmann::json& meta) {
  nlohmann::json header;
  header["version"] = params.version;
  header["meta"] = meta;
  auto& man = header["manifest"] = nlohmann::json::array();
  for (const auto& e : params.manifest)
    man.push_back({{"name", e.name}, {"shape", e.shape}, {"offset", e.offset}, {"size", e.size}});
  const std::string text = header.dump();

  std::string buf(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(NetworkParams::kVersion));
  put_le<std::uint64_t>(buf, text.size());
  buf += text;
  put_le<std::uint64_t>(buf, params.values.size());
  for (double v : params.values) put_le<double>(buf, v);
  put_le<std::uint32_t>(buf, crc32(buf.data(), buf.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw CheckpointError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof(kMagic) + 4 + 8 + 8 + 4 || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
    throw CheckpointError("not a checkpoint: " + path.string());
  std::size_t footer = buf.size() - 4;
  std::size_t pos = footer;
  const auto stored = get_le<std::uint32_t>(buf, pos);
  if (stored != crc32(buf.data(), footer)) throw CheckpointError("checkpoint CRC mismatch: " + path.string());

  pos = sizeof(kMagic);
  const auto version = get_le<std::uint32_t>(buf, pos);
  if (version != static_cast<std::uint32_t>(NetworkParams::kVersion))
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  const auto text_len = get_le<std::uint64_t>(buf, pos);
  if (pos + text_len > footer) throw CheckpointError("checkpoint header truncated");
  const auto header = nlohmann::json::parse(buf.substr(pos, text_len));
  pos += text_len;

  Checkpoint ck;
  ck.meta = header.value("meta", nlohmann::json::object());
  ck.params.version = header.at("version").get<int>();
  for (const auto& e : header.at("manifest"))
    ck.params.manifest.push_back({e.at("name").get<std::string>(), e.at("shape").get<std::vector<int>>(),
                                  e.at("offset").get<std::size_t>(), e.at("size").get<std::size_t>()});
  const auto count = get_le<std::uint64_t>(buf, pos);
  if (pos + count * 8 != footer) throw CheckpointError("checkpoint parameter section has wrong length");
  ck.params.values.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) ck.params.values.push_back(get_le<double>(buf, pos));
  return ck;
}

}  // namespace uavage::neural
