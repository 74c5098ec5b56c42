#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "imvc/errors.hpp"
#include "imvc/model/params.hpp"

// Layout: "IMVCCKPT", u32 version, u64 header length, JSON header, then per
// tensor: u32 name length, name bytes, u64 rows, u64 cols, rows*cols doubles.
// Integers and doubles are stored in host byte order.

namespace imvc::model {

inline constexpr char kCheckpointMagic[8] = {'I', 'M', 'V', 'C', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T take(std::istream& in, const std::string& what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw CheckpointError("checkpoint truncated while reading " + what);
  return v;
}

inline std::string take_bytes(std::istream& in, std::uint64_t len, const std::string& what) {
  if (len > (1ULL << 32)) throw CheckpointError("checkpoint: implausible length for " + what);
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (!in) throw CheckpointError("checkpoint truncated while reading " + what);
  return s;
}

}  // namespace detail

inline void save_checkpoint(const std::filesystem::path& file, const nlohmann::json& header,
                            const ModelParams& params) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint " + file.string());
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  detail::put(out, kCheckpointVersion);
  const std::string h = header.dump();
  detail::put(out, static_cast<std::uint64_t>(h.size()));
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  const auto tensors = params.all();
  detail::put(out, static_cast<std::uint64_t>(tensors.size()));
  for (const Parameter* p : tensors) {
    detail::put(out, static_cast<std::uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    detail::put(out, static_cast<std::uint64_t>(p->value.rows()));
    detail::put(out, static_cast<std::uint64_t>(p->value.cols()));
    out.write(reinterpret_cast<const char*>(p->value.values().data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  }
  if (!out) throw CheckpointError("failed writing checkpoint " + file.string());
}

struct StoredTensor {
  std::string name;
  Matrix value;
};

struct Checkpoint {
  nlohmann::json header;
  std::vector<StoredTensor> tensors;
};

inline Checkpoint read_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + file.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0)
    throw CheckpointError(file.string() + " is not a checkpoint (bad magic)");
  const auto version = detail::take<std::uint32_t>(in, "version");
  if (version != kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ck;
  try {
    ck.header = nlohmann::json::parse(detail::take_bytes(in, detail::take<std::uint64_t>(in, "header"), "header"));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  const auto count = detail::take<std::uint64_t>(in, "tensor count");
  if (count > (1U << 20)) throw CheckpointError("checkpoint: implausible tensor count");
  for (std::uint64_t k = 0; k < count; ++k) {
    StoredTensor t;
    t.name = detail::take_bytes(in, detail::take<std::uint32_t>(in, "name length"), "name");
    const auto rows = detail::take<std::uint64_t>(in, t.name + " rows");
    const auto cols = detail::take<std::uint64_t>(in, t.name + " cols");
    if (rows > (1U << 24) || cols > (1U << 24)) throw CheckpointError("checkpoint: implausible shape for " + t.name);
    t.value = Matrix(rows, cols);
    in.read(reinterpret_cast<char*>(t.value.values().data()),
            static_cast<std::streamsize>(t.value.size() * sizeof(double)));
    if (!in) throw CheckpointError("checkpoint truncated in tensor " + t.name);
    ck.tensors.push_back(std::move(t));
  }
  return ck;
}

/// Copies stored tensors into `target`, which fixes the expected names and
/// shapes. A classifier output mismatch names the cluster counts.
inline void restore_params(const std::vector<StoredTensor>& tensors, ModelParams& target) {
  const auto slots = target.all();
  if (tensors.size() != slots.size())
    throw CheckpointError("checkpoint holds " + std::to_string(tensors.size()) + " tensors, model needs " +
                          std::to_string(slots.size()));
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const StoredTensor& t = tensors[k];
    Parameter& slot = *slots[k];
    if (t.name != slot.name) throw CheckpointError("checkpoint tensor " + t.name + " where " + slot.name + " expected");
    if (!t.value.same_shape(slot.value)) {
      if (&slot == &target.cls_w1 || &slot == &target.cls_b1)
        throw CheckpointError(t.name + ": expected C=" + std::to_string(slot.value.cols()) + ", found C=" +
                              std::to_string(t.value.cols()));
      throw CheckpointError(t.name + ": expected " + slot.value.shape() + ", found " + t.value.shape());
    }
    slot.value = t.value;
  }
}

}  // namespace imvc::model
