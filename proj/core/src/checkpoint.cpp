#include "pairlink/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "pairlink/error.hpp"

namespace pairlink {
namespace {

constexpr const char* kFormat = "pairlink-checkpoint";
constexpr int kVersion = 1;

void put_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

double get_le(const char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  nlohmann::json header;
  header["format"] = kFormat;
  header["version"] = kVersion;
  header["config_hash"] = ckpt.config_hash;
  header["node_tokens"] = ckpt.node_tokens;
  header["step_count"] = ckpt.store.step_count();
  try {
    header["metadata"] = nlohmann::json::parse(ckpt.metadata.empty() ? "{}" : ckpt.metadata);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint metadata is not JSON: ") + e.what());
  }

  std::string payload;
  payload.reserve(ckpt.store.num_values() * 8);
  auto params = nlohmann::json::array();
  for (const auto& [name, p] : ckpt.store) {
    params.push_back({{"name", name},
                      {"rows", p.value.rows()},
                      {"cols", p.value.cols()},
                      {"offset", payload.size()}});
    for (double v : p.value.data()) put_le(payload, v);
  }
  header["parameters"] = std::move(params);
  header["payload_bytes"] = payload.size();

  out << header.dump() << '\n';
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error("failed writing checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("checkpoint is empty or has no header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint header is not valid JSON: ") + e.what());
  }

  Checkpoint ckpt;
  std::size_t payload_bytes = 0;
  try {
    if (header.at("format").get<std::string>() != kFormat) throw FormatError("not a checkpoint file");
    if (header.at("version").get<int>() != kVersion) throw FormatError("unsupported checkpoint version");
    ckpt.config_hash = header.at("config_hash").get<std::string>();
    ckpt.node_tokens = header.at("node_tokens").get<std::vector<std::string>>();
    ckpt.metadata = header.at("metadata").dump();
    ckpt.store.set_step_count(header.at("step_count").get<std::uint64_t>());
    payload_bytes = header.at("payload_bytes").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint header is missing fields: ") + e.what());
  }

  std::string payload(payload_bytes, '\0');
  in.read(payload.data(), static_cast<std::streamsize>(payload_bytes));
  if (static_cast<std::size_t>(in.gcount()) != payload_bytes) {
    throw FormatError("checkpoint payload truncated: expected " + std::to_string(payload_bytes) +
                      " bytes, got " + std::to_string(in.gcount()));
  }

  try {
    for (const auto& entry : header.at("parameters")) {
      const auto rows = entry.at("rows").get<std::size_t>();
      const auto cols = entry.at("cols").get<std::size_t>();
      const auto offset = entry.at("offset").get<std::size_t>();
      if (offset + rows * cols * 8 > payload_bytes) {
        throw FormatError("parameter '" + entry.at("name").get<std::string>() +
                          "' extends past the payload");
      }
      Matrix m(rows, cols);
      auto data = m.data();
      for (std::size_t i = 0; i < data.size(); ++i) data[i] = get_le(payload.data() + offset + 8 * i);
      ckpt.store.add(entry.at("name").get<std::string>(), std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad parameter table: ") + e.what());
  }
  return ckpt;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_checkpoint(in);
}

Checkpoint load_checkpoint(const std::string& path, const std::string& expected_hash,
                           bool allow_mismatch) {
  Checkpoint ckpt = load_checkpoint(path);
  if (ckpt.config_hash != expected_hash && !allow_mismatch) {
    throw CompatibilityError("checkpoint '" + path + "' was written for architecture " +
                             ckpt.config_hash + ", current config is " + expected_hash);
  }
  return ckpt;
}

}  // namespace pairlink
