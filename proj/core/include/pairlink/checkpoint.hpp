#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pairlink/parameters.hpp"

namespace pairlink {

// On-disk layout: one line of compact JSON (the header), then the payload of
// raw little-endian IEEE-754 doubles. The header lists every parameter's
// name, shape and byte offset into the payload, the payload size, the
// architecture hash, the node token map and a free-form metadata object.
struct Checkpoint {
  ParameterStore store;
  std::string config_hash;
  std::vector<std::string> node_tokens;
  /// JSON object text; "{}" when empty.
  std::string metadata = "{}";
};

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
/// Throws FormatError on a truncated or malformed stream.
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

/// As load_checkpoint, then CompatibilityError when the stored hash differs
/// from `expected_hash` unless `allow_mismatch`.
Checkpoint load_checkpoint(const std::string& path, const std::string& expected_hash,
                           bool allow_mismatch = false);

}  // namespace pairlink
