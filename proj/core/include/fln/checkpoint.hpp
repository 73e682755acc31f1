#pragma once

#include <string>

#include "fln/network.hpp"

namespace fln {

/// Serializes the network to a versioned JSON checkpoint.
///
/// Every floating-point value is written as a hex-float string (printf
/// "%a"), so load(save(net)) reproduces all parameters bit-exactly and a
/// rerun with identical inputs produces a byte-identical file. When
/// config_json (a serialized JSON object) is non-empty it is embedded
/// verbatim under the "config" key so a checkpoint records the effective
/// settings that produced it. The write is atomic.
void save(const FeatureLevelNet& net, const std::string& path,
          const std::string& config_json = "");

/// Loads and validates a checkpoint. Throws IoError (missing file),
/// ParseError (malformed JSON or number), or ValidationError (wrong
/// version or inconsistent dimensions, naming the offending layer).
/// When config_json_out is non-null it receives the embedded config
/// object text ("" if the checkpoint has none).
FeatureLevelNet load(const std::string& path, std::string* config_json_out = nullptr);

/// Hex-float helpers shared by the checkpoint and report writers.
std::string double_to_hex(double v);
double hex_to_double(const std::string& s); // throws ParseError

} // namespace fln
