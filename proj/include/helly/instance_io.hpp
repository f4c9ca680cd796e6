#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "helly/geometry.hpp"
#include "helly/pipeline.hpp"

namespace helly {

inline constexpr std::string_view kToolVersion = "0.3.0";

// Instance files:
//   {"mode": "symmetric" | "general", "dimension": n,
//    "bodies": [{"id": "...", "constraints": [{"a": [...], "c": ...}]}]}
// Malformed input throws InvalidInput. The family is validated on read.
BodyFamily instance_from_json(std::string_view text);
std::string instance_to_json(const BodyFamily& family);

// Certificates are written with shortest round-trip doubles and a fixed key
// order, so equal certificates serialize to identical bytes. Non-finite
// values are stored as the strings "inf", "-inf" and "nan".
std::string certificate_to_json(const SelectionCertificate& cert);
SelectionCertificate certificate_from_json(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace helly
