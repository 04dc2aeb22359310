#pragma once

#include <string>

#include "pflin/network.hpp"

namespace pflin {

enum class CaseFormat { native, matpower };

// Parses, converts to per-unit, and validates; a non-empty violation list
// raises ValidationError. The network name defaults to the file stem.
Network load_case(const std::string& path, CaseFormat format);

// Same pipeline on in-memory text; name must be supplied by the caller.
Network parse_case(const std::string& text, CaseFormat format, const std::string& name);

// Native JSON, physical units, keys in the documented schema. load_case of the
// result reproduces the network up to per-unit round-trip.
void save_case(const Network& net, const std::string& path);
std::string case_to_json_text(const Network& net);

}  // namespace pflin
