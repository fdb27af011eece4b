#pragma once

#include <string>
#include <string_view>

#include "biphoton/params.hpp"

namespace biphoton {

enum class Dimension { Time, Length, Dimensionless };

// "50fs", "0.5 cm", "1.2e-12" (bare numbers are SI). Throws ValidationError.
double parse_quantity(std::string_view text, Dimension dim);

// `key = value` lines, `#` comments; keys A, B, L, lambda0, tau.
// Missing keys keep the PhysicalConfig defaults.
PhysicalConfig parse_config(std::string_view text);

// An unreadable file is a config error (ValidationError), not an IO error.
PhysicalConfig load_config(const std::string& path);

std::string format_config(const PhysicalConfig& cfg);

}  // namespace biphoton
