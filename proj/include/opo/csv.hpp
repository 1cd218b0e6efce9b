#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "opo/wigner.hpp"

namespace opo::csv {

/// 17 significant digits, '.' decimal separator, independent of locale.
std::string number(double value);

/// number(value) or the literal token "div" for a divergence.
std::string number_or_div(const std::optional<double>& value);

/// Header plus one row per grid point, row-major.
std::string grid(const Grid2D& grid, std::string_view x_name, std::string_view y_name,
                 std::string_view value_name = "w");

/// Writes content to a sibling temporary and renames it into place, so a
/// failed run never leaves a partial file behind.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace opo::csv
