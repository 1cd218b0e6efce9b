#include "opo/csv.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "opo/error.hpp"

namespace opo::csv {

std::string number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw NumericalError("csv::number: formatting failed");
  return {buf, res.ptr};
}

std::string number_or_div(const std::optional<double>& value) { return value ? number(*value) : "div"; }

std::string grid(const Grid2D& g, std::string_view x_name, std::string_view y_name, std::string_view value_name) {
  std::string out;
  out.reserve(g.values.size() * 64 + 32);
  out.append(x_name).append(",").append(y_name).append(",").append(value_name).append("\n");
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    for (std::size_t j = 0; j < g.ys.size(); ++j) {
      out.append(number(g.xs[i])).append(",").append(number(g.ys[j])).append(",").append(number(g.at(i, j)));
      out.push_back('\n');
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParameterError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw NumericalError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

}  // namespace opo::csv
