#pragma once

// Text formats: grid files, interval-set files, radial profiles and CSV
// reports, with atomic writes.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "csym/grid_function.hpp"
#include "csym/interval_set.hpp"
#include "csym/radial.hpp"

namespace csym::io {

inline constexpr std::string_view kToolName = "csym";
inline constexpr std::string_view kToolVersion = "0.1.0";

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what);
  const std::string& source() const { return source_; }
  /// 1-based line number.
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// "GRID N=<dims> SHAPE=<n1,...> BBOX=<a1,b1,...>" followed by row-major
/// values, one last-axis row per line, printed with 17 significant digits.
std::string format_grid(const GridFunction& u);
GridFunction parse_grid(std::string_view text, const std::string& source = "<grid>");
GridFunction read_grid(const std::filesystem::path& path);
void write_grid(const std::filesystem::path& path, const GridFunction& u);

/// One "left right" pair per line; '#' starts a comment.
std::string format_intervals(const IntervalSet& s);
IntervalSet parse_intervals(std::string_view text, const std::string& source = "<intervals>");
IntervalSet read_intervals(const std::filesystem::path& path);

/// Header lines "# key=value" (dims, u0, inner-radius, R, boundary-slope)
/// then CSV columns r,u,du.
std::string format_profile(const RadialProfile& profile);

std::string read_text(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// "# meta: tool=csym version=0.1.0 config-hash=<hex> seed=<seed>\n"
std::string meta_line(std::uint64_t config_hash, std::uint64_t seed);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

}  // namespace csym::io
