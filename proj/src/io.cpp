#include "csym/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>
#include <vector>

namespace csym::io {

namespace {

std::string located(const std::string& source, std::size_t line, const std::string& what) {
  return source + ":" + std::to_string(line) + ": " + what;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

bool to_double(std::string_view s, double& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return true;
  // from_chars does not spell infinities the way strtod does.
  if (s == "inf" || s == "Inf" || s == "INF") return v = HUGE_VAL, true;
  if (s == "-inf" || s == "-Inf" || s == "-INF") return v = -HUGE_VAL, true;
  return false;
}

bool to_size(std::string_view s, std::size_t& v) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

struct Lines {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t number = 0;

  bool next(std::string_view& line) {
    if (pos >= text.size()) return false;
    const auto end = text.find('\n', pos);
    line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() : end + 1;
    ++number;
    return true;
  }
};

}  // namespace

ParseError::ParseError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(located(source, line, what)), source_(std::move(source)), line_(line) {}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_grid(const GridFunction& u) {
  const GridSpec& spec = u.spec();
  std::string out = "GRID N=" + std::to_string(spec.dims) + " SHAPE=";
  for (std::size_t a = 0; a < spec.dims; ++a) {
    if (a > 0) out += ',';
    out += std::to_string(spec.shape[a]);
  }
  out += " BBOX=";
  for (std::size_t a = 0; a < spec.dims; ++a) {
    if (a > 0) out += ',';
    out += format_double(spec.bbox[a].first) + ',' + format_double(spec.bbox[a].second);
  }
  out += '\n';
  const std::size_t row = spec.shape[spec.dims - 1];
  const auto vals = u.values();
  for (std::size_t k = 0; k < vals.size(); ++k) {
    out += format_double(vals[k]);
    out += (k + 1) % row == 0 ? '\n' : ' ';
  }
  return out;
}

GridFunction parse_grid(std::string_view text, const std::string& source) {
  Lines lines{text};
  std::string_view line;
  std::size_t header_line = 0;
  while (lines.next(line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    header_line = lines.number;
    break;
  }
  if (header_line == 0) throw ParseError(source, lines.number + 1, "missing GRID header");

  const auto fields = tokens(trim(line));
  if (fields.empty() || fields[0] != "GRID") {
    throw ParseError(source, header_line, "header must start with GRID");
  }
  GridSpec spec;
  bool have_n = false, have_shape = false, have_bbox = false;
  std::vector<double> box;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const auto eq = fields[i].find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, header_line, "malformed header field '" + std::string(fields[i]) + "'");
    }
    const auto key = fields[i].substr(0, eq);
    const auto value = fields[i].substr(eq + 1);
    if (key == "N") {
      if (!to_size(value, spec.dims)) throw ParseError(source, header_line, "N is not an integer");
      have_n = true;
    } else if (key == "SHAPE") {
      for (auto part : split(value, ',')) {
        std::size_t n = 0;
        if (!to_size(part, n)) throw ParseError(source, header_line, "SHAPE entry is not an integer");
        spec.shape.push_back(n);
      }
      have_shape = true;
    } else if (key == "BBOX") {
      for (auto part : split(value, ',')) {
        double v = 0.0;
        if (!to_double(part, v)) throw ParseError(source, header_line, "BBOX entry is not a number");
        box.push_back(v);
      }
      have_bbox = true;
    } else {
      throw ParseError(source, header_line, "unknown header field '" + std::string(key) + "'");
    }
  }
  if (!have_n || !have_shape || !have_bbox) {
    throw ParseError(source, header_line, "header needs N, SHAPE and BBOX");
  }
  if (spec.shape.size() != spec.dims || box.size() != 2 * spec.dims) {
    throw ParseError(source, header_line, "SHAPE and BBOX do not match N");
  }
  for (std::size_t a = 0; a < spec.dims; ++a) spec.bbox.emplace_back(box[2 * a], box[2 * a + 1]);
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, header_line, e.what());
  }

  std::vector<double> values;
  values.reserve(spec.size());
  while (lines.next(line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    for (auto tok : tokens(t)) {
      double v = 0.0;
      if (!to_double(tok, v)) {
        throw ParseError(source, lines.number, "bad value '" + std::string(tok) + "'");
      }
      if (values.size() == spec.size()) {
        throw ParseError(source, lines.number, "more values than SHAPE allows");
      }
      values.push_back(v);
    }
  }
  if (values.size() != spec.size()) {
    throw ParseError(source, lines.number,
                     "expected " + std::to_string(spec.size()) + " values, found " +
                         std::to_string(values.size()));
  }
  try {
    return GridFunction(std::move(spec), std::move(values));
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, header_line, e.what());
  }
}

GridFunction read_grid(const std::filesystem::path& path) {
  return parse_grid(read_text(path), path.string());
}

void write_grid(const std::filesystem::path& path, const GridFunction& u) {
  write_atomic(path, format_grid(u));
}

std::string format_intervals(const IntervalSet& s) {
  std::string out;
  for (const Interval& iv : s.intervals()) {
    out += format_double(iv.left) + ' ' + format_double(iv.right) + '\n';
  }
  return out;
}

IntervalSet parse_intervals(std::string_view text, const std::string& source) {
  Lines lines{text};
  std::string_view line;
  std::vector<Interval> raw;
  while (lines.next(line)) {
    const auto hash = line.find('#');
    const auto t = trim(line.substr(0, hash));
    if (t.empty()) continue;
    const auto fields = tokens(t);
    if (fields.size() != 2) throw ParseError(source, lines.number, "expected 'left right'");
    Interval iv{};
    if (!to_double(fields[0], iv.left) || !to_double(fields[1], iv.right)) {
      throw ParseError(source, lines.number, "endpoints must be numbers");
    }
    if (!std::isfinite(iv.left) || !std::isfinite(iv.right)) {
      throw ParseError(source, lines.number, "endpoints must be finite");
    }
    if (iv.left > iv.right) throw ParseError(source, lines.number, "left endpoint exceeds right");
    raw.push_back(iv);
  }
  return normalize(std::move(raw));
}

IntervalSet read_intervals(const std::filesystem::path& path) {
  return parse_intervals(read_text(path), path.string());
}

std::string format_profile(const RadialProfile& profile) {
  std::string out;
  out += "# dims=" + std::to_string(profile.dims) + '\n';
  out += "# u0=" + format_double(profile.u0) + '\n';
  out += "# inner-radius=" + format_double(profile.inner_radius) + '\n';
  out += "# R=" + format_double(profile.outer_radius) + '\n';
  out += "# boundary-slope=" + format_double(profile.boundary_slope) + '\n';
  out += "r,u,du\n";
  for (std::size_t i = 0; i < profile.r.size(); ++i) {
    out += format_double(profile.r[i]) + ',' + format_double(profile.u[i]) + ',' +
           format_double(profile.du[i]) + '\n';
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot rename onto " + path.string());
  }
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string meta_line(std::uint64_t config_hash, std::uint64_t seed) {
  return "# meta: tool=" + std::string(kToolName) + " version=" + std::string(kToolVersion) +
         " config-hash=" + hex64(config_hash) + " seed=" + std::to_string(seed) + '\n';
}

}  // namespace csym::io
