#include "cbi/skeleton.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "cbi/errors.hpp"
#include "cbi/io.hpp"

namespace cbi {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string skeleton_to_csv(const Skeleton& skel) {
  std::ostringstream out;
  out << "k,x\n";
  for (std::size_t k = 0; k < skel.observations.size(); ++k) {
    out << k << ',' << format_double(skel.observations[k]) << '\n';
  }
  return out.str();
}

void write_skeleton_csv(const Skeleton& skel, const std::string& path) {
  write_text_file_atomic(path, skeleton_to_csv(skel));
}

Skeleton read_skeleton_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open skeleton file: " + path);
  std::string line;
  if (!std::getline(in, line) || (line != "k,x" && line != "k,x\r")) {
    throw ConfigError("skeleton CSV must start with header k,x");
  }
  Skeleton skel;
  std::size_t expect_k = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("malformed skeleton row: " + line);
    std::size_t k = 0;
    auto kr = std::from_chars(line.data(), line.data() + comma, k);
    if (kr.ec != std::errc() || kr.ptr != line.data() + comma || k != expect_k) {
      throw ConfigError("skeleton rows must be consecutive from k=0: " + line);
    }
    double x = 0.0;
    const char* xb = line.data() + comma + 1;
    const char* xe = line.data() + line.size();
    auto xr = std::from_chars(xb, xe, x);
    if (xr.ec != std::errc() || xr.ptr != xe || !std::isfinite(x) || x < 0.0) {
      throw ConfigError("skeleton values must be finite nonnegative reals: " + line);
    }
    skel.observations.push_back(x);
    ++expect_k;
  }
  if (skel.observations.size() < 2) throw ConfigError("skeleton needs at least X_0 and X_1");
  return skel;
}

}  // namespace cbi
