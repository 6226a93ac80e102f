#include "cbi/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cbi/errors.hpp"

namespace cbi {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + tmp);
    out << content;
    out.flush();
    if (!out) throw ConfigError("failed writing: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ConfigError("cannot rename temp file onto: " + path);
  }
}

}  // namespace cbi
