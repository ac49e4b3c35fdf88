#include "wikies/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wikies/error.hpp"

namespace wikies {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file_atomic(const std::string& path, const std::string& payload) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + tmp);
    out << payload;
    if (!out.flush()) throw Error("failed writing file: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot move " + tmp + " into place: " + ec.message());
}

}  // namespace wikies
