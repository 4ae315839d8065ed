#include "ifgen/paths.hpp"

#include <cstdlib>

namespace ifgen {

std::string data_dir() {
  if (const char* env = std::getenv("IFGEN_DATA_DIR"); env && *env) return env;
  return IFGEN_DEFAULT_DATA_DIR;
}

std::string data_path(std::string_view relative) { return data_dir() + "/" + std::string(relative); }

}  // namespace ifgen
