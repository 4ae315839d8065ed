#pragma once

#include <string>
#include <string_view>

namespace ifgen {

/// Root of the shipped data tree (configs, corpus, fixtures). IFGEN_DATA_DIR
/// overrides the location baked in at build time.
std::string data_dir();
std::string data_path(std::string_view relative);

}  // namespace ifgen
