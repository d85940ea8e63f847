#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace tea {

// Identifier source for session ids and trace record ids. The default is
// 128 random bits rendered as 32 hex characters; tests swap in a sequential
// generator to keep runs reproducible.
using IdGen = std::function<std::string()>;

IdGen random_hex_ids();
IdGen sequential_ids(std::string prefix = "");

}  // namespace tea
