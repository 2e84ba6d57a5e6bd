#pragma once

#include "fogsim/scenario.hpp"

#include <string>
#include <string_view>

namespace fogsim::config {

/// Name under which the five-device reference fixture is always available,
/// whether or not the file exists on disk.
inline constexpr std::string_view fd_table_name = "fixtures/fd-table";

std::string_view builtin_fd_table() noexcept;

/// Parses a JSON scenario. Unknown keys, wrong types and out-of-range values
/// raise `Error(ErrorKind::Config)` whose message starts with the field path.
Scenario parse(std::string_view text);

/// Raw config text; `fixtures/fd-table` (with or without the .json suffix)
/// falls back to the embedded copy.
std::string read_text(const std::string& path);

/// read_text + parse.
Scenario load(const std::string& path);

} // namespace fogsim::config
