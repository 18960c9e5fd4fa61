#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "problock/netlist.hpp"

namespace problock {

/// Parse ISCAS bench text. A `# KEYINPUTS:` header marks a locked netlist: the
/// listed inputs become key inputs, and generated (reserved-prefix) wire names
/// are accepted. Throws NetlistError with a 1-based line/column.
Netlist parse_bench(std::string_view text, std::string name = {});

/// Reads a bench file; the netlist is named after the file stem.
Netlist read_bench_file(const std::filesystem::path& path);

/// Serializes to bench text with `\n` line endings. Locked netlists carry the
/// KEYINPUTS / KEY / KEYGATES header ahead of the body.
std::string write_bench(const Netlist& netlist);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace problock
