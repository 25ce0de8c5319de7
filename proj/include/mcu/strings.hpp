#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mcu::str {

std::string_view trim(std::string_view s);
std::string lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
/// Splits on runs of ASCII whitespace, dropping empty pieces.
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with_ci(std::string_view s, std::string_view prefix);
/// Lowercase, alnum runs joined by '_' ("Mine Oak Log!" -> "mine_oak_log").
std::string slugify(std::string_view s);
/// Collapses internal whitespace runs to one space and trims the ends.
std::string collapse_ws(std::string_view s);
/// Reads a whole file; throws NotFoundError when unreadable.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace mcu::str
