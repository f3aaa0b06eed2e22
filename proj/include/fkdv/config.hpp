#pragma once

#include <map>
#include <string>
#include <vector>

namespace fkdv {

/// Flat `key = value` configuration text: one pair per line, `#` starts a
/// comment, values unquoted. Unknown keys are rejected by name.
std::map<std::string, std::string> parse_config_file(const std::string& path);

std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Keys accepted by the command-line driver.
const std::vector<std::string>& known_config_keys();

void reject_unknown_keys(const std::map<std::string, std::string>& entries);

std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace fkdv
