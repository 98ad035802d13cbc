#pragma once

#include <string>
#include <vector>

namespace choquard {

/// Formats a real with 17 significant digits, '.' decimal, no locale.
std::string format_real(double x);

/// Writes header + rows as CSV. Reals go through format_real upstream;
/// this writer only joins cells.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const std::string& config_echo);

void write_text(const std::string& path, const std::string& content);

std::string sha256_hex(const std::string& bytes);

/// manifest.json in dir: every listed file with its content hash.
void write_manifest(const std::string& dir, const std::vector<std::string>& files,
                    const std::string& config_echo);

} // namespace choquard
