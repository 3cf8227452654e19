#pragma once

#include <string>
#include <vector>

namespace thermovi::csv {

/// 17 significant digits; NaN and infinities as "nan", "inf", "-inf".
std::string format(double x);

/// Joins already formatted cells with commas.
std::string join(const std::vector<std::string>& cells);

/// Writes header and rows to path, creating parent directories. Throws
/// ConfigError if the file cannot be opened.
void write(const std::string& path, const std::string& header, const std::vector<std::string>& rows);

}  // namespace thermovi::csv
