#pragma once

#include <string>
#include <variant>
#include <vector>

namespace qdev::cli {

using CsvCell = std::variant<double, long long, std::string>;

/// Header row, then one line per row; CRLF line ends and quoting as in RFC 4180.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<CsvCell>>& rows);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows);

}  // namespace qdev::cli
