#pragma once

#include <string>
#include <vector>

#include "wt/matrix.hpp"

namespace wt {

// RFC-4180 CSV: CRLF line endings, header row, '.' decimal separator,
// 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& m);
std::string format_g17(double v);

Matrix read_csv(const std::string& path, std::size_t expect_cols = 0);

}  // namespace wt
