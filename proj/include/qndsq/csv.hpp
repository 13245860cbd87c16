#pragma once

#include <string>
#include <vector>

namespace qndsq {

//! Nine significant digits, the precision of every emitted CSV field.
std::string format_sig(double x);

//! Splits one CSV line on commas (no quoting; none of our fields need it).
std::vector<std::string> split_csv_line(const std::string &line);

} // namespace qndsq
