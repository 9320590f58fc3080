// SPDX-License-Identifier: Apache-2.0
//
// Minimal CSV helpers: header row, ',' separator, '.' decimal, '\n' line ends.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fdadm::csv
{

// Shortest round-trip decimal representation; locale independent.
std::string format_number(double value);

std::vector<std::string> split_line(std::string_view line);

double parse_number(std::string_view field);

} // namespace fdadm::csv
