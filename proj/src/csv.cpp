// SPDX-License-Identifier: Apache-2.0

#include "fdadm/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fdadm::csv
{

std::string format_number(double value)
{
    char buf[64];
    // Whole numbers such as ranges in meters read better without an exponent.
    const bool whole = std::abs(value) < 1e15 && value == std::trunc(value);
    const auto res = whole ? std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed)
                           : std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc{})
        throw std::runtime_error("csv: cannot format number");
    return {buf, res.ptr};
}

std::vector<std::string> split_line(std::string_view line)
{
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true)
    {
        const auto comma = line.find(',', start);
        auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!field.empty() && field.front() == ' ')
            field.remove_prefix(1);
        while (!field.empty() && field.back() == ' ')
            field.remove_suffix(1);
        fields.emplace_back(field);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

double parse_number(std::string_view field)
{
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw std::invalid_argument("csv: not a number: '" + std::string(field) + "'");
    return value;
}

} // namespace fdadm::csv
