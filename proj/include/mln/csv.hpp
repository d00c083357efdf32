#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mln::csv {

using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;

    /// Column position by header name.
    std::optional<std::size_t> column(std::string_view name) const;
};

/// RFC 4180 reader: comma separated, first row is the header, double-quoted
/// fields may contain commas, quotes ("") and line breaks. Accepts CRLF or LF
/// and a leading UTF-8 byte order mark; blank lines are skipped. Throws
/// mln::Error("csv-malformed") on an unterminated quote or a row whose field
/// count differs from the header.
Table read(std::string_view text);

std::string write(const Table& table);

/// Shortest round-trip decimal form.
std::string format_number(double value);

/// Whole-field decimal parse; rejects trailing junk, NaN and infinities.
std::optional<double> parse_number(std::string_view text);

}  // namespace mln::csv
