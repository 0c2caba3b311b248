#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace catfish::csv {

// Shortest round-trip decimal form.
std::string number(double v);
std::string number(const std::optional<double>& v);  // empty when absent
std::string boolean(bool b);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// RFC 4180 style: quoted fields may hold commas, quotes and newlines.
std::vector<std::vector<std::string>> read(std::istream& in);

}  // namespace catfish::csv
