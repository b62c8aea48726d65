#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "spectrace/systems.hpp"
#include "spectrace/types.hpp"

namespace spectrace {

/// Shortest decimal form that parses back to the same double.
std::string format_real(double x);
/// "re" when the imaginary part is zero, otherwise "re+imj" / "re-imj".
std::string format_complex(Complex z);

double parse_real(std::string_view text);
/// Accepts "1.5", "-2e-3", "1.5+2j", "1.5-0.25j", "2j", "-j".
Complex parse_complex(std::string_view text);

/// Splits on commas and trims surrounding whitespace (and a trailing '\r').
std::vector<std::string> split_csv_line(const std::string& line);

/// Header "t,i<k1>,i<k2>,..." followed by one row per sample. The t column
/// holds the sample index.
void write_series_csv(std::ostream& out, const ObservedSeries& series);
ObservedSeries read_series_csv(std::istream& in);

/// Plain numeric matrix, one row per line. A first line that does not parse
/// as numbers is treated as a header and skipped.
RMatrix read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const CMatrix& m);

ObservedSeries load_series(const std::string& path);
RMatrix load_matrix(const std::string& path);

}  // namespace spectrace
