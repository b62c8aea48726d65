#include "spectrace/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace spectrace {

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) {
    throw Error(ErrorCode::numerical_failure, "cannot format number");
  }
  return std::string(buf, ptr);
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0 && !std::signbit(z.imag())) return format_real(z.real());
  std::string out = format_real(z.real());
  if (!std::signbit(z.imag())) out += '+';
  return out + format_real(z.imag()) + 'j';
}

double parse_real(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::schema_error, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

Complex parse_complex(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorCode::schema_error, "empty complex field");
  if (text.back() != 'j' && text.back() != 'i') return {parse_real(text), 0.0};

  text.remove_suffix(1);
  // Split at the last sign that is not the leading sign or an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s);
  };
  if (split == std::string_view::npos) return {0.0, imag_of(text)};
  return {parse_real(text.substr(0, split)), imag_of(text.substr(split))};
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    std::string field = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void write_series_csv(std::ostream& out, const ObservedSeries& series) {
  out << 't';
  for (int k : series.omega) out << ",i" << k;
  out << '\n';
  for (int t = 0; t < series.length(); ++t) {
    out << t;
    for (int k = 0; k < series.width(); ++k) out << ',' << format_complex(series.samples(t, k));
    out << '\n';
  }
}

ObservedSeries read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::io_error, "series CSV: empty input");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "t") {
    throw Error(ErrorCode::schema_error, "series CSV: header must be t,i<k1>,...");
  }
  ObservedSeries series;
  for (std::size_t k = 1; k < header.size(); ++k) {
    if (header[k].size() < 2 || header[k][0] != 'i') {
      throw Error(ErrorCode::schema_error, "series CSV: bad column '" + header[k] + "'");
    }
    series.omega.push_back(static_cast<int>(parse_real(std::string_view(header[k]).substr(1))));
  }
  const IndexSet sorted = normalize_omega(series.omega, std::max(1, *std::max_element(series.omega.begin(), series.omega.end())));
  if (sorted != series.omega) {
    throw Error(ErrorCode::schema_error, "series CSV: observed indices must be ascending");
  }
  std::vector<std::vector<Complex>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::schema_error,
                  "series CSV line " + std::to_string(line_no) + ": wrong field count");
    }
    std::vector<Complex> row;
    for (std::size_t k = 1; k < fields.size(); ++k) row.push_back(parse_complex(fields[k]));
    rows.push_back(std::move(row));
  }
  series.samples.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(series.omega.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t k = 0; k < rows[t].size(); ++k) {
      series.samples(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = rows[t][k];
    }
  }
  return series;
}

RMatrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    std::vector<double> row;
    try {
      for (const auto& f : fields) row.push_back(parse_real(f));
    } catch (const Error&) {
      if (first) {
        first = false;
        continue;
      }
      throw Error(ErrorCode::schema_error,
                  "matrix CSV line " + std::to_string(line_no) + ": non-numeric field");
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::schema_error,
                  "matrix CSV line " + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::schema_error, "matrix CSV: no data rows");
  RMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_matrix_csv(std::ostream& out, const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_complex(m(i, j));
    }
    out << '\n';
  }
}

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  return in;
}

}  // namespace

ObservedSeries load_series(const std::string& path) {
  auto in = open_input(path);
  return read_series_csv(in);
}

RMatrix load_matrix(const std::string& path) {
  auto in = open_input(path);
  return read_matrix_csv(in);
}

}  // namespace spectrace
