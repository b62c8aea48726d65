#include "spectrace/types.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace spectrace {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::singular_matrix: return "singular_matrix";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::insufficient_samples: return "insufficient_samples";
    case ErrorCode::numerical_failure: return "numerical_failure";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::schema_error: return "schema_error";
  }
  return "unknown";
}

IndexSet normalize_omega(IndexSet omega, int dim) {
  if (omega.empty()) {
    throw Error(ErrorCode::invalid_argument, "observation set is empty");
  }
  std::sort(omega.begin(), omega.end());
  if (std::adjacent_find(omega.begin(), omega.end()) != omega.end()) {
    throw Error(ErrorCode::invalid_argument,
                "observation set has repeated indices");
  }
  if (omega.front() < 1 || omega.back() > dim) {
    throw Error(ErrorCode::out_of_range,
                "observation index outside [1, " + std::to_string(dim) + "]");
  }
  return omega;
}

namespace {

int parse_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::invalid_argument,
                "bad index '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

IndexSet parse_omega(const std::string& text) {
  IndexSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(parse_int(item));
    } else {
      const int lo = parse_int(std::string_view(item).substr(0, dash));
      const int hi = parse_int(std::string_view(item).substr(dash + 1));
      if (hi < lo) throw Error(ErrorCode::invalid_argument, "bad range " + item);
      for (int i = lo; i <= hi; ++i) out.push_back(i);
    }
  }
  return out;
}

std::string format_omega(const IndexSet& omega) {
  std::string out = "{";
  for (std::size_t k = 0; k < omega.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(omega[k]);
  }
  return out + "}";
}

}  // namespace spectrace
