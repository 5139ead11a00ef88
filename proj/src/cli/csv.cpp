#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "cpskit/cli.hpp"

namespace cpskit {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(std::string text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

double parse_number(const std::string& raw, std::size_t line_number) {
  const std::string text = trim(raw);
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
      !std::isfinite(value)) {
    throw DataError("line " + std::to_string(line_number) + ": '" + text +
                    "' is not a finite number");
  }
  return value;
}

}  // namespace

std::vector<Observation> read_observations_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty input: missing header row");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split(line);
  if (header.size() < 2 || trim(header.back()) != "y") {
    throw DataError("header must read x1,...,xd,y");
  }
  for (std::size_t k = 0; k + 1 < header.size(); ++k) {
    if (trim(header[k]) != "x" + std::to_string(k + 1)) {
      throw DataError("header must read x1,...,xd,y");
    }
  }
  const std::size_t dimension = header.size() - 1;

  std::vector<Observation> data;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != dimension + 1) {
      throw DataError("line " + std::to_string(line_number) + ": expected " +
                      std::to_string(dimension + 1) + " fields");
    }
    Observation obs;
    obs.x.reserve(dimension);
    for (std::size_t k = 0; k < dimension; ++k) {
      obs.x.push_back(parse_number(fields[k], line_number));
    }
    obs.y = parse_number(fields.back(), line_number);
    data.push_back(std::move(obs));
  }
  if (data.empty()) throw DataError("no observations after the header row");
  return data;
}

}  // namespace cpskit
