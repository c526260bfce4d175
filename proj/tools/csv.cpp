#include "csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace painleve::csv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Writer::row(const std::vector<Cell>& cells) {
  if (cells.size() != header_.size()) throw std::invalid_argument("csv row width differs from header");
  std::vector<std::string> r;
  r.reserve(cells.size());
  for (const auto& c : cells) {
    if (const double* d = std::get_if<double>(&c)) {
      r.push_back(format_double(*d));
    } else {
      const auto& s = std::get<std::string>(c);
      if (s.find_first_of(",\n\"") != std::string::npos) {
        throw std::invalid_argument("csv text cells may not contain commas, quotes or newlines");
      }
      r.push_back(s);
    }
  }
  rows_.push_back(std::move(r));
}

void Writer::write(std::ostream& os) const {
  auto line = [&os](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
}

std::string Writer::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no csv column " + name);
}

double Table::number(std::size_t r, std::size_t c) const {
  const std::string& s = rows.at(r).at(c);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

Table read(std::istream& is) {
  Table t;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') throw std::invalid_argument("csv must use LF line endings");
    std::vector<std::string> cells;
    std::size_t pos = 0;
    for (;;) {
      const auto k = line.find(',', pos);
      cells.push_back(line.substr(pos, k - pos));
      if (k == std::string::npos) break;
      pos = k + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size()) throw std::invalid_argument("ragged csv row");
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw std::invalid_argument("empty csv");
  return t;
}

Table read_string(const std::string& s) {
  std::istringstream is(s);
  return read(is);
}

Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read(in);
}

}  // namespace painleve::csv
