#pragma once

// Minimal CSV used for every table the CLI emits: header line, comma
// separated, LF endings, doubles with 17 significant digits so a read back
// with strtod is bit-identical.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace painleve::csv {

using Cell = std::variant<double, std::string>;

std::string format_double(double v);

class Writer {
 public:
  explicit Writer(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<Cell>& cells);
  void write(std::ostream& os) const;
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws std::out_of_range
  double number(std::size_t r, std::size_t c) const;  // throws std::invalid_argument
};

Table read(std::istream& is);
Table read_string(const std::string& s);
Table read_file(const std::string& path);

}  // namespace painleve::csv
