#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qrep {

// Shortest round-trip decimal form of a double (printf %.17g trimmed by the
// usual g-rules).
std::string csv_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void write_header(const std::vector<std::string>& names);
  void write_row(const std::vector<double>& values);
  void write_cells(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
};

}  // namespace qrep
