#pragma once

#include <string>
#include <vector>

namespace capdirac {

// One identified eigenvalue record; the canonical output stream.
struct ResonanceRecord {
  double hbar = 0.0;
  double theta_im = 0.0;
  double re = 0.0;
  double im = 0.0;
  int multiplicity = 1;
  double drift = 0.0;
};

// Shortest round-trippable decimal form (printf %.17g).
std::string format_g17(double v);

// Generic numeric table for harness reports.
struct Table {
  std::vector<std::string> cols;
  std::vector<std::vector<double>> rows;
};

// CSV with a '#'-prefixed header comment block.  When `timestamp` is true the
// first line is "# generated <time>"; everything after that line is
// deterministic for identical inputs, so reports can be compared byte-wise
// modulo that single line.
void write_records_csv(const std::string& path,
                       const std::vector<ResonanceRecord>& recs,
                       bool timestamp = true);
void write_table_csv(const std::string& path, const Table& table,
                     bool timestamp = true);

// Serializations used by the CLI (atomic: write to <path>.tmp, then rename).
std::string render_records_csv(const std::vector<ResonanceRecord>& recs,
                               bool timestamp);
std::string render_table_csv(const Table& table, bool timestamp);

}  // namespace capdirac
