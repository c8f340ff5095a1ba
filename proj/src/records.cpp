#include "capdirac/records.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "capdirac/errors.hpp"

namespace capdirac {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
std::string timestamp_line() {
  std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return std::string("# generated ") + buf + "\n";
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw config_error("cannot open for writing: " + tmp);
    f << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw config_error("cannot move into place: " + path);
}
}  // namespace

std::string render_records_csv(const std::vector<ResonanceRecord>& recs,
                               bool timestamp) {
  std::ostringstream out;
  if (timestamp) out << timestamp_line();
  out << "hbar,theta_im,re,im,multiplicity,drift\n";
  for (const ResonanceRecord& r : recs)
    out << format_g17(r.hbar) << ',' << format_g17(r.theta_im) << ','
        << format_g17(r.re) << ',' << format_g17(r.im) << ','
        << r.multiplicity << ',' << format_g17(r.drift) << '\n';
  return out.str();
}

std::string render_table_csv(const Table& table, bool timestamp) {
  std::ostringstream out;
  if (timestamp) out << timestamp_line();
  for (size_t i = 0; i < table.cols.size(); ++i)
    out << table.cols[i] << (i + 1 < table.cols.size() ? "," : "");
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.cols.size())
      throw config_error("table row width does not match header");
    for (size_t i = 0; i < row.size(); ++i)
      out << format_g17(row[i]) << (i + 1 < row.size() ? "," : "");
    out << '\n';
  }
  return out.str();
}

void write_records_csv(const std::string& path,
                       const std::vector<ResonanceRecord>& recs,
                       bool timestamp) {
  atomic_write(path, render_records_csv(recs, timestamp));
}

void write_table_csv(const std::string& path, const Table& table,
                     bool timestamp) {
  atomic_write(path, render_table_csv(table, timestamp));
}

}  // namespace capdirac
