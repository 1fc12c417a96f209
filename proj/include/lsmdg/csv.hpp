// Minimal CSV output with 17 significant digits for floating-point fields.
#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace lsmdg {

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  template <class... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((write_field(fields, first)), ...);
    out_ << '\n';
  }

 private:
  template <class T>
  void write_field(const T& value, bool& first) {
    if (!first) out_ << ',';
    first = false;
    out_ << value;
  }

  std::ostream& out_;
};

/// Opens dir/name for writing, creating dir if needed. Throws
/// std::runtime_error when the file cannot be opened.
std::ofstream open_csv(const std::filesystem::path& dir, const std::string& name);

}  // namespace lsmdg
