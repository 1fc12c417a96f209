#include "lsmdg/csv.hpp"

#include <iomanip>
#include <stdexcept>

namespace lsmdg {

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
  out_ << std::setprecision(17);
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

std::ofstream open_csv(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot open " + (dir / name).string());
  return out;
}

}  // namespace lsmdg
