#include "odi/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace odi {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

template <class T>
T parse_number(const std::string& text, std::size_t line_no) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error("line " + std::to_string(line_no) + ": cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw Error("cannot format number");
  return {buf, ptr};
}

void write_lattice_csv(std::ostream& os, const LatticeSet& set) {
  const GridSpec& spec = set.spec();
  os << "# rho=" << format_double(spec.rho) << " center=";
  for (int i = 0; i < spec.dim(); ++i) os << (i ? "," : "") << format_double(spec.center[i]);
  os << '\n';
  for (std::size_t k = 0; k < set.size(); ++k) {
    const Cell c = set.cell(k);
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << '\n';
  }
}

LatticeSet read_lattice_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# rho=", 0) != 0) throw Error("line 1: missing '# rho=' header");
  const auto center_pos = line.find(" center=");
  if (center_pos == std::string::npos) throw Error("line 1: missing center");
  const double rho = parse_number<double>(line.substr(6, center_pos - 6), 1);
  const auto fields = split(line.substr(center_pos + 8), ',');
  Vec center(static_cast<Eigen::Index>(fields.size()));
  for (std::size_t i = 0; i < fields.size(); ++i) center[static_cast<Eigen::Index>(i)] = parse_number<double>(fields[i], 1);
  GridSpec spec(rho, center);

  std::vector<std::int64_t> coords;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto row = split(line, ',');
    if (static_cast<int>(row.size()) != spec.dim()) {
      throw Error("line " + std::to_string(line_no) + ": expected " + std::to_string(spec.dim()) + " coordinates");
    }
    for (const auto& f : row) coords.push_back(parse_number<std::int64_t>(f, line_no));
  }
  return LatticeSet(std::move(spec), std::move(coords));
}

void write_points_csv(std::ostream& os, const PointCloud& cloud) {
  for (const Vec& p : cloud) {
    for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? "," : "") << format_double(p[i]);
    os << '\n';
  }
}

PointCloud read_points_csv(std::istream& is) {
  PointCloud out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto row = split(line, ',');
    if (!out.empty() && static_cast<Eigen::Index>(row.size()) != out.front().size()) {
      throw Error("line " + std::to_string(line_no) + ": inconsistent dimension");
    }
    if (row.empty() || row.size() > static_cast<std::size_t>(kMaxDim)) {
      throw Error("line " + std::to_string(line_no) + ": dimension out of range");
    }
    Vec p(static_cast<Eigen::Index>(row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) p[static_cast<Eigen::Index>(i)] = parse_number<double>(row[i], line_no);
    out.push_back(p);
  }
  return out;
}

}  // namespace odi
