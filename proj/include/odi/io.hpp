#pragma once

#include "odi/core_sets.hpp"

#include <iosfwd>
#include <string>

namespace odi {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

/// `# rho=<r> center=<c1,...,cd>` followed by one row of integer coordinates per cell.
void write_lattice_csv(std::ostream& os, const LatticeSet& set);
LatticeSet read_lattice_csv(std::istream& is);

/// One row of d comma-separated floats per point.
void write_points_csv(std::ostream& os, const PointCloud& cloud);
PointCloud read_points_csv(std::istream& is);

}  // namespace odi
