#include <doctest.h>

#include "odi/io.hpp"

#include <sstream>

using namespace odi;

TEST_CASE("format_double round-trips") {
  for (double x : {0.0, 0.1, -1.5, 1.0 / 3.0, 1e-300, 6.02214076e23}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("lattice CSV round-trip") {
  const LatticeSet s(GridSpec(0.0625, make_vec({5.0, -1.0})), {0, 0, -3, 7, 12, -1});
  std::ostringstream os;
  write_lattice_csv(os, s);
  CHECK(os.str().rfind("# rho=0.0625 center=5,-1\n", 0) == 0);
  std::istringstream is(os.str());
  CHECK(read_lattice_csv(is) == s);
}

TEST_CASE("lattice CSV errors name the line") {
  std::istringstream missing("1,2\n");
  CHECK_THROWS_AS(read_lattice_csv(missing), Error);
  std::istringstream bad("# rho=1 center=0,0\n1,2\n3,x\n");
  CHECK_THROWS_WITH_AS(read_lattice_csv(bad), doctest::Contains("line 3"), Error);
  std::istringstream width("# rho=1 center=0,0\n1,2,3\n");
  CHECK_THROWS_WITH_AS(read_lattice_csv(width), doctest::Contains("line 2"), Error);
}

TEST_CASE("point CSV round-trip") {
  const PointCloud a{make_vec({0.1, 2.0 / 3.0}), make_vec({-4.0, 1e-9})};
  std::ostringstream os;
  write_points_csv(os, a);
  std::istringstream is(os.str());
  const PointCloud b = read_points_csv(is);
  REQUIRE(b.size() == 2);
  CHECK(b[0] == a[0]);
  CHECK(b[1] == a[1]);
}
