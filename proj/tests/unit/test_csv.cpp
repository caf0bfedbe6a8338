#include <doctest.h>

#include <sstream>

#include "plap/csv.hpp"

using namespace plap;

TEST_CASE("six significant digits") {
  CHECK(format_real(0.00836123) == "0.00836123");
  CHECK(format_real(0.0083612345) == "0.00836123");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(4.5e-5) == "4.5e-05");
  CHECK(format_real(185.0) == "185");
}

TEST_CASE("table round trip") {
  const std::vector<ExperimentRow> rows{{25, 0.707107, 0.0162, 0.0, 5.0},
                                        {81, 0.353553, 0.00836, 0.954321, 5.0},
                                        {289, 0.176777, 0.0039, 1.1, 10.0}};
  std::stringstream ss;
  write_table_csv(ss, rows);
  CHECK(ss.str().rfind("dim,h,best_error,eoc,p_star\n", 0) == 0);
  const auto back = read_table_csv(ss);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].dim == rows[i].dim);
    CHECK(back[i].h == doctest::Approx(rows[i].h).epsilon(1e-6));
    CHECK(back[i].best_error == doctest::Approx(rows[i].best_error).epsilon(1e-6));
    CHECK(back[i].eoc == doctest::Approx(rows[i].eoc).epsilon(1e-6));
    CHECK(back[i].p_star == rows[i].p_star);
  }
  std::stringstream again;
  write_table_csv(again, back);
  std::stringstream first;
  write_table_csv(first, rows);
  CHECK(again.str() == first.str());
}

TEST_CASE("sweep round trip") {
  const SweepCurve c{{2, 3, 4.5, 200}, {0.1, 0.0123456789, 3e-7, 0.5}};
  std::stringstream ss;
  write_sweep_csv(ss, c);
  const auto back = read_sweep_csv(ss);
  CHECK(back.p == c.p);
  REQUIRE(back.error.size() == c.error.size());
  for (std::size_t i = 0; i < c.error.size(); ++i)
    CHECK(back.error[i] == doctest::Approx(c.error[i]).epsilon(1e-6));
}

TEST_CASE("malformed input is rejected") {
  std::istringstream wrong_header("p,err\n2,0.1\n");
  CHECK_THROWS(read_sweep_csv(wrong_header));
  std::istringstream short_row("p,error\n2\n");
  CHECK_THROWS(read_sweep_csv(short_row));
  std::istringstream trailing("p,error\n2,0.1,\n");
  CHECK_THROWS(read_sweep_csv(trailing));
  std::istringstream junk("dim,h,best_error,eoc,p_star\n25,0.7,x,0,5\n");
  CHECK_THROWS(read_table_csv(junk));
  std::istringstream crlf("p,error\r\n2,0.1\r\n\r\n");
  CHECK(read_sweep_csv(crlf).p == std::vector<double>{2.0});
}
