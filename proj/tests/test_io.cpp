#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "kelly/errors.hpp"
#include "kelly/io.hpp"

namespace fs = std::filesystem;

namespace {

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = fs::temp_directory_path() / ("kelly_io_test_" + name);
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::error_code ec; fs::remove(path, ec); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("market csv loads names, entries and probabilities") {
  TempFile f("m1.csv",
             "# comment line\n"
             "outcome,safe,risky,prob\n"
             "up,1,2,0.6\n"
             "down,1,0,0.4\n");
  kelly::MarketFile mf = kelly::load_market_csv(f.str());
  CHECK(mf.market.num_outcomes() == 2);
  CHECK(mf.market.num_assets() == 2);
  CHECK(mf.market.asset_names()[1] == "risky");
  CHECK(mf.market.outcome_names()[0] == "up");
  CHECK(mf.market.at(0, 1) == 2.0);
  REQUIRE(mf.probs.has_value());
  CHECK((*mf.probs)[0] == doctest::Approx(0.6));
}

TEST_CASE("market csv errors carry line numbers") {
  TempFile neg("m2.csv", "outcome,a,b\nu,2,-1\nd,0,2\n");
  try {
    kelly::load_market_csv(neg.str());
    FAIL("expected ParseError");
  } catch (const kelly::ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("asset 'b'") != std::string::npos);
  }

  TempFile header("m3.csv", "name,a\nu,1\n");
  CHECK_THROWS_AS(kelly::load_market_csv(header.str()), kelly::ParseError);
  TempFile fields("m4.csv", "outcome,a,b\nu,1\n");
  CHECK_THROWS_AS(kelly::load_market_csv(fields.str()), kelly::ParseError);
  TempFile empty("m5.csv", "");
  CHECK_THROWS_AS(kelly::load_market_csv(empty.str()), kelly::ParseError);
  CHECK_THROWS_AS(kelly::load_market_csv("/nonexistent/file.csv"), kelly::ParseError);
  // structural violations surface as parse errors too
  TempFile zero_row("m6.csv", "outcome,a,b\nu,0,0\nd,1,1\n");
  CHECK_THROWS_AS(kelly::load_market_csv(zero_row.str()), kelly::ParseError);
}

TEST_CASE("distributions load from files and inline text") {
  TempFile f("d1.csv", "0.25, 0.75\n");
  kelly::Distribution d = kelly::load_distribution(f.str(), 2);
  CHECK(d[0] == doctest::Approx(0.25));

  kelly::Distribution inl = kelly::load_distribution("0.3,0.7", 2);
  CHECK(inl[1] == doctest::Approx(0.7));

  // column layout works as well
  TempFile col("d2.csv", "0.2\n0.8\n");
  CHECK(kelly::load_distribution(col.str(), 2)[1] == doctest::Approx(0.8));

  // near-one sums are renormalized, worse ones rejected
  kelly::Distribution renorm = kelly::load_distribution("0.3333333333,0.6666666666", 2);
  CHECK(renorm[0] + renorm[1] == 1.0);
  CHECK_THROWS_AS(kelly::load_distribution("0.5,0.6", 2), kelly::ParseError);
  CHECK_THROWS_AS(kelly::load_distribution("0.5,-0.5,1.0", 3), kelly::ParseError);
  CHECK_THROWS_AS(kelly::load_distribution("0.5,0.5", 3), kelly::ParseError);
  CHECK_THROWS_AS(kelly::load_distribution("abc,def", 2), kelly::ParseError);
}

TEST_CASE("outcome sequences accept names and indices") {
  kelly::Market m(2, 2, {2, 0, 0, 2}, {"up", "down"});
  TempFile f("s1.txt", "up up down\n1,0\n");
  std::vector<std::size_t> seq = kelly::load_outcome_sequence(f.str(), m);
  CHECK(seq == std::vector<std::size_t>{0, 0, 1, 1, 0});
  TempFile bad("s2.txt", "up sideways\n");
  CHECK_THROWS_AS(kelly::load_outcome_sequence(bad.str(), m), kelly::ParseError);
  TempFile range("s3.txt", "7\n");
  CHECK_THROWS_AS(kelly::load_outcome_sequence(range.str(), m), kelly::ParseError);
}

TEST_CASE("family files hold one distribution per line") {
  TempFile f("f1.csv", "0.9,0.1\n0.5,0.5\n");
  std::vector<kelly::Distribution> fam = kelly::load_family_csv(f.str(), 2);
  REQUIRE(fam.size() == 2);
  CHECK(fam[1][0] == doctest::Approx(0.5));
  TempFile bad("f2.csv", "0.9,0.1\n0.9\n");
  CHECK_THROWS_AS(kelly::load_family_csv(bad.str(), 2), kelly::ParseError);
}

TEST_CASE("constraint files parse relations") {
  TempFile f("c1.csv",
             "le, 1, 0, 0.5\n"
             "ge, 0, 1, 0.1\n"
             "eq, 1, -1, 0\n");
  kelly::PortfolioConstraints cons = kelly::load_constraints_csv(f.str(), 2);
  CHECK(cons.inequalities().size() == 2);
  CHECK(cons.equalities().size() == 1);
  // ge rows arrive negated into <= form
  CHECK(cons.inequalities()[1].coeffs[1] == -1.0);
  CHECK(cons.inequalities()[1].bound == -0.1);

  TempFile bad("c2.csv", "lt, 1, 0, 0.5\n");
  CHECK_THROWS_AS(kelly::load_constraints_csv(bad.str(), 2), kelly::ParseError);
  TempFile count("c3.csv", "le, 1, 0.5\n");
  CHECK_THROWS_AS(kelly::load_constraints_csv(count.str(), 2), kelly::ParseError);
  // infeasible sets are caught at construction
  TempFile inf("c4.csv", "le, 1, 1, 0.2\n");
  CHECK_THROWS_AS(kelly::load_constraints_csv(inf.str(), 2), kelly::InfeasibleError);
}

TEST_CASE("market csv round-trips through the formatter") {
  TempFile f("r1.csv", "outcome,a,b,prob\nu,2,0.125,0.6\nd,0,2,0.4\n");
  kelly::MarketFile mf = kelly::load_market_csv(f.str());
  std::string text = kelly::format_market_csv(mf.market, &*mf.probs);
  TempFile g("r2.csv", text);
  kelly::MarketFile back = kelly::load_market_csv(g.str());
  CHECK(back.market.num_outcomes() == mf.market.num_outcomes());
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 2; ++i)
      CHECK(back.market.at(j, i) == mf.market.at(j, i));
  CHECK((*back.probs)[0] == (*mf.probs)[0]);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(kelly::format_double(0.5) == "0.5");
  CHECK(kelly::format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(kelly::format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(kelly::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  double v = 0.1 + 0.2;
  CHECK(std::stod(kelly::format_double(v)) == v);
}
