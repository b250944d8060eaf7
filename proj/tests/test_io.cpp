#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wbary/errors.hpp"
#include "wbary/io.hpp"
#include "support.hpp"

using namespace wbary;

namespace {

std::filesystem::path scratch(const std::string& name) {
  static const std::filesystem::path dir = [] {
    std::filesystem::path d =
        std::filesystem::temp_directory_path() / "wbary_io_tests";
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

}  // namespace

TEST_CASE("PGM writing is canonical and reading inverts it") {
  PgmImage img;
  img.width = 3;
  img.height = 2;
  img.maxval = 255;
  img.pixels = {0, 10, 255, 7, 0, 99};

  SUBCASE("ASCII") {
    auto p = scratch("ascii.pgm");
    write_pgm(p.string(), img);
    CHECK(slurp(p) == "P2\n3 2\n255\n0 10 255\n7 0 99\n");
    PgmImage back = read_pgm(p.string());
    CHECK(back.width == 3);
    CHECK(back.height == 2);
    CHECK(back.maxval == 255);
    CHECK_FALSE(back.binary);
    CHECK(back.pixels == img.pixels);
    // writing what was read reproduces the file byte for byte
    auto p2 = scratch("ascii2.pgm");
    write_pgm(p2.string(), back);
    CHECK(slurp(p2) == slurp(p));
  }
  SUBCASE("binary, one byte per sample") {
    img.binary = true;
    auto p = scratch("bin8.pgm");
    write_pgm(p.string(), img);
    std::string bytes = slurp(p);
    CHECK(bytes.rfind("P5\n3 2\n255\n", 0) == 0);
    CHECK(bytes.size() == 11 + 6);
    PgmImage back = read_pgm(p.string());
    CHECK(back.binary);
    CHECK(back.pixels == img.pixels);
  }
  SUBCASE("binary, sixteen bit big-endian") {
    PgmImage wide;
    wide.width = 2;
    wide.height = 2;
    wide.maxval = 65535;
    wide.binary = true;
    wide.pixels = {258, 65535, 0, 5};
    auto p = scratch("bin16.pgm");
    write_pgm(p.string(), wide);
    std::string bytes = slurp(p);
    std::string header = "P5\n2 2\n65535\n";
    REQUIRE(bytes.size() == header.size() + 8);
    CHECK(bytes.compare(0, header.size(), header) == 0);
    const unsigned char* raster =
        reinterpret_cast<const unsigned char*>(bytes.data() + header.size());
    CHECK(raster[0] == 1);    // 258 = 0x0102
    CHECK(raster[1] == 2);
    CHECK(raster[2] == 255);  // 65535 = 0xffff
    CHECK(raster[3] == 255);
    CHECK(raster[6] == 0);
    CHECK(raster[7] == 5);
    CHECK(read_pgm(p.string()).pixels == wide.pixels);
  }
}

TEST_CASE("PGM reader accepts comments and loose whitespace") {
  auto p = scratch("loose.pgm");
  spit(p, "P2 # magic\n# a full comment line\n 3\t2 \n255\n0 1 2\n3 4 5\n");
  PgmImage img = read_pgm(p.string());
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  CHECK(img.pixels == std::vector<std::uint16_t>({0, 1, 2, 3, 4, 5}));
}

TEST_CASE("PGM reader rejects defects and names the file") {
  auto bad = [](const std::string& name, const std::string& bytes) {
    auto p = scratch(name);
    spit(p, bytes);
    return p.string();
  };
  CHECK_THROWS_AS(read_pgm(scratch("missing.pgm").string()), IoError);
  CHECK_THROWS_AS(read_pgm(bad("magic.pgm", "P6\n1 1\n255\n0")), IoError);
  CHECK_THROWS_AS(read_pgm(bad("dims.pgm", "P2\n0 2\n255\n")), IoError);
  CHECK_THROWS_AS(read_pgm(bad("maxval.pgm", "P2\n1 1\n70000\n0\n")), IoError);
  CHECK_THROWS_AS(read_pgm(bad("range.pgm", "P2\n2 1\n9\n3 10\n")), IoError);
  CHECK_THROWS_AS(read_pgm(bad("token.pgm", "P2\n2 1\n9\n3 x\n")), IoError);
  CHECK_THROWS_AS(read_pgm(bad("short.pgm", "P5\n2 2\n255\nab")), IoError);
  try {
    read_pgm(bad("named.pgm", "P6\nnope"));
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("named.pgm") != std::string::npos);
  }
}

TEST_CASE("CSV round-trips doubles exactly") {
  Eigen::MatrixXd m(2, 3);
  m << 0.1, 1.0 / 3.0, -2.5e-7,
       1e300, 4503599627370497.0, 3.141592653589793;
  auto p = scratch("vals.csv");
  write_csv(p.string(), m);
  Eigen::MatrixXd back = read_csv(p.string());
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) CHECK(back(r, c) == m(r, c));

  // short representations stay short
  Eigen::MatrixXd half(1, 2);
  half << 0.5, 1.0;
  auto p2 = scratch("half.csv");
  write_csv(p2.string(), half);
  CHECK(slurp(p2) == "0.5,1\n");
}

TEST_CASE("CSV reader tolerates spacing, CRLF and blank lines") {
  auto p = scratch("loose.csv");
  spit(p, " 1.5 , 2.5 \r\n\r\n-3,4e2\r\n");
  Eigen::MatrixXd m = read_csv(p.string());
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0) == 1.5);
  CHECK(m(0, 1) == 2.5);
  CHECK(m(1, 0) == -3.0);
  CHECK(m(1, 1) == 400.0);
}

TEST_CASE("CSV reader rejects defects") {
  auto bad = [](const std::string& name, const std::string& bytes) {
    auto p = scratch(name);
    spit(p, bytes);
    return p.string();
  };
  CHECK_THROWS_AS(read_csv(scratch("missing.csv").string()), IoError);
  CHECK_THROWS_AS(read_csv(bad("ragged.csv", "1,2\n3\n")), IoError);
  CHECK_THROWS_AS(read_csv(bad("word.csv", "1,abc\n")), IoError);
  CHECK_THROWS_AS(read_csv(bad("empty.csv", "\n\n")), IoError);
}

TEST_CASE("matrices become grid fields with fixed orientation") {
  SUBCASE("single row or column is a 1D grid") {
    Eigen::MatrixXd row(1, 5);
    row << 1, 2, 3, 4, 5;
    ScalarField f = field_from_matrix(row, "t");
    CHECK(f.grid.dim == 1);
    CHECK(f.grid.n == 5);
    CHECK(f.v[3] == 4.0);
    ScalarField g = field_from_matrix(row.transpose(), "t");
    CHECK(g.grid.dim == 1);
    CHECK((g.v - f.v).abs().maxCoeff() == 0.0);
  }
  SUBCASE("square matrix rows index the first grid axis") {
    Eigen::MatrixXd sq(3, 3);
    sq << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    ScalarField f = field_from_matrix(sq, "t");
    CHECK(f.grid.dim == 2);
    CHECK(f.v[flat(f.grid, 1, 2)] == 6.0);
    CHECK(f.v[flat(f.grid, 2, 0)] == 7.0);
  }
  SUBCASE("other shapes are rejected") {
    CHECK_THROWS_AS(field_from_matrix(Eigen::MatrixXd::Zero(2, 3), "t"),
                    IoError);
    CHECK_THROWS_AS(field_from_matrix(Eigen::MatrixXd::Zero(1, 1), "t"),
                    IoError);
  }
}

TEST_CASE("measure export and re-import") {
  Grid g{2, 17};
  Measure m = tsup::blob_measure(g, 0.4, 0.55, 0.12);

  SUBCASE("the CSV path is exact") {
    ScalarField f = field_from_matrix(matrix_from_measure(m), "t");
    CHECK(f.grid.dim == 2);
    CHECK((f.v - m.mass).abs().maxCoeff() == 0.0);
  }
  SUBCASE("the PGM path quantizes to the stated depth") {
    PgmImage img = pgm_from_measure(m, 65535);
    CHECK(img.width == 17);
    CHECK(img.height == 17);
    CHECK(*std::max_element(img.pixels.begin(), img.pixels.end()) == 65535);
    Measure back = normalize(field_from_pgm(img, "t"));
    CHECK(0.5 * (back.mass - m.mass).abs().sum() <= 1e-4);
  }
  SUBCASE("1D measures render as one row") {
    Grid g1{1, 33};
    Measure m1 = tsup::trunc_gaussian_1d(g1, 0.5, 0.1);
    PgmImage img = pgm_from_measure(m1, 255);
    CHECK(img.width == 33);
    CHECK(img.height == 1);
    ScalarField f = field_from_pgm(img, "t");
    CHECK(f.grid.dim == 1);
    CHECK(f.grid.n == 33);
  }
}

TEST_CASE("iteration reports serialize as stable JSON lines") {
  IterationReport rep;
  rep.t = 3;
  rep.dual_values = {0.5, 0.25};
  rep.objective = 0.375;
  rep.stationarity = 0.001953125;
  rep.tau = 0.5;
  rep.eta = {1.0, 0.5};
  CHECK(report_json_line(rep) ==
        "{\"t\":3,\"dual_values\":[0.5,0.25],\"objective\":0.375,"
        "\"stationarity\":0.001953125,\"tau\":0.5,\"eta\":[1,0.5]}");

  // non-dyadic payloads survive a parse round trip bit for bit
  rep.dual_values = {0.1, 2.0 / 3.0};
  rep.objective = 0.1 + 2.0 / 3.0;
  nlohmann::json j = nlohmann::json::parse(report_json_line(rep));
  CHECK(j["t"] == 3);
  CHECK(j["dual_values"][0].get<double>() == 0.1);
  CHECK(j["dual_values"][1].get<double>() == 2.0 / 3.0);
  CHECK(j["objective"].get<double>() == rep.objective);
  CHECK(j["eta"].size() == 2);

  IterationReport rep2 = rep;
  rep2.t = 4;
  auto p = scratch("report.jsonl");
  write_report(p.string(), {rep, rep2});
  std::string bytes = slurp(p);
  CHECK(bytes == report_json_line(rep) + "\n" + report_json_line(rep2) + "\n");
}
