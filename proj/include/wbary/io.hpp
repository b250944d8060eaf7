#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wbary/barycenter.hpp"
#include "wbary/grid.hpp"

namespace wbary {

/** Raw PGM contents: row-major samples, top row first. */
struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  bool binary = false;  // P5 when true, P2 otherwise
  std::vector<std::uint16_t> pixels;
};

/** Reads P2 (ASCII) or P5 (binary) with maxval up to 65535; comments and
 *  arbitrary whitespace are accepted in the header. Throws IoError naming
 *  the file on any defect. */
PgmImage read_pgm(const std::string& path);

/** Writes the canonical form: "P2|P5\n<w> <h>\n<maxval>\n" followed by one
 *  ASCII row per line (P2) or raw samples, big-endian when maxval > 255
 *  (P5). Reading a canonical file and writing it back is byte-identical. */
void write_pgm(const std::string& path, const PgmImage& img);

/** Dense numeric CSV as a matrix (row-major file order). Rows must agree
 *  in length; values may be padded with spaces. Throws IoError naming the
 *  file on any defect. */
Eigen::MatrixXd read_csv(const std::string& path);

/** Writes a matrix as CSV with 17 significant digits, which round-trips
 *  doubles exactly and is byte-reproducible across runs. */
void write_csv(const std::string& path, const Eigen::MatrixXd& values);

/** Interprets a matrix as grid data: a single row or column is a 1D grid,
 *  a square matrix is a 2D grid with matrix row = first grid axis. Throws
 *  IoError (tagged with origin) for ragged shapes or grids under 2 nodes. */
ScalarField field_from_matrix(const Eigen::MatrixXd& values,
                              const std::string& origin);

/** Pixel intensities as raw (unnormalized) mass on the matching grid. */
ScalarField field_from_pgm(const PgmImage& img, const std::string& origin);

/** Measure rendered to pixel intensities, scaled so the peak mass maps to
 *  maxval; 1D measures become a single-row image. */
PgmImage pgm_from_measure(const Measure& m, int maxval = 65535,
                          bool binary = false);

Eigen::MatrixXd matrix_from_measure(const Measure& m);

/** One iteration report as a single-line JSON object (17 significant
 *  digits, fixed key order), suitable for JSON-lines streams. */
std::string report_json_line(const IterationReport& rep);

void write_report(const std::string& path,
                  const std::vector<IterationReport>& reports);

}  // namespace wbary
