#include "wbary/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wbary/errors.hpp"

namespace wbary {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw IoError(path + ": " + what);
}

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int parse_int(const std::string& tok, const std::string& path,
              const std::string& what) {
  if (tok.empty()) fail(path, "unexpected end of file reading " + what);
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size())
    fail(path, "malformed " + what + " '" + tok + "'");
  return static_cast<int>(v);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

PgmImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::string magic = next_token(in);
  if (magic != "P2" && magic != "P5")
    fail(path, "not a P2/P5 PGM (magic '" + magic + "')");
  PgmImage img;
  img.binary = (magic == "P5");
  img.width = parse_int(next_token(in), path, "width");
  img.height = parse_int(next_token(in), path, "height");
  img.maxval = parse_int(next_token(in), path, "maxval");
  if (img.width < 1 || img.height < 1) fail(path, "non-positive dimensions");
  if (img.maxval < 1 || img.maxval > 65535)
    fail(path, "maxval " + std::to_string(img.maxval) + " out of [1, 65535]");
  const long count = static_cast<long>(img.width) * img.height;
  img.pixels.resize(count);
  if (img.binary) {
    // The header ends with exactly one whitespace byte before the raster;
    // next_token has already consumed it.
    const int bytes = img.maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), raw.size());
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
      fail(path, "truncated raster");
    for (long i = 0; i < count; ++i) {
      img.pixels[i] = bytes == 2
                          ? static_cast<std::uint16_t>(raw[2 * i] << 8 | raw[2 * i + 1])
                          : raw[i];
    }
  } else {
    for (long i = 0; i < count; ++i) {
      int v = parse_int(next_token(in), path, "sample");
      if (v < 0 || v > img.maxval) fail(path, "sample out of range");
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  }
  for (long i = 0; i < count; ++i)
    if (img.pixels[i] > img.maxval) fail(path, "sample out of range");
  return img;
}

void write_pgm(const std::string& path, const PgmImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");
  out << (img.binary ? "P5" : "P2") << '\n'
      << img.width << ' ' << img.height << '\n'
      << img.maxval << '\n';
  if (img.binary) {
    const int bytes = img.maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw;
    raw.reserve(img.pixels.size() * bytes);
    for (std::uint16_t p : img.pixels) {
      if (bytes == 2) raw.push_back(static_cast<unsigned char>(p >> 8));
      raw.push_back(static_cast<unsigned char>(p & 0xff));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), raw.size());
  } else {
    for (int r = 0; r < img.height; ++r) {
      for (int c = 0; c < img.width; ++c) {
        if (c) out << ' ';
        out << img.pixels[static_cast<long>(r) * img.width + c];
      }
      out << '\n';
    }
  }
  if (!out) fail(path, "write failed");
}

Eigen::MatrixXd read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = true;
    for (char ch : line)
      if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
    if (blank) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const char* s = cell.c_str();
      char* end = nullptr;
      double v = std::strtod(s, &end);
      while (end && *end && std::isspace(static_cast<unsigned char>(*end)))
        ++end;
      if (end == s || (end && *end))
        fail(path, "line " + std::to_string(lineno) + ": bad number '" +
                       cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(path, "line " + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(path, "no data rows");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  return m;
}

void write_csv(const std::string& path, const Eigen::MatrixXd& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      if (c) out << ',';
      out << fmt(values(r, c));
    }
    out << '\n';
  }
  if (!out) fail(path, "write failed");
}

ScalarField field_from_matrix(const Eigen::MatrixXd& values,
                              const std::string& origin) {
  ScalarField out;
  if (values.rows() == 1 || values.cols() == 1) {
    const Index n = values.size();
    if (n < 2) fail(origin, "grid needs at least 2 nodes");
    out.grid = Grid{1, static_cast<int>(n)};
    out.v.resize(n);
    for (Index i = 0; i < n; ++i)
      out.v[i] = values.rows() == 1 ? values(0, i) : values(i, 0);
  } else if (values.rows() == values.cols()) {
    const int n = static_cast<int>(values.rows());
    out.grid = Grid{2, n};
    out.v.resize(out.grid.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.v[flat(out.grid, i, j)] = values(i, j);
  } else {
    fail(origin, "expected a single row/column (1D) or square matrix (2D), got " +
                     std::to_string(values.rows()) + "x" +
                     std::to_string(values.cols()));
  }
  return out;
}

ScalarField field_from_pgm(const PgmImage& img, const std::string& origin) {
  Eigen::MatrixXd m(img.height, img.width);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c)
      m(r, c) = img.pixels[static_cast<long>(r) * img.width + c];
  return field_from_matrix(m, origin);
}

PgmImage pgm_from_measure(const Measure& m, int maxval, bool binary) {
  PgmImage img;
  img.maxval = maxval;
  img.binary = binary;
  if (m.grid.dim == 1) {
    img.width = m.grid.n;
    img.height = 1;
  } else {
    img.width = img.height = m.grid.n;
  }
  const double peak = m.mass.maxCoeff();
  const double scale = peak > 0 ? maxval / peak : 0.0;
  img.pixels.resize(m.mass.size());
  for (Index i = 0; i < m.mass.size(); ++i) {
    double v = std::nearbyint(m.mass[i] * scale);
    img.pixels[i] = static_cast<std::uint16_t>(
        std::min(std::max(v, 0.0), static_cast<double>(maxval)));
  }
  return img;
}

Eigen::MatrixXd matrix_from_measure(const Measure& m) {
  if (m.grid.dim == 1) {
    Eigen::MatrixXd out(1, m.grid.n);
    for (int i = 0; i < m.grid.n; ++i) out(0, i) = m.mass[i];
    return out;
  }
  Eigen::MatrixXd out(m.grid.n, m.grid.n);
  for (int i = 0; i < m.grid.n; ++i)
    for (int j = 0; j < m.grid.n; ++j) out(i, j) = m.mass[flat(m.grid, i, j)];
  return out;
}

std::string report_json_line(const IterationReport& rep) {
  std::string s = "{\"t\":" + std::to_string(rep.t) + ",\"dual_values\":[";
  for (size_t i = 0; i < rep.dual_values.size(); ++i) {
    if (i) s += ',';
    s += fmt(rep.dual_values[i]);
  }
  s += "],\"objective\":" + fmt(rep.objective);
  s += ",\"stationarity\":" + fmt(rep.stationarity);
  s += ",\"tau\":" + fmt(rep.tau);
  s += ",\"eta\":[";
  for (size_t i = 0; i < rep.eta.size(); ++i) {
    if (i) s += ',';
    s += fmt(rep.eta[i]);
  }
  s += "]}";
  return s;
}

void write_report(const std::string& path,
                  const std::vector<IterationReport>& reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");
  for (const IterationReport& rep : reports) out << report_json_line(rep) << '\n';
  if (!out) fail(path, "write failed");
}

}  // namespace wbary
