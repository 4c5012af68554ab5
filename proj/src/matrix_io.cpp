#include "rittcalc/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rittcalc/errors.hpp"

namespace rittcalc::io {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Next line that is neither blank nor a % comment.
bool data_line(std::istringstream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '%') continue;
    return true;
  }
  return false;
}

double parse_double(std::istringstream& fields, int line_no) {
  double v;
  if (!(fields >> v)) throw IngestError("Matrix Market: bad number on data line " + std::to_string(line_no));
  return v;
}

}  // namespace

ComplexMatrix parse_matrix_market(const std::string& text) {
  std::istringstream in(text);
  std::string banner;
  if (!std::getline(in, banner)) throw IngestError("Matrix Market: empty input");
  std::istringstream b(banner);
  std::string tag, object, format, field, symmetry;
  b >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw IngestError("Matrix Market: missing %%MatrixMarket banner");
  object = lower(object), format = lower(format), field = lower(field), symmetry = lower(symmetry);
  if (object != "matrix") throw IngestError("Matrix Market: object '" + object + "' is not 'matrix'");
  if (format != "array" && format != "coordinate")
    throw IngestError("Matrix Market: unknown format '" + format + "'");
  if (field != "real" && field != "integer" && field != "complex" && field != "pattern")
    throw IngestError("Matrix Market: unknown field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" && symmetry != "hermitian")
    throw IngestError("Matrix Market: unknown symmetry '" + symmetry + "'");
  if (format == "array" && field == "pattern") throw IngestError("Matrix Market: pattern needs coordinate format");
  if (symmetry == "hermitian" && field != "complex") throw IngestError("Matrix Market: hermitian needs complex field");
  const bool cplx = field == "complex";

  std::string line;
  if (!data_line(in, line)) throw IngestError("Matrix Market: missing size line");
  std::istringstream size(line);
  long rows = -1, cols = -1, nnz = -1;
  size >> rows >> cols;
  if (format == "coordinate") size >> nnz;
  if (!size || rows < 0 || cols < 0 || (format == "coordinate" && nnz < 0))
    throw IngestError("Matrix Market: bad size line '" + line + "'");
  if (symmetry != "general" && rows != cols) throw IngestError("Matrix Market: symmetric storage needs a square matrix");

  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
  auto place = [&](long i, long j, Complex v) {
    m(i, j) = v;
    if (i == j) {
      if (symmetry == "skew-symmetric" && v != Complex(0.0))
        throw IngestError("Matrix Market: nonzero diagonal in skew-symmetric storage");
      return;
    }
    if (symmetry == "symmetric") m(j, i) = v;
    if (symmetry == "skew-symmetric") m(j, i) = -v;
    if (symmetry == "hermitian") m(j, i) = std::conj(v);
  };
  auto read_value = [&](std::istringstream& f, int line_no) -> Complex {
    if (field == "pattern") return 1.0;
    const double re = parse_double(f, line_no);
    const double im = cplx ? parse_double(f, line_no) : 0.0;
    return {re, im};
  };

  int line_no = 0;
  if (format == "array") {
    // Column-major; symmetric storage lists the lower triangle only.
    for (long j = 0; j < cols; ++j) {
      const long i0 = symmetry == "general" ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j);
      for (long i = i0; i < rows; ++i) {
        ++line_no;
        if (!data_line(in, line)) throw IngestError("Matrix Market: expected more array entries");
        std::istringstream f(line);
        place(i, j, read_value(f, line_no));
      }
    }
  } else {
    for (long k = 0; k < nnz; ++k) {
      ++line_no;
      if (!data_line(in, line)) throw IngestError("Matrix Market: expected " + std::to_string(nnz) + " entries");
      std::istringstream f(line);
      long i, j;
      if (!(f >> i >> j)) throw IngestError("Matrix Market: bad index on data line " + std::to_string(line_no));
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw IngestError("Matrix Market: index out of range on data line " + std::to_string(line_no));
      if (symmetry != "general" && j > i)
        throw IngestError("Matrix Market: upper-triangle entry in symmetric storage");
      place(i - 1, j - 1, read_value(f, line_no));
    }
  }
  if (data_line(in, line)) throw IngestError("Matrix Market: trailing data after the last entry");
  return m;
}

ComplexMatrix parse_json_matrix(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IngestError(std::string("JSON matrix: ") + e.what());
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw IngestError("JSON matrix: expected an object with rows, cols and entries");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw IngestError("JSON matrix: rows and cols must be integers");
  const long rows = j["rows"].get<long>(), cols = j["cols"].get<long>();
  const json& e = j["entries"];
  if (rows < 0 || cols < 0) throw IngestError("JSON matrix: negative dimension");
  if (!e.is_array() || static_cast<long>(e.size()) != rows * cols)
    throw IngestError("JSON matrix: entries must hold rows * cols values");
  ComplexMatrix m(rows, cols);
  for (long k = 0; k < rows * cols; ++k) {
    const json& v = e[static_cast<std::size_t>(k)];
    Complex z;
    if (v.is_number()) {
      z = v.get<double>();
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      z = {v[0].get<double>(), v[1].get<double>()};
    } else {
      throw IngestError("JSON matrix: entry " + std::to_string(k) + " is not a number or [re, im]");
    }
    m(k / cols, k % cols) = z;
  }
  return m;
}

ComplexMatrix parse_matrix(const std::string& text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  if (p == std::string::npos) throw IngestError("empty matrix input");
  if (text[p] == '{') return parse_json_matrix(text);
  if (text.compare(p, 14, "%%MatrixMarket") == 0) return parse_matrix_market(text.substr(p));
  throw IngestError("unrecognized matrix format (expected JSON or Matrix Market)");
}

ComplexMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str());
}

std::string to_matrix_market(const ComplexMatrix& m) {
  std::ostringstream out;
  out.precision(17);
  out << "%%MatrixMarket matrix array complex general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out << m(i, j).real() << ' ' << m(i, j).imag() << '\n';
  return out.str();
}

std::string to_json_matrix(const ComplexMatrix& m) {
  nlohmann::ordered_json j{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", nlohmann::ordered_json::array()}};
  for (Index i = 0; i < m.rows(); ++i)
    for (Index k = 0; k < m.cols(); ++k) j["entries"].push_back({m(i, k).real(), m(i, k).imag()});
  return j.dump() + "\n";
}

}  // namespace rittcalc::io
