#include "numrad/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace numrad {

namespace {

enum class Layout { array, coordinate };
enum class Field { real, complex, integer, pattern };
enum class Symmetry { general, symmetric, hermitian, skew };

struct Header {
  Layout layout;
  Field field;
  Symmetry symmetry;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

Header parse_header(const std::string& line) {
  std::istringstream ss(line);
  std::string banner, object, layout, field, symmetry;
  ss >> banner >> object >> layout >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw InputError("missing %%MatrixMarket banner");
  if (lower(object) != "matrix") throw InputError("unsupported Matrix Market object: " + object);

  Header h{};
  layout = lower(layout);
  if (layout == "array") h.layout = Layout::array;
  else if (layout == "coordinate") h.layout = Layout::coordinate;
  else throw InputError("unsupported Matrix Market format: " + layout);

  field = lower(field);
  if (field == "real" || field == "double") h.field = Field::real;
  else if (field == "complex") h.field = Field::complex;
  else if (field == "integer") h.field = Field::integer;
  else if (field == "pattern") h.field = Field::pattern;
  else throw InputError("unsupported Matrix Market field: " + field);

  symmetry = lower(symmetry);
  if (symmetry == "general") h.symmetry = Symmetry::general;
  else if (symmetry == "symmetric") h.symmetry = Symmetry::symmetric;
  else if (symmetry == "hermitian") h.symmetry = Symmetry::hermitian;
  else if (symmetry == "skew-symmetric") h.symmetry = Symmetry::skew;
  else throw InputError("unsupported Matrix Market symmetry: " + symmetry);

  if (h.layout == Layout::array && h.field == Field::pattern)
    throw InputError("pattern field requires coordinate format");
  return h;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%') continue;
    return true;
  }
  return false;
}

Complex read_value(std::istringstream& ss, Field field) {
  double re = 0.0, im = 0.0;
  switch (field) {
    case Field::pattern:
      return {1.0, 0.0};
    case Field::complex:
      if (!(ss >> re >> im)) throw InputError("malformed complex entry");
      return {re, im};
    default:
      if (!(ss >> re)) throw InputError("malformed real entry");
      return {re, 0.0};
  }
}

void place(ComplexMatrix& a, Eigen::Index i, Eigen::Index j, Complex v, Symmetry sym) {
  a(i, j) = v;
  if (i == j) return;
  switch (sym) {
    case Symmetry::general: break;
    case Symmetry::symmetric: a(j, i) = v; break;
    case Symmetry::hermitian: a(j, i) = std::conj(v); break;
    case Symmetry::skew: a(j, i) = -v; break;
  }
}

}  // namespace

ComplexMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty Matrix Market stream");
  const Header h = parse_header(line);

  if (!next_data_line(in, line)) throw InputError("missing size line");
  std::istringstream size_line(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(size_line >> rows >> cols)) throw InputError("malformed size line");
  if (h.layout == Layout::coordinate && !(size_line >> nnz)) throw InputError("malformed size line");
  if (rows <= 0 || rows != cols)
    throw InputError("matrix must be square (got " + std::to_string(rows) + "x" +
                     std::to_string(cols) + ")");

  ComplexMatrix a = ComplexMatrix::Zero(rows, cols);
  if (h.layout == Layout::coordinate) {
    for (long k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line)) throw InputError("truncated coordinate data");
      std::istringstream ss(line);
      long i = 0, j = 0;
      if (!(ss >> i >> j)) throw InputError("malformed coordinate entry");
      if (i < 1 || i > rows || j < 1 || j > cols) throw InputError("coordinate index out of range");
      place(a, i - 1, j - 1, read_value(ss, h.field), h.symmetry);
    }
  } else {
    // column-major; symmetric variants store only the lower triangle
    for (long j = 0; j < cols; ++j) {
      const long first = h.symmetry == Symmetry::general ? 0
                         : h.symmetry == Symmetry::skew  ? j + 1
                                                         : j;
      for (long i = first; i < rows; ++i) {
        if (!next_data_line(in, line)) throw InputError("truncated array data");
        std::istringstream ss(line);
        place(a, i, j, read_value(ss, h.field), h.symmetry);
      }
    }
  }
  require_valid(a);
  return a;
}

ComplexMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_matrix_market(in);
}

void write_matrix_market(const ComplexMatrix& a, std::ostream& out) {
  require_valid(a);
  out << "%%MatrixMarket matrix array complex general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out << a(i, j).real() << ' ' << a(i, j).imag() << '\n';
}

void write_matrix_market(const ComplexMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_matrix_market(a, out);
}

}  // namespace numrad
