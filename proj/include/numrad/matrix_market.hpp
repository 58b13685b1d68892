#pragma once

#include <iosfwd>
#include <string>

#include "numrad/linalg.hpp"

namespace numrad {

// Matrix Market support. Reading accepts `matrix {array|coordinate}
// {real|complex|integer|pattern} {general|symmetric|hermitian|skew-symmetric}`
// and always returns a dense complex square matrix. Writing emits
// `matrix array complex general` with 17 significant digits, which
// round-trips doubles exactly.

ComplexMatrix read_matrix_market(std::istream& in);
ComplexMatrix read_matrix_market(const std::string& path);

void write_matrix_market(const ComplexMatrix& a, std::ostream& out);
void write_matrix_market(const ComplexMatrix& a, const std::string& path);

}  // namespace numrad
