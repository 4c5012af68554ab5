#pragma once

// Matrix ingestion: Matrix Market (array and coordinate; real, integer,
// complex and pattern; general, symmetric, skew-symmetric and hermitian) and
// JSON {rows, cols, entries: [[re, im], ...]} with row-major entries.
// Failures throw IngestError.

#include <string>

#include "rittcalc/numlin.hpp"

namespace rittcalc::io {

ComplexMatrix parse_matrix_market(const std::string& text);
ComplexMatrix parse_json_matrix(const std::string& text);

// Picks the format from the content: a leading '{' is JSON, a
// %%MatrixMarket banner is Matrix Market.
ComplexMatrix parse_matrix(const std::string& text);
ComplexMatrix read_matrix(const std::string& path);

// array complex general.
std::string to_matrix_market(const ComplexMatrix& m);
std::string to_json_matrix(const ComplexMatrix& m);

}  // namespace rittcalc::io
