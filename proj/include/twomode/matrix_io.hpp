// matrix_io.hpp — Plain-text matrix dumps ("re+imj" entries, tab separated, one row per line)

#pragma once

#include "twomode/fock.hpp"

#include <iosfwd>
#include <string>

namespace twomode {

// 17 significant digits, e.g. "0.5+1j", "-2-0.25j".
std::string format_complex(Complex z);
std::string format_real(double x);

void write_matrix_dump(std::ostream& os, const CMatrix& m);
// Inverse of write_matrix_dump; throws std::invalid_argument on malformed input.
CMatrix read_matrix_dump(std::istream& is);

}  // namespace twomode
