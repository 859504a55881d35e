#pragma once

#include <string>

#include "pcone/linalg.hpp"

namespace pcone {

/// JSON matrix format: {"n": int, "re": [[...]], "im": [[...]]}.
/// Numbers are emitted at 17 significant digits so save/load round-trips
/// bit-exactly.

std::string matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const std::string& text);

void save_matrix(const std::string& path, const CMatrix& m);

/// Raw load, no symmetrization (for general invertible inputs).
CMatrix load_matrix(const std::string& path);

/// Hermitian consumers symmetrize on load.
HermitianMatrix load_hermitian(const std::string& path);
PosDefMatrix load_posdef(const std::string& path);

} // namespace pcone
