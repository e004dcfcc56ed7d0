#pragma once

#include <nlohmann/json.hpp>

#include "qmeas/config.hpp"
#include "qmeas/errors.hpp"
#include "qmeas/operator_core.hpp"

namespace qmeas {

using Json = nlohmann::ordered_json;

// Shared wire encoding: a complex scalar is [re, im]; a matrix is a row-major
// array of rows of complex scalars.

Json encode_complex(const Complex& z);
Complex decode_complex(const Json& j);

Json encode_matrix(const Matrix& m);
Matrix decode_matrix(const Json& j);

/// Real matrices may be written as plain numbers; complex entries as [re,im].
/// Throws ParseError on malformed input, ValidationError on non-square data.
Matrix decode_square_matrix(const Json& j);

Json encode_density(const DensityState& rho);

}  // namespace qmeas
