#include "qmeas/json_io.hpp"

namespace qmeas {

Json encode_complex(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex decode_complex(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw ParseError("complex scalar must be a number or [re, im]");
}

Json encode_matrix(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(encode_complex(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix decode_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (const auto& row : j) {
    if (!row.is_array()) throw ParseError("matrix row must be an array");
    if (cols == 0) cols = row.size();
    if (row.size() != cols || cols == 0) throw ValidationError("matrix rows have uneven length");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = decode_complex(j[r][c]);
  }
  return m;
}

Matrix decode_square_matrix(const Json& j) {
  Matrix m = decode_matrix(j);
  if (m.rows() != m.cols()) throw ValidationError("matrix must be square");
  return m;
}

Json encode_density(const DensityState& rho) {
  Json out;
  out["null"] = rho.is_null();
  if (!rho.is_null()) out["matrix"] = encode_matrix(rho.matrix());
  return out;
}

}  // namespace qmeas
