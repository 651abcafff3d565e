#include "qfi/matrix_io.hpp"

#include <cmath>

#include "qfi/errors.hpp"
#include "qfi/tolerances.hpp"

namespace qfi {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ArgumentError("matrix_to_json: matrix must be square");
  const Eigen::Index d = m.rows();
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(d * d));
  im.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  return nlohmann::json{{"dim", d}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im"))
    throw ArgumentError("matrix: expected an object with dim, re, im");
  if (!j["dim"].is_number_integer() || j["dim"].get<Eigen::Index>() <= 0)
    throw ArgumentError("matrix: dim must be a positive integer");
  const Eigen::Index d = j["dim"].get<Eigen::Index>();
  if (d > kMaxDenseDim) throw ResourceError("matrix: dim exceeds the dense budget");
  if (!j["re"].is_array() || !j["im"].is_array())
    throw ArgumentError("matrix: re and im must be arrays");
  if (j["re"].size() != static_cast<std::size_t>(d * d) ||
      j["im"].size() != static_cast<std::size_t>(d * d))
    throw ArgumentError("matrix: re and im must hold dim*dim entries, row-major");

  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const auto& re = j["re"][static_cast<std::size_t>(i * d + k)];
      const auto& im = j["im"][static_cast<std::size_t>(i * d + k)];
      if (!re.is_number() || !im.is_number())
        throw ArgumentError("matrix: entries must be numbers");
      const double re_v = re.get<double>();
      const double im_v = im.get<double>();
      if (!std::isfinite(re_v) || !std::isfinite(im_v))
        throw ArgumentError("matrix: entries must be finite");
      m(i, k) = Complex(re_v, im_v);
    }
  }
  return m;
}

}  // namespace qfi
