#pragma once

#include <optional>
#include <string>

#include "curvlab/jets.hpp"
#include "curvlab/polymetric.hpp"
#include "curvlab/tensor.hpp"

namespace curvlab {

/// Shared tensor interchange:
///   {"m": int, "g": [[...]] (optional, defaults to identity),
///    "rank": int, "data": [flat row-major reals]}
struct TensorFile {
    int m = 0;
    Metric g = Metric::identity(1);
    bool had_metric = false;
    DenseTensor tensor;
};

TensorFile parse_tensor_json(const std::string& text);
TensorFile load_tensor_json(const std::string& path);
std::string tensor_to_json(const DenseTensor& t, const Metric* g = nullptr);
void save_tensor_json(const std::string& path, const DenseTensor& t, const Metric* g = nullptr);

/// Jet interchange: {"m": int, "T": [flat], "D": [flat], "flags": {...}}.
CurvJet parse_jet_json(const std::string& text);
std::string jet_to_json(const CurvJet& j);

/// Polynomial metric interchange:
///   {"m": int, "terms": [{"i": int, "j": int, "exponents": [ints],
///    "coeff": real}], "domain_radius": real}
PolynomialMetric parse_polymetric_json(const std::string& text);
std::string polymetric_to_json(const PolynomialMetric& pm);

}  // namespace curvlab
