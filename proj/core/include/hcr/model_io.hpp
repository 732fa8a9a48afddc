#pragma once

#include "hcr/model.hpp"

#include <filesystem>
#include <iosfwd>

namespace hcr {

/// Format tag on the first line of every model file.
inline constexpr const char* kModelFormatTag = "hcr-model 1";

/// Line-oriented text model file:
///
///   hcr-model 1
///   variables b1 b2
///   order 1
///   degree 9
///   normalizer laplace
///   prune_sigmas none
///   param b1 laplace <location> <scale>
///   param b2 laplace <location> <scale>
///   dim 4
///   n 6468
///   coefficients <count>
///   0 0 0 0 1
///   ...
///
/// Coefficient lines hold the index tuple then the value, lexicographic
/// order. Doubles use shortest round-trip text so reading is exact.
void write_model(std::ostream& out, const Model& model);
Model read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

} // namespace hcr
