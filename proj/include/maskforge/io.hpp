#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "maskforge/cyclotomic.hpp"
#include "maskforge/decompose.hpp"
#include "maskforge/lattice.hpp"
#include "maskforge/subdivision.hpp"
#include "maskforge/trigpoly.hpp"
#include "maskforge/zerocond.hpp"

namespace maskforge::io {

using nlohmann::json;

/// Rationals are "p/q" strings; other values are {"order": N, "coords": [...]}.
json to_json(const Cyclotomic& c);
Cyclotomic cyclotomic_from_json(const json& j);
Rational rational_from_json(const json& j);

/// {"coefficients": [{"freq": [...], "value": ...}], "denominator": q (omitted when 1)}.
json to_json(const TrigPoly& t);
TrigPoly trigpoly_from_json(const json& j, std::size_t dim);

json to_json(const LambdaTable& table);
LambdaTable lambda_table_from_json(const json& j);

/// Input mask file.
struct MaskFile {
  std::size_t dim = 0;
  IntMatrix dilation;
  std::optional<std::vector<IntVec>> digits;
  std::optional<std::vector<IntVec>> dual_digits;
  TrigPoly mask;
  /// Set when the file gave polyphase components.
  std::optional<std::vector<TrigPoly>> polyphase;

  /// Builds the dilation context (NotDilation / UserDigitsInvalid) and, for
  /// polyphase input, assembles `mask`.
  DilationContext context();
};

MaskFile mask_file_from_json(const json& j);
MaskFile load_mask_file(const std::string& path);
json to_json(const MaskFile& file, const DilationContext& ctx);

/// {"order": n, "entries": [{"j": [...], "k": [...], "mask": ...}], "achieved_class": c}; tuples are 1-based.
json to_json(const IteratedDecomposition& it);
IteratedDecomposition iterated_from_json(const json& j, std::size_t dim);

json to_json(const RationalInterval& iv);
json to_json(const MatrixMask& mask);
json to_json(const IsotropyReport& r);
json to_json(const ConvergenceReport& r);
json to_json(const SmoothnessReport& r);

/// CSV rows: d integer columns, then width "p/q" value columns. Lines starting
/// with '#' and a non-numeric header row are skipped.
Sequence read_sequence_csv(std::istream& in, std::size_t dim);
void write_refined_csv(std::ostream& out, const std::vector<RefinedSample>& samples, std::size_t dim);

json read_json_file(const std::string& path);

}  // namespace maskforge::io
