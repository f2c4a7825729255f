#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcs/model.hpp"
#include "qcs/quantizer.hpp"

namespace qcs {

/// Shortest-safe decimal form: 17 significant digits, "inf"/"-inf"/"nan".
std::string format_double(double v);
/// Inverse of format_double; throws std::invalid_argument on trailing garbage.
double parse_double(const std::string& s);

/// {"kind", "bit_depth", "thresholds": [str...], "codes": [str...]}; the
/// values are strings so that they round-trip bit-exactly.
nlohmann::json quantizer_to_json(const QuantizerSpec& q);
QuantizerSpec quantizer_from_json(const nlohmann::json& j);

// Binary problem container, all fields little-endian:
//   "QCSPROB1"
//   u32 kind, u32 bit_depth, u64 M, u64 N, u64 levels
//   f64 thresholds[levels + 1], f64 codes[levels]
//   f64 sigma2
//   f64 A[M * N] (row-major)
//   i32 bins[M]
//   u8 has_truth,        [f64 truth[N]]
//   u8 has_measurements, [f64 y[M]]
// z, signs and the error domain are rebuilt from the bins on load.
std::vector<std::uint8_t> serialize_problem(const Problem& p);
Problem deserialize_problem(const std::vector<std::uint8_t>& bytes);

void save_problem(const Problem& p, const std::filesystem::path& path);
Problem load_problem(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes);
/// fnv1a64 of the serialized problem as 16 lowercase hex digits.
std::string problem_hash(const Problem& p);

}  // namespace qcs
