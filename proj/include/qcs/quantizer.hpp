#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qcs/special_math.hpp"

namespace qcs {

enum class QuantizerKind { uniform_unsaturated, saturated, one_bit };

std::string to_string(QuantizerKind kind);
QuantizerKind quantizer_kind_from_string(const std::string& name);

/// Scalar quantizer: bin i is [thresholds[i], thresholds[i+1]) with code codes[i].
/// The top finite threshold of an unsaturated quantizer belongs to the last bin.
struct QuantizerSpec {
  QuantizerKind kind = QuantizerKind::uniform_unsaturated;
  int bit_depth = 0;
  std::vector<double> thresholds;
  std::vector<double> codes;

  std::size_t levels() const { return codes.size(); }
  /// Width of the first finite bin; for the uniform quantizer, r.
  double bin_width() const;

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;

  bool operator==(const QuantizerSpec&) const = default;
};

QuantizerSpec make_uniform(int bit_depth, double y_abs_max);
QuantizerSpec make_saturated_equiprobable(int bit_depth, double meas_variance);
QuantizerSpec make_onebit();

/// sgn with sgn(0) = +1.
inline int sign_of(double v) { return v < 0.0 ? -1 : 1; }

/// Raised when an unsaturated quantizer receives a sample outside [u_0, u_L].
class SampleOutOfRange : public std::out_of_range {
 public:
  SampleOutOfRange(std::size_t index, double value);
  std::size_t index() const { return index_; }
  double value() const { return value_; }

 private:
  std::size_t index_;
  double value_;
};

struct Quantized {
  std::vector<double> codes;  // z; all zeros for the one-bit quantizer
  std::vector<int> bins;
  std::vector<int> signs;     // +-1 per measurement; only filled for one-bit
};

int bin_index(const QuantizerSpec& q, double v);
Quantized quantize(const QuantizerSpec& q, std::span<const double> y);

/// Per-measurement intervals for e = z - y (multi-bit).
struct BoxDomain {
  std::vector<Interval> intervals;
};

/// { e : sgn(e) = -signs, ||e||_2 = 1 } (one-bit).
struct SignDomain {
  std::vector<int> signs;
};

using ErrorDomain = std::variant<BoxDomain, SignDomain>;

ErrorDomain error_domain(const QuantizerSpec& q, std::span<const int> bins);

/// Whether e lies in the (closure of the) domain, up to `tol`.
bool in_error_domain(const ErrorDomain& domain, std::span<const double> e, double tol = 1e-12);

}  // namespace qcs
