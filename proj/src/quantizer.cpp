#include "qcs/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcs {

std::string to_string(QuantizerKind kind) {
  switch (kind) {
    case QuantizerKind::uniform_unsaturated: return "uniform";
    case QuantizerKind::saturated: return "saturated";
    case QuantizerKind::one_bit: return "onebit";
  }
  return "unknown";
}

QuantizerKind quantizer_kind_from_string(const std::string& name) {
  if (name == "uniform") return QuantizerKind::uniform_unsaturated;
  if (name == "saturated") return QuantizerKind::saturated;
  if (name == "onebit") return QuantizerKind::one_bit;
  throw std::invalid_argument("unknown quantizer kind '" + name + "'");
}

double QuantizerSpec::bin_width() const {
  for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
    const double w = thresholds[i + 1] - thresholds[i];
    if (std::isfinite(w)) return w;
  }
  return kInf;
}

void QuantizerSpec::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("QuantizerSpec: " + what); };
  if (bit_depth < 1 || bit_depth > 24) fail("bit depth out of range");
  const std::size_t L = std::size_t{1} << bit_depth;
  if (codes.size() != L) fail("expected 2^B codes");
  if (thresholds.size() != L + 1) fail("expected 2^B + 1 thresholds");
  for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
    if (!(thresholds[i] < thresholds[i + 1])) {
      fail("thresholds not strictly increasing at index " + std::to_string(i));
    }
  }
  switch (kind) {
    case QuantizerKind::one_bit:
      if (bit_depth != 1 || thresholds[0] != -kInf || thresholds[1] != 0.0 || thresholds[2] != kInf) {
        fail("one-bit quantizer must have thresholds (-inf, 0, +inf)");
      }
      return;  // codes are +-0 by convention
    case QuantizerKind::uniform_unsaturated:
      if (!std::isfinite(thresholds.front()) || !std::isfinite(thresholds.back())) {
        fail("unsaturated quantizer needs finite end thresholds");
      }
      break;
    case QuantizerKind::saturated:
      if (thresholds.front() != -kInf || thresholds.back() != kInf) {
        fail("saturated quantizer needs infinite end thresholds");
      }
      break;
  }
  if (bit_depth < 2) fail("multi-bit quantizer needs B >= 2");
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const bool last = i + 1 == codes.size();
    const bool inside = codes[i] >= thresholds[i] &&
                        (codes[i] < thresholds[i + 1] || (last && codes[i] <= thresholds[i + 1]));
    if (!std::isfinite(codes[i]) || !inside) fail("code " + std::to_string(i) + " outside its bin");
  }
}

QuantizerSpec make_uniform(int bit_depth, double y_abs_max) {
  if (bit_depth < 2) throw std::invalid_argument("make_uniform: B must be >= 2");
  if (!(y_abs_max > 0.0) || !std::isfinite(y_abs_max)) {
    throw std::invalid_argument("make_uniform: y_abs_max must be positive and finite");
  }
  QuantizerSpec q;
  q.kind = QuantizerKind::uniform_unsaturated;
  q.bit_depth = bit_depth;
  const int L = 1 << bit_depth;
  q.thresholds.resize(L + 1);
  for (int k = 0; k <= L; ++k) {
    q.thresholds[k] = y_abs_max * static_cast<double>(2 * k - L) / L;
  }
  q.codes.resize(L);
  for (int k = 0; k < L; ++k) q.codes[k] = 0.5 * (q.thresholds[k] + q.thresholds[k + 1]);
  return q;
}

QuantizerSpec make_saturated_equiprobable(int bit_depth, double meas_variance) {
  if (bit_depth < 2) throw std::invalid_argument("make_saturated_equiprobable: B must be >= 2");
  if (!(meas_variance > 0.0)) {
    throw std::invalid_argument("make_saturated_equiprobable: variance must be positive");
  }
  QuantizerSpec q;
  q.kind = QuantizerKind::saturated;
  q.bit_depth = bit_depth;
  const int L = 1 << bit_depth;
  const double scale = std::sqrt(meas_variance);
  q.thresholds.resize(L + 1);
  q.thresholds[0] = -kInf;
  q.thresholds[L] = kInf;
  for (int k = 1; k < L; ++k) {
    q.thresholds[k] = scale * special::std_normal_quantile(static_cast<double>(k) / L);
  }
  // Make the quantiles exactly antisymmetric about the middle threshold.
  q.thresholds[L / 2] = 0.0;
  for (int k = 1; k < L / 2; ++k) q.thresholds[L - k] = -q.thresholds[k];

  q.codes.resize(L);
  for (int k = 1; k + 1 < L; ++k) q.codes[k] = 0.5 * (q.thresholds[k] + q.thresholds[k + 1]);
  // Outer bins are unbounded: mirror the neighbouring interior width outward.
  q.codes[0] = q.thresholds[1] - 0.5 * (q.thresholds[2] - q.thresholds[1]);
  q.codes[L - 1] = q.thresholds[L - 1] + 0.5 * (q.thresholds[L - 1] - q.thresholds[L - 2]);
  return q;
}

QuantizerSpec make_onebit() {
  QuantizerSpec q;
  q.kind = QuantizerKind::one_bit;
  q.bit_depth = 1;
  q.thresholds = {-kInf, 0.0, kInf};
  q.codes = {-0.0, 0.0};
  return q;
}

namespace {
std::string out_of_range_message(std::size_t index, double value) {
  std::ostringstream os;
  os.precision(17);
  os << "quantize: sample y[" << index << "] = " << value << " lies outside the quantizer range";
  return os.str();
}
}  // namespace

SampleOutOfRange::SampleOutOfRange(std::size_t index, double value)
    : std::out_of_range(out_of_range_message(index, value)), index_(index), value_(value) {}

int bin_index(const QuantizerSpec& q, double v) {
  if (std::isnan(v)) return -1;
  const auto& th = q.thresholds;
  const auto it = std::upper_bound(th.begin(), th.end(), v);
  const auto b = static_cast<int>(it - th.begin()) - 1;
  const int L = static_cast<int>(q.levels());
  if (b < 0) return -1;
  if (b >= L) {
    // v >= u_L: only the attained finite top endpoint is in range.
    return v == th.back() ? L - 1 : -1;
  }
  return b;
}

Quantized quantize(const QuantizerSpec& q, std::span<const double> y) {
  Quantized out;
  out.codes.resize(y.size());
  out.bins.resize(y.size());
  const bool one_bit = q.kind == QuantizerKind::one_bit;
  if (one_bit) out.signs.resize(y.size());
  for (std::size_t m = 0; m < y.size(); ++m) {
    const int b = bin_index(q, y[m]);
    if (b < 0) throw SampleOutOfRange(m, y[m]);
    out.bins[m] = b;
    if (one_bit) {
      out.codes[m] = 0.0;
      out.signs[m] = b == 1 ? 1 : -1;
    } else {
      out.codes[m] = q.codes[b];
    }
  }
  return out;
}

ErrorDomain error_domain(const QuantizerSpec& q, std::span<const int> bins) {
  const int L = static_cast<int>(q.levels());
  for (std::size_t m = 0; m < bins.size(); ++m) {
    if (bins[m] < 0 || bins[m] >= L) {
      throw std::invalid_argument("error_domain: invalid bin index at " + std::to_string(m));
    }
  }
  if (q.kind == QuantizerKind::one_bit) {
    SignDomain d;
    d.signs.reserve(bins.size());
    for (int b : bins) d.signs.push_back(b == 1 ? 1 : -1);
    return d;
  }
  BoxDomain d;
  d.intervals.reserve(bins.size());
  for (int b : bins) {
    const double v = q.codes[b];
    d.intervals.push_back({v - q.thresholds[b + 1], v - q.thresholds[b]});
  }
  return d;
}

bool in_error_domain(const ErrorDomain& domain, std::span<const double> e, double tol) {
  if (const auto* box = std::get_if<BoxDomain>(&domain)) {
    if (box->intervals.size() != e.size()) return false;
    for (std::size_t m = 0; m < e.size(); ++m) {
      const Interval& iv = box->intervals[m];
      if (!(e[m] >= iv.lower - tol && e[m] <= iv.upper + tol)) return false;
    }
    return true;
  }
  const auto& signs = std::get<SignDomain>(domain).signs;
  if (signs.size() != e.size()) return false;
  double sq = 0.0;
  for (std::size_t m = 0; m < e.size(); ++m) {
    if (e[m] * signs[m] > tol) return false;
    sq += e[m] * e[m];
  }
  return std::abs(std::sqrt(sq) - 1.0) <= tol;
}

}  // namespace qcs
