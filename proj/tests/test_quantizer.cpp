#include <cmath>
#include <vector>

#include <doctest.h>

#include "qcs/quantizer.hpp"
#include "qcs/rng.hpp"

using namespace qcs;

TEST_CASE("uniform quantizer layout") {
  const QuantizerSpec q = make_uniform(2, 1.0);
  REQUIRE(q.thresholds == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(q.codes == std::vector<double>{-0.75, -0.25, 0.25, 0.75});
  CHECK(q.bin_width() == 0.5);
  CHECK(q.levels() == 4);
  q.validate();
  CHECK_THROWS_AS(make_uniform(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform(3, 0.0), std::invalid_argument);
}

TEST_CASE("bin assignment on boundaries") {
  const QuantizerSpec q = make_uniform(2, 1.0);
  CHECK(bin_index(q, -1.0) == 0);
  CHECK(bin_index(q, -0.5) == 1);
  CHECK(bin_index(q, 0.0) == 2);
  CHECK(bin_index(q, 0.4999) == 2);
  CHECK(bin_index(q, 1.0) == 3);  // top endpoint is attained
  CHECK(bin_index(q, 1.0000001) == -1);
  CHECK(bin_index(q, -1.0000001) == -1);
  CHECK(bin_index(q, std::nan("")) == -1);
}

TEST_CASE("quantize reports the offending sample") {
  const QuantizerSpec q = make_uniform(3, 2.0);
  const std::vector<double> y{0.1, -1.9, 2.5};
  try {
    quantize(q, y);
    FAIL("expected SampleOutOfRange");
  } catch (const SampleOutOfRange& e) {
    CHECK(e.index() == 2);
    CHECK(e.value() == 2.5);
  }
  const Quantized z = quantize(q, std::vector<double>{0.1, -1.9, 2.0});
  CHECK(z.bins == std::vector<int>{4, 0, 7});
  CHECK(z.codes[0] == 0.25);
  CHECK(z.signs.empty());
}

TEST_CASE("saturated equiprobable quantizer") {
  const QuantizerSpec q = make_saturated_equiprobable(3, 4.0);
  q.validate();
  CHECK(q.thresholds.front() == -kInf);
  CHECK(q.thresholds.back() == kInf);
  CHECK(q.thresholds[4] == 0.0);
  for (int k = 1; k < 8; ++k) {
    CHECK(q.thresholds[k] == -q.thresholds[8 - k]);
    CHECK(special::std_normal_cdf(q.thresholds[k] / 2.0) == doctest::Approx(k / 8.0).epsilon(1e-13));
  }
  for (int k = 0; k < 8; ++k) CHECK(q.codes[k] == -q.codes[7 - k]);
  CHECK(q.codes[0] < q.thresholds[1]);
  // Inputs far out land in the outer bins rather than failing.
  const Quantized z = quantize(q, std::vector<double>{-1e9, 1e9});
  CHECK(z.bins == std::vector<int>{0, 7});
}

TEST_CASE("saturated B=4 quantizer saturates one input in eight") {
  const double var = 0.37;
  const QuantizerSpec q = make_saturated_equiprobable(4, var);
  Rng rng(5);
  const int n = 200000;
  int saturated = 0;
  for (int i = 0; i < n; ++i) {
    const int b = bin_index(q, std::sqrt(var) * rng.normal());
    saturated += (b == 0 || b == 15) ? 1 : 0;
  }
  // 3 binomial standard deviations.
  CHECK(std::abs(saturated / double(n) - 0.125) < 3 * std::sqrt(0.125 * 0.875 / n));
}

TEST_CASE("one-bit quantizer") {
  const QuantizerSpec q = make_onebit();
  q.validate();
  const Quantized z = quantize(q, std::vector<double>{-2.0, 0.0, 3.0, -0.0});
  CHECK(z.signs == std::vector<int>{-1, 1, 1, 1});
  CHECK(z.codes == std::vector<double>{0.0, 0.0, 0.0, 0.0});
  CHECK(sign_of(0.0) == 1);
  CHECK(sign_of(-1e-300) == -1);
}

TEST_CASE("error domain of a multi-bit code") {
  const QuantizerSpec q = make_uniform(2, 1.0);
  const std::vector<int> bins{0, 3};
  const auto d = error_domain(q, bins);
  const auto& box = std::get<BoxDomain>(d);
  // e = z - y with z = -0.75 and y in [-1, -0.5)
  CHECK(box.intervals[0].lower == doctest::Approx(-0.25));
  CHECK(box.intervals[0].upper == doctest::Approx(0.25));
  CHECK(in_error_domain(d, std::vector<double>{0.2, -0.25}));
  CHECK_FALSE(in_error_domain(d, std::vector<double>{0.3, 0.0}));

  const QuantizerSpec s = make_saturated_equiprobable(2, 1.0);
  const auto ds = std::get<BoxDomain>(error_domain(s, std::vector<int>{0, 3}));
  // Lowest bin: y below u_1, so e = v_0 - y is unbounded above.
  CHECK(std::isfinite(ds.intervals[0].lower));
  CHECK(ds.intervals[0].upper == kInf);
  CHECK(ds.intervals[1].lower == -kInf);
}

TEST_CASE("error domain of signs") {
  const auto d = error_domain(make_onebit(), std::vector<int>{1, 0});
  CHECK(std::get<SignDomain>(d).signs == std::vector<int>{1, -1});
  const double h = std::sqrt(0.5);
  CHECK(in_error_domain(d, std::vector<double>{-h, h}));
  CHECK_FALSE(in_error_domain(d, std::vector<double>{h, -h}));
  CHECK_FALSE(in_error_domain(d, std::vector<double>{-0.5, 0.5}));  // not unit norm
  CHECK_THROWS_AS(error_domain(make_onebit(), std::vector<int>{2}), std::invalid_argument);
}

TEST_CASE("validate rejects malformed specs") {
  QuantizerSpec q = make_uniform(2, 1.0);
  q.thresholds[2] = q.thresholds[1];
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = make_uniform(2, 1.0);
  q.codes.pop_back();
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = make_uniform(2, 1.0);
  q.codes[0] = 5.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  CHECK(quantizer_kind_from_string(to_string(QuantizerKind::saturated)) == QuantizerKind::saturated);
  CHECK_THROWS_AS(quantizer_kind_from_string("mu-law"), std::invalid_argument);
}
