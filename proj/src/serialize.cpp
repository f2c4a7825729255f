#include "qcs/serialize.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace qcs {

static_assert(std::endian::native == std::endian::little, "problem container assumes a little-endian host");

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

nlohmann::json quantizer_to_json(const QuantizerSpec& q) {
  nlohmann::json j;
  j["kind"] = to_string(q.kind);
  j["bit_depth"] = q.bit_depth;
  auto& t = j["thresholds"] = nlohmann::json::array();
  for (double v : q.thresholds) t.push_back(format_double(v));
  auto& c = j["codes"] = nlohmann::json::array();
  for (double v : q.codes) c.push_back(format_double(v));
  return j;
}

QuantizerSpec quantizer_from_json(const nlohmann::json& j) {
  QuantizerSpec q;
  q.kind = quantizer_kind_from_string(j.at("kind").get<std::string>());
  q.bit_depth = j.at("bit_depth").get<int>();
  for (const auto& v : j.at("thresholds")) q.thresholds.push_back(parse_double(v.get<std::string>()));
  for (const auto& v : j.at("codes")) q.codes.push_back(parse_double(v.get<std::string>()));
  q.validate();
  return q;
}

namespace {

constexpr char kMagic[8] = {'Q', 'C', 'S', 'P', 'R', 'O', 'B', '1'};

class Writer {
 public:
  template <class T>
  void put(T v) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    out.insert(out.end(), p, p + sizeof(T));
  }
  void put_doubles(const double* v, std::size_t n) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(v);
    out.insert(out.end(), p, p + n * sizeof(double));
  }
  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : bytes(b) {}
  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
  }
  void get_doubles(double* v, std::size_t n) {
    if (n > (bytes.size() - pos) / sizeof(double)) truncated();
    std::memcpy(v, bytes.data() + pos, n * sizeof(double));
    pos += n * sizeof(double);
  }
  void need(std::size_t n) const {
    if (n > bytes.size() - pos) truncated();
  }
  [[noreturn]] void truncated() const {
    throw std::runtime_error("problem container truncated at byte " + std::to_string(pos));
  }
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_problem(const Problem& p) {
  Writer w;
  w.out.insert(w.out.end(), std::begin(kMagic), std::end(kMagic));
  const auto M = static_cast<std::uint64_t>(p.A.rows());
  const auto N = static_cast<std::uint64_t>(p.A.cols());
  w.put(static_cast<std::uint32_t>(p.quantizer.kind));
  w.put(static_cast<std::uint32_t>(p.quantizer.bit_depth));
  w.put(M);
  w.put(N);
  w.put(static_cast<std::uint64_t>(p.quantizer.levels()));
  w.put_doubles(p.quantizer.thresholds.data(), p.quantizer.thresholds.size());
  w.put_doubles(p.quantizer.codes.data(), p.quantizer.codes.size());
  w.put(p.sigma2);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = p.A;
  w.put_doubles(rows.data(), static_cast<std::size_t>(rows.size()));
  for (int b : p.bins) w.put(static_cast<std::int32_t>(b));
  w.put(static_cast<std::uint8_t>(p.truth.has_value()));
  if (p.truth) w.put_doubles(p.truth->data(), N);
  w.put(static_cast<std::uint8_t>(p.measurements.has_value()));
  if (p.measurements) w.put_doubles(p.measurements->data(), M);
  return std::move(w.out);
}

Problem deserialize_problem(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  r.need(sizeof kMagic);
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error("not a problem container (bad magic)");
  }
  r.pos = sizeof kMagic;
  QuantizerSpec q;
  const auto kind = r.get<std::uint32_t>();
  if (kind > static_cast<std::uint32_t>(QuantizerKind::one_bit)) throw std::runtime_error("unknown quantizer kind");
  q.kind = static_cast<QuantizerKind>(kind);
  q.bit_depth = static_cast<int>(r.get<std::uint32_t>());
  const auto M = r.get<std::uint64_t>();
  const auto N = r.get<std::uint64_t>();
  const auto levels = r.get<std::uint64_t>();
  // Reject absurd headers before allocating.
  if (levels > bytes.size() || M > bytes.size() || N > bytes.size() || (N != 0 && M > bytes.size() / N)) {
    throw std::runtime_error("problem container header is inconsistent with its size");
  }
  q.thresholds.resize(levels + 1);
  q.codes.resize(levels);
  r.get_doubles(q.thresholds.data(), q.thresholds.size());
  r.get_doubles(q.codes.data(), q.codes.size());
  q.validate();
  const double sigma2 = r.get<double>();
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(M, N);
  r.get_doubles(rows.data(), M * N);
  std::vector<int> bins(M);
  for (auto& b : bins) b = r.get<std::int32_t>();
  Problem p = make_problem_from_bins(Eigen::MatrixXd(rows), q, std::move(bins), sigma2);
  if (r.get<std::uint8_t>() != 0) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(N));
    r.get_doubles(x.data(), N);
    p.truth = std::move(x);
  }
  if (r.get<std::uint8_t>() != 0) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(M));
    r.get_doubles(y.data(), M);
    p.measurements = std::move(y);
  }
  if (r.pos != bytes.size()) throw std::runtime_error("trailing bytes after problem container");
  return p;
}

void save_problem(const Problem& p, const std::filesystem::path& path) {
  const auto bytes = serialize_problem(p);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_problem(bytes);
}

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string problem_hash(const Problem& p) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(serialize_problem(p))));
  return buf;
}

}  // namespace qcs
