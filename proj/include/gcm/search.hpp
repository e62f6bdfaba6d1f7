#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcm/cyclotomic.hpp"
#include "gcm/field.hpp"
#include "json.hpp"

namespace gcm {

/// SplitMix64 stream. Sweeps are reproducible from the seed alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [lo, hi], by rejection.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_;
};

enum class SweepMode { Exhaustive, Random };

/// Criterion ids: l2, l3, 2to1, equal_d, wrapped, and the mutant
/// l2-no-size-bound used to show the sweep catches a broken criterion.
struct SweepSpec {
  std::string criterion = "l2";
  std::vector<std::string> fields;
  /// empty: 2 for l2, 3 for l3, every divisor of q - 1 otherwise
  std::vector<std::uint64_t> ells;
  /// branch exponents, default [1, q - 1]; for wrapped the exponent r of
  /// x^r h(x^{q-1}), default [1, q^2 - 1]
  std::optional<std::int64_t> r_min, r_max;
  /// generator exponents of the constants, default [0, q - 2]
  std::optional<std::int64_t> a_min, a_max;
  /// default [1, q - 1], [1, q + 1] for wrapped, {2} for 2to1
  std::optional<std::uint64_t> m_min, m_max;
  SweepMode mode = SweepMode::Exhaustive;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  /// projected oracle evaluations allowed before the sweep refuses to run
  std::uint64_t cap = 10'000'000;
  /// 0 picks the hardware concurrency
  unsigned threads = 0;
  /// stored mismatches; the count is always exact
  std::size_t max_mismatches = 1000;
};

/// key = value lines, '#' comments, comma-separated lists for field and ell.
/// Throws SyntaxError, InvalidArgument.
SweepSpec parse_sweep(const std::string& text);
void apply_sweep_option(SweepSpec& spec, const std::string& key, const std::string& value);

struct Mismatch {
  nlohmann::json params;
  std::uint64_t m = 0;
  bool criterion = false;
  bool oracle = false;
  std::string witness;
};

struct MismatchReport {
  std::string criterion;
  std::uint64_t maps = 0;
  /// (map, m) pairs
  std::uint64_t total_cases = 0;
  std::uint64_t not_applicable = 0;
  std::uint64_t mismatch_count = 0;
  std::vector<Mismatch> mismatches;
  double runtime_seconds = 0;

  bool ok() const { return mismatch_count == 0; }
};

/// Timing is left out unless asked for, so equal sweeps give equal bytes.
nlohmann::json to_json(const MismatchReport& report, bool with_timing = false);

using FieldResolver = std::function<FieldPtr(const std::string&)>;

/// Throws CapExceeded when the projected work is above spec.cap, and
/// InvalidArgument for unusable sweeps.
MismatchReport differential_verify(const SweepSpec& spec, const FieldResolver& resolve = make_field);

/// Per-branch inclusive ranges. An empty list means the full range,
/// [0, q - 2] for constants as generator exponents and [1, q - 1] for r.
struct EnumerateBounds {
  std::vector<std::pair<std::int64_t, std::int64_t>> a_exp;
  std::vector<std::pair<std::int64_t, std::int64_t>> r;
};

/// Maps in lexicographic order of (a exponents, r) that are m-to-1 on F_q*.
std::vector<BranchMap> enumerate_mto1(const FieldPtr& field, std::uint64_t ell, std::uint64_t m,
                                      const EnumerateBounds& bounds = {}, std::size_t limit = 100);

}  // namespace gcm
