#include "gcm/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "gcm/error.hpp"
#include "gcm/mto1.hpp"
#include "gcm/numtheory.hpp"
#include "gcm/polynomial.hpp"
#include "gcm/unitary.hpp"

namespace gcm {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "empty sampling range");
  const std::uint64_t span = hi - lo;
  if (span == ~std::uint64_t{0}) return next();
  const std::uint64_t n = span + 1;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    std::uint64_t x = next();
    if (x < limit) return lo + x % n;
  }
}

std::int64_t SplitMix64::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "empty sampling range");
  return lo + static_cast<std::int64_t>(uniform(std::uint64_t{0}, static_cast<std::uint64_t>(hi - lo)));
}

// ---------------------------------------------------------------- config

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    auto x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorKind::SyntaxError, key + ": not an integer: " + v);
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  auto x = to_int(key, v);
  if (x < 0) throw Error(ErrorKind::InvalidArgument, key + " must be nonnegative");
  return static_cast<std::uint64_t>(x);
}

const std::vector<std::string>& known_criteria() {
  static const std::vector<std::string> ids{"l2", "l3", "2to1", "equal_d", "wrapped", "l2-no-size-bound"};
  return ids;
}

}  // namespace

void apply_sweep_option(SweepSpec& spec, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "criterion") {
    const auto& ids = known_criteria();
    if (std::find(ids.begin(), ids.end(), v) == ids.end())
      throw Error(ErrorKind::InvalidArgument, "unknown criterion " + v);
    spec.criterion = v;
  } else if (key == "field") {
    spec.fields = split_list(v);
  } else if (key == "ell") {
    spec.ells.clear();
    for (const auto& x : split_list(v)) spec.ells.push_back(to_uint(key, x));
  } else if (key == "r_min") {
    spec.r_min = to_int(key, v);
  } else if (key == "r_max") {
    spec.r_max = to_int(key, v);
  } else if (key == "a_min") {
    spec.a_min = to_int(key, v);
  } else if (key == "a_max") {
    spec.a_max = to_int(key, v);
  } else if (key == "m_min") {
    spec.m_min = to_uint(key, v);
  } else if (key == "m_max") {
    spec.m_max = to_uint(key, v);
  } else if (key == "mode") {
    if (v == "exhaustive")
      spec.mode = SweepMode::Exhaustive;
    else if (v == "random")
      spec.mode = SweepMode::Random;
    else
      throw Error(ErrorKind::InvalidArgument, "mode must be exhaustive or random");
  } else if (key == "samples") {
    spec.samples = to_uint(key, v);
  } else if (key == "seed") {
    spec.seed = to_uint(key, v);
  } else if (key == "cap") {
    spec.cap = to_uint(key, v);
  } else if (key == "threads") {
    spec.threads = static_cast<unsigned>(to_uint(key, v));
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown sweep key " + key);
  }
}

SweepSpec parse_sweep(const std::string& text) {
  SweepSpec spec;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::SyntaxError, "line " + std::to_string(lineno) + ": expected key = value");
    apply_sweep_option(spec, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return spec;
}

nlohmann::json to_json(const MismatchReport& report, bool with_timing) {
  nlohmann::json j;
  j["criterion"] = report.criterion;
  j["maps"] = report.maps;
  j["total_cases"] = report.total_cases;
  j["not_applicable"] = report.not_applicable;
  j["mismatch_count"] = report.mismatch_count;
  auto list = nlohmann::json::array();
  for (const auto& mm : report.mismatches)
    list.push_back({{"params", mm.params},
                    {"m", mm.m},
                    {"criterion", mm.criterion},
                    {"oracle", mm.oracle},
                    {"witness", mm.witness}});
  j["mismatches"] = std::move(list);
  if (with_timing) j["runtime_seconds"] = report.runtime_seconds;
  return j;
}

// ---------------------------------------------------------------- sweeps

namespace {

struct Partial {
  std::uint64_t maps = 0, total = 0, not_applicable = 0, mismatch_count = 0;
  std::vector<Mismatch> mismatches;
};

void merge(Partial& into, Partial&& from, std::size_t max_keep) {
  into.maps += from.maps;
  into.total += from.total;
  into.not_applicable += from.not_applicable;
  into.mismatch_count += from.mismatch_count;
  for (auto& m : from.mismatches) {
    if (into.mismatches.size() >= max_keep) break;
    into.mismatches.push_back(std::move(m));
  }
}

// Runs work(begin, end, partial) over [0, count) in contiguous chunks and
// merges the partials in index order, so the result does not depend on the
// thread count.
template <class Work>
Partial run_chunks(std::uint64_t count, unsigned threads, std::size_t max_keep, Work work) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t chunks = std::min<std::uint64_t>(count, std::uint64_t{threads} * 8);
  std::vector<Partial> parts(chunks);
  auto bounds = [&](std::uint64_t c) { return std::pair{count * c / chunks, count * (c + 1) / chunks}; };
  if (threads == 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      work(b, e, parts[c]);
    }
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::uint64_t c; (c = next++) < chunks;) {
            auto [b, e] = bounds(c);
            work(b, e, parts[c]);
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  Partial total;
  for (auto& p : parts) merge(total, std::move(p), max_keep);
  return total;
}

struct Range {
  std::int64_t lo, hi;
  std::uint64_t size() const { return static_cast<std::uint64_t>(hi - lo + 1); }
};

Range checked(std::int64_t lo, std::int64_t hi, const char* what) {
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, std::string("empty range for ") + what);
  return {lo, hi};
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a && b > ~std::uint64_t{0} / a) return ~std::uint64_t{0};
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t a, std::uint64_t k) {
  std::uint64_t r = 1;
  while (k--) r = sat_mul(r, a);
  return r;
}

CriterionVerdict run_branch_criterion(const std::string& id, const BranchMap& map, std::uint64_t m) {
  if (id == "l2") return criterion_l2(map, m);
  if (id == "l3") return criterion_l3(map, m);
  if (id == "equal_d") return criterion_equal_d(map, m);
  if (id == "2to1") {
    if (m != 2) return CriterionVerdict::not_applicable("m must be 2");
    return criterion_2to1_any_l(map);
  }
  if (id == "l2-no-size-bound") {
    auto v = criterion_l2(map, m);
    if (v.applicable && !v.holds && v.witness == "size-bound") return CriterionVerdict::result(true, "size-bound-dropped");
    return v;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown criterion " + id);
}

// Every (map, m) in one (field, ell) block.
struct BranchBlock {
  std::string field_id;
  FieldPtr field;
  std::uint64_t ell = 0;
  Range a, r;
  std::uint64_t m_lo = 1, m_hi = 1;
  // random mode: pre-drawn exponent tuples, a then r
  std::vector<std::vector<std::int64_t>> samples;
  bool equal_gcd_sampling = false;
};

std::vector<std::int64_t> decode(std::uint64_t index, const BranchBlock& blk) {
  // lexicographic over (a_0..a_{l-1}, r_0..r_{l-1}); the last entry varies fastest
  const std::size_t L = blk.ell;
  std::vector<std::int64_t> t(2 * L);
  for (std::size_t pos = 2 * L; pos-- > 0;) {
    const Range& rg = pos < L ? blk.a : blk.r;
    t[pos] = rg.lo + static_cast<std::int64_t>(index % rg.size());
    index /= rg.size();
  }
  return t;
}

void run_block(const BranchBlock& blk, const std::string& criterion, std::uint64_t begin, std::uint64_t end,
               Partial& out, std::size_t max_keep) {
  auto G = CyclicGroup::multiplicative(blk.field);
  CosetDecomposition decomp(G, blk.ell);
  const std::uint64_t N = G.order();
  const std::size_t L = blk.ell;
  std::vector<std::pair<FieldElement, std::int64_t>> branches(L);
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    const auto t = blk.samples.empty() ? decode(idx, blk) : blk.samples[idx];
    for (std::size_t i = 0; i < L; ++i) branches[i] = {G.elem(t[i]), t[L + i]};
    BranchMap map(decomp, branches);
    const auto valid = valid_ms_of(exponent_histogram(map), N);
    ++out.maps;
    for (std::uint64_t m = blk.m_lo; m <= blk.m_hi; ++m) {
      ++out.total;
      CriterionVerdict v;
      try {
        v = run_branch_criterion(criterion, map, m);
      } catch (const Error& e) {
        v = CriterionVerdict::not_applicable(e.what());
      }
      if (!v.applicable) {
        ++out.not_applicable;
        continue;
      }
      const bool truth = std::binary_search(valid.begin(), valid.end(), m);
      if (v.holds == truth) continue;
      ++out.mismatch_count;
      if (out.mismatches.size() >= max_keep) continue;
      nlohmann::json params{{"field", blk.field_id}, {"ell", blk.ell},
                            {"a_exp", std::vector<std::int64_t>(t.begin(), t.begin() + L)},
                            {"r", std::vector<std::int64_t>(t.begin() + L, t.end())}};
      out.mismatches.push_back({std::move(params), m, v.holds, truth, v.witness});
    }
  }
}

MismatchReport branch_sweep(const SweepSpec& spec, const FieldResolver& resolve) {
  if (spec.fields.empty()) throw Error(ErrorKind::InvalidArgument, "no fields to sweep");
  SplitMix64 rng(spec.seed);
  std::vector<BranchBlock> blocks;
  std::uint64_t projected = 0;
  for (const auto& id : spec.fields) {
    FieldPtr F = resolve(id);
    const std::uint64_t q = F->q(), N = q - 1;
    std::vector<std::uint64_t> ells = spec.ells;
    if (ells.empty()) {
      if (spec.criterion == "l2" || spec.criterion == "l2-no-size-bound")
        ells = {2};
      else if (spec.criterion == "l3")
        ells = {3};
      else
        ells = divisors(N);
    }
    for (auto ell : ells) {
      if (ell == 0 || N % ell) throw Error(ErrorKind::IndexNotDividingOrder, "ell must divide q - 1");
      BranchBlock blk;
      blk.field_id = id;
      blk.field = F;
      blk.ell = ell;
      blk.a = checked(spec.a_min.value_or(0), spec.a_max.value_or(static_cast<std::int64_t>(N) - 1), "a");
      blk.r = checked(spec.r_min.value_or(1), spec.r_max.value_or(static_cast<std::int64_t>(N)), "r");
      if (spec.criterion == "2to1") {
        blk.m_lo = blk.m_hi = 2;
      } else {
        blk.m_lo = spec.m_min.value_or(1);
        blk.m_hi = spec.m_max.value_or(N);
      }
      if (blk.m_lo == 0 || blk.m_hi < blk.m_lo) throw Error(ErrorKind::InvalidArgument, "empty m range");
      blk.equal_gcd_sampling = spec.criterion == "equal_d";
      std::uint64_t maps = 0;
      if (spec.mode == SweepMode::Exhaustive) {
        maps = sat_mul(sat_pow(blk.a.size(), ell), sat_pow(blk.r.size(), ell));
      } else {
        maps = spec.samples;
      }
      projected = std::min(~std::uint64_t{0} - 1, projected + sat_mul(maps, N));
      if (projected > spec.cap)
        throw Error(ErrorKind::CapExceeded, "projected " + std::to_string(projected) +
                                                " oracle evaluations exceed the cap of " + std::to_string(spec.cap));
      if (spec.mode == SweepMode::Random) {
        // the equal-gcd criterion is sampled on its own shape
        const std::uint64_t s = N / ell;
        blk.samples.reserve(spec.samples);
        for (std::uint64_t k = 0; k < spec.samples; ++k) {
          std::vector<std::int64_t> t(2 * ell);
          for (std::size_t i = 0; i < ell; ++i) t[i] = rng.uniform(blk.a.lo, blk.a.hi);
          for (std::size_t i = 0; i < ell; ++i) {
            // r_0 is uniform; later r_i are uniform within its gcd class
            for (int attempt = 0;; ++attempt) {
              t[ell + i] = rng.uniform(blk.r.lo, blk.r.hi);
              if (!blk.equal_gcd_sampling || i == 0 || gcd(t[ell + i], static_cast<std::int64_t>(s)) == gcd(t[ell], static_cast<std::int64_t>(s)) || attempt == 10000)
                break;
            }
          }
          blk.samples.push_back(std::move(t));
        }
      }
      blocks.push_back(std::move(blk));
    }
  }

  Partial total;
  for (const auto& blk : blocks) {
    const std::uint64_t count =
        blk.samples.empty() ? sat_mul(sat_pow(blk.a.size(), blk.ell), sat_pow(blk.r.size(), blk.ell))
                            : blk.samples.size();
    auto part = run_chunks(count, spec.threads, spec.max_mismatches, [&](std::uint64_t b, std::uint64_t e, Partial& p) {
      run_block(blk, spec.criterion, b, e, p, spec.max_mismatches);
    });
    merge(total, std::move(part), spec.max_mismatches);
  }
  MismatchReport rep;
  rep.criterion = spec.criterion;
  rep.maps = total.maps;
  rep.total_cases = total.total;
  rep.not_applicable = total.not_applicable;
  rep.mismatch_count = total.mismatch_count;
  rep.mismatches = std::move(total.mismatches);
  return rep;
}

// f = x^r h(x^{q-1}) over F_{q^2} against the oracle on F_{q^2}*, h drawn
// with one to three terms of degree at most q and nonzero coefficients.
MismatchReport wrapped_sweep(const SweepSpec& spec, const FieldResolver& resolve) {
  if (spec.mode != SweepMode::Random) throw Error(ErrorKind::InvalidArgument, "wrapped sweeps are random only");
  if (spec.fields.empty()) throw Error(ErrorKind::InvalidArgument, "no fields to sweep");
  SplitMix64 rng(spec.seed);
  struct Sample {
    std::size_t field;
    std::int64_t r;
    Polynomial h;
  };
  std::vector<FieldPtr> exts;
  std::vector<std::uint64_t> base;
  std::vector<Sample> samples;
  std::uint64_t projected = 0;
  for (const auto& id : spec.fields) {
    FieldPtr Fq = resolve(id);
    const std::uint64_t q = Fq->q();
    FieldPtr ext = unit_field(q);
    exts.push_back(ext);
    base.push_back(q);
    projected += sat_mul(spec.samples, ext->q() - 1);
    if (projected > spec.cap)
      throw Error(ErrorKind::CapExceeded, "projected " + std::to_string(projected) +
                                              " oracle evaluations exceed the cap of " + std::to_string(spec.cap));
    auto U = CyclicGroup::unit_circle(ext);
    const auto Q = static_cast<std::int64_t>(q);
    const Range rr = checked(spec.r_min.value_or(1), spec.r_max.value_or(Q * Q - 1), "r");
    for (std::uint64_t k = 0; k < spec.samples; ++k) {
      for (;;) {
        Polynomial h(ext);
        const auto terms = rng.uniform(std::uint64_t{1}, std::uint64_t{3});
        for (std::uint64_t t = 0; t < terms; ++t) {
          FieldElement c{rng.uniform(std::uint64_t{1}, ext->q() - 1)};
          h.add_term(c, rng.uniform(std::uint64_t{0}, q));
        }
        std::int64_t r = rng.uniform(rr.lo, rr.hi);
        if (gcd(r, Q - 1) != 1 || h.is_zero()) continue;
        bool rooted = false;
        for (auto x : U.elements())
          if (h.eval(x).is_zero()) {
            rooted = true;
            break;
          }
        if (rooted) continue;
        samples.push_back({exts.size() - 1, r, std::move(h)});
        break;
      }
    }
  }

  auto part = run_chunks(samples.size(), spec.threads, spec.max_mismatches,
                         [&](std::uint64_t b, std::uint64_t e, Partial& out) {
                           for (std::uint64_t idx = b; idx < e; ++idx) {
                             const auto& smp = samples[idx];
                             const FieldPtr& F = exts[smp.field];
                             const std::uint64_t q = base[smp.field];
                             auto wm = make_wrapped(q, smp.r, smp.h);
                             std::vector<FieldElement> dom;
                             for (std::uint64_t c = 1; c < F->q(); ++c) dom.emplace_back(c);
                             auto rep = classify(F, dom, [&](FieldElement x) { return wm.eval(x); });
                             ++out.maps;
                             const std::uint64_t lo = spec.m_min.value_or(1), hi = spec.m_max.value_or(q + 1);
                             for (std::uint64_t m = lo; m <= hi; ++m) {
                               ++out.total;
                               auto v = criterion_wrapped(wm, m);
                               if (!v.applicable) {
                                 ++out.not_applicable;
                                 continue;
                               }
                               const bool truth = rep.is_mto1(m);
                               if (v.holds == truth) continue;
                               ++out.mismatch_count;
                               if (out.mismatches.size() >= spec.max_mismatches) continue;
                               nlohmann::json params{
                                   {"field", std::to_string(q)}, {"r", smp.r}, {"h", format_polynomial(smp.h)}};
                               out.mismatches.push_back({std::move(params), m, v.holds, truth, v.witness});
                             }
                           }
                         });
  MismatchReport rep;
  rep.criterion = spec.criterion;
  rep.maps = part.maps;
  rep.total_cases = part.total;
  rep.not_applicable = part.not_applicable;
  rep.mismatch_count = part.mismatch_count;
  rep.mismatches = std::move(part.mismatches);
  return rep;
}

}  // namespace

MismatchReport differential_verify(const SweepSpec& spec, const FieldResolver& resolve) {
  const auto start = std::chrono::steady_clock::now();
  MismatchReport rep = spec.criterion == "wrapped" ? wrapped_sweep(spec, resolve) : branch_sweep(spec, resolve);
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<BranchMap> enumerate_mto1(const FieldPtr& field, std::uint64_t ell, std::uint64_t m,
                                      const EnumerateBounds& bounds, std::size_t limit) {
  auto G = CyclicGroup::multiplicative(field);
  const std::uint64_t N = G.order();
  if (ell == 0 || N % ell) throw Error(ErrorKind::IndexNotDividingOrder, "ell must divide q - 1");
  CosetDecomposition decomp(G, ell);
  const std::size_t L = ell;
  auto pick = [&](const std::vector<std::pair<std::int64_t, std::int64_t>>& given, std::size_t i, Range dflt) {
    if (given.empty()) return dflt;
    if (given.size() != L) throw Error(ErrorKind::InvalidArgument, "one range per branch expected");
    return checked(given[i].first, given[i].second, "enumerate bound");
  };
  std::vector<Range> ranges;
  for (std::size_t i = 0; i < L; ++i)
    ranges.push_back(pick(bounds.a_exp, i, {0, static_cast<std::int64_t>(N) - 1}));
  for (std::size_t i = 0; i < L; ++i) ranges.push_back(pick(bounds.r, i, {1, static_cast<std::int64_t>(N)}));

  std::vector<BranchMap> out;
  std::vector<std::int64_t> t(2 * L);
  for (std::size_t i = 0; i < 2 * L; ++i) t[i] = ranges[i].lo;
  std::vector<std::pair<FieldElement, std::int64_t>> branches(L);
  while (out.size() < limit) {
    for (std::size_t i = 0; i < L; ++i) branches[i] = {G.elem(t[i]), t[L + i]};
    BranchMap map(decomp, branches);
    // the exponent count is re-checked by field evaluation before yielding
    if (histogram_is_mto1(exponent_histogram(map), N, m) && classify(map).is_mto1(m)) out.push_back(std::move(map));
    std::size_t pos = 2 * L;
    while (pos > 0) {
      --pos;
      if (t[pos] < ranges[pos].hi) {
        ++t[pos];
        break;
      }
      t[pos] = ranges[pos].lo;
      if (pos == 0) return out;
    }
  }
  return out;
}

}  // namespace gcm
