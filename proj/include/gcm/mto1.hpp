#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcm/cyclotomic.hpp"
#include "gcm/field.hpp"
#include "gcm/polynomial.hpp"

namespace gcm {

/// Multiplicity statistics of a mapping on a finite domain.
struct Mto1Report {
  std::string domain;
  std::uint64_t domain_size = 0;
  /// multiplicity -> number of image points with that many preimages
  std::map<std::uint64_t, std::uint64_t> histogram;
  /// every m in [1, domain_size] for which the mapping is m-to-1
  std::vector<std::uint64_t> valid_ms;
  /// exceptional elements per valid m, 0 first then ascending discrete log
  std::map<std::uint64_t, std::vector<FieldElement>> exceptional;

  bool is_mto1(std::uint64_t m) const;
};

/// m-to-1 test on a histogram: exactly floor(n/m) image points with exactly
/// m preimages.
bool histogram_is_mto1(const std::map<std::uint64_t, std::uint64_t>& histogram, std::uint64_t n,
                       std::uint64_t m);
std::vector<std::uint64_t> valid_ms_of(const std::map<std::uint64_t, std::uint64_t>& histogram,
                                       std::uint64_t n);

/// Multiplicity test for a map on an index set given by its image keys.
std::map<std::uint64_t, std::uint64_t> histogram_of(const std::vector<std::uint64_t>& images);
bool values_are_mto1(const std::vector<std::uint64_t>& images, std::uint64_t m);

enum class DomainKind { Fq, FqStar, UnitCircle };

using ElementMap = std::function<FieldElement(FieldElement)>;

/// Classifies f on an explicit domain. Throws DomainElementOutsideField.
Mto1Report classify(const FieldPtr& field, const std::vector<FieldElement>& domain, const ElementMap& f,
                    const std::string& label = "explicit");
Mto1Report classify(const Polynomial& f, DomainKind domain);
/// Classifies a branch map on its group by field evaluation.
Mto1Report classify(const BranchMap& map);

/// Histogram of a branch map computed from group exponents only.
std::map<std::uint64_t, std::uint64_t> exponent_histogram(const BranchMap& map);

struct CriterionVerdict {
  bool applicable = false;
  bool holds = false;
  std::string witness;

  static CriterionVerdict not_applicable(std::string why) { return {false, false, std::move(why)}; }
  static CriterionVerdict result(bool holds, std::string witness) {
    return {true, holds, std::move(witness)};
  }
};

/// Transfers m-to-1 on F_q* to F_q for a mapping whose only root is 0.
/// Throws HypothesisViolated when another root exists.
CriterionVerdict lift_to_full_field(const FieldPtr& field, const ElementMap& f, std::uint64_t m,
                                    const Mto1Report& star_report);

/// Two branches. Throws WrongIndex, EvenQ, InvalidArgument (m range).
CriterionVerdict criterion_l2(const BranchMap& map, std::uint64_t m);
/// Three branches, every tie-compatible labeling. Throws WrongIndex.
CriterionVerdict criterion_l3(const BranchMap& map, std::uint64_t m);
/// 2-to-1 for any index, including ell = 1 and ell = N.
CriterionVerdict criterion_2to1_any_l(const BranchMap& map);
/// Equal gcds; not applicable ("UnequalGcds") otherwise.
CriterionVerdict criterion_equal_d(const BranchMap& map, std::uint64_t m);

enum class Corollary { COR32, COR33, COR42, COR43, COR53, COR54, COR55, COR56, COR61, COR62 };
std::string to_string(Corollary c);
std::optional<Corollary> parse_corollary(const std::string& name);

struct CorollaryResult {
  CriterionVerdict verdict;
  /// the m the verdict speaks about
  std::uint64_t m = 0;
  /// the branch map the corollary describes
  std::optional<BranchMap> map;
};

/// COR32 (m = 2) and COR33 (m = 3), two branches on F_q*.
CorollaryResult corollary_two_branches(Corollary c, const BranchMap& map);
/// COR42 (m = 2) and COR43 (m = 3), three branches on F_q*.
CorollaryResult corollary_three_branches(Corollary c, const BranchMap& map);
/// COR54: speaks about m = d.
CorollaryResult corollary_54(const BranchMap& map);
/// COR55: d = 1.
CorollaryResult corollary_55(const BranchMap& map, std::uint64_t m);
/// COR53: branch (a0, r0) followed by ell - 1 copies of (a1, r1).
CorollaryResult corollary_53(const FieldPtr& field, std::uint64_t ell, FieldElement a0, std::int64_t r0,
                             FieldElement a1, std::int64_t r1, std::uint64_t m);
/// COR56 over the field of order base_q^n, r_i = base_q^i.
CorollaryResult corollary_56(const FieldPtr& field, std::uint64_t base_q, std::uint64_t ell,
                             std::uint64_t m);
/// The polynomial sum_i x^{q^i} prod_{j != i} (x^s - omega^j).
Polynomial corollary_56_polynomial(const FieldPtr& field, std::uint64_t base_q, std::uint64_t ell);

/// COR61: f = x^r0 g0(x^s)^(2 d0) (1 + x^s) + x^r1 g1(x^s)^(2 d1) (1 - x^s).
CorollaryResult corollary_61(const Polynomial& g0, const Polynomial& g1, std::int64_t r0,
                             std::int64_t r1, std::uint64_t m);
/// COR62 over F_{q^n}: f = x^r0 h0(x^s) (1 + x^s) + x^r1 h1(x^s) (1 - x^s).
CorollaryResult corollary_62(const Polynomial& h0, const Polynomial& h1, std::uint64_t base_q,
                             std::int64_t r0, std::int64_t r1, std::uint64_t m);
/// Full polynomial of the two-branch realization (exponents 2 d_i applied to
/// g_i when `square_power` is set, as in COR61).
Polynomial two_branch_realization(const Polynomial& g0, const Polynomial& g1, std::int64_t r0,
                                  std::int64_t r1, bool square_power);

/// Map-based corollaries by name; m is ignored where the corollary fixes it.
CorollaryResult specialized_criterion(Corollary c, const BranchMap& map, std::uint64_t m);

}  // namespace gcm
