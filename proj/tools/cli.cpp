#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "gcm/cyclotomic.hpp"
#include "gcm/error.hpp"
#include "gcm/field.hpp"
#include "gcm/mto1.hpp"
#include "gcm/numtheory.hpp"
#include "gcm/polynomial.hpp"
#include "gcm/search.hpp"
#include "gcm/unitary.hpp"
#include "json.hpp"

namespace gcm::cli {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNotApplicable = 2;

// ---------------------------------------------------------------- fields

std::pair<std::uint64_t, unsigned> prime_power(std::uint64_t q) {
  auto f = prime_factors(q);
  if (q < 2 || f.size() != 1) throw Error(ErrorKind::NotPrime, std::to_string(q) + " is not a prime power");
  unsigned k = 0;
  for (std::uint64_t x = q; x > 1; x /= f[0]) ++k;
  return {f[0], k};
}

std::string canonical_id(std::uint64_t p, unsigned n) {
  return n == 1 ? std::to_string(p) : std::to_string(p) + "^" + std::to_string(n);
}

// "13", "2^6" or a bare prime power such as "64"
std::pair<std::uint64_t, unsigned> field_params(const std::string& id) {
  if (id.find('^') != std::string::npos) return parse_field_id(id);
  std::uint64_t q = 0;
  try {
    std::size_t used = 0;
    q = std::stoull(id, &used);
    if (used != id.size()) throw std::invalid_argument(id);
  } catch (const std::exception&) {
    throw Error(ErrorKind::SyntaxError, "bad field identifier " + id);
  }
  return prime_power(q);
}

std::vector<std::uint64_t> parse_uint_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '[' || c == ']' || c == ' '; }), s.end());
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::SyntaxError, "bad integer list " + text);
    }
  }
  return out;
}

GeneratorChoice parse_generator(const std::string& text) {
  GeneratorChoice g;
  if (text.rfind("g^", 0) == 0) {
    g.power_of_default = std::stoull(text.substr(2));
  } else {
    g.coeffs = parse_uint_list(text);
  }
  return g;
}

GeneratorChoice generator_from_json(const json& j) {
  GeneratorChoice g;
  if (j.is_number_unsigned()) {
    g.coeffs = std::vector<std::uint64_t>{j.get<std::uint64_t>()};
  } else if (j.is_array()) {
    g.coeffs = j.get<std::vector<std::uint64_t>>();
  } else if (j.is_object() && j.contains("power")) {
    g.power_of_default = j.at("power").get<std::uint64_t>();
  } else if (j.is_string()) {
    g = parse_generator(j.get<std::string>());
  } else {
    throw Error(ErrorKind::InvalidArgument, "registry generator must be an integer, list or {\"power\": k}");
  }
  return g;
}

struct FieldEntry {
  std::optional<std::vector<std::uint64_t>> modulus;
  std::optional<GeneratorChoice> generator;
};

class FieldContext {
 public:
  void load_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::SyntaxError, path + ": " + e.what());
    }
    const json& fields = j.contains("fields") ? j.at("fields") : j;
    for (const auto& [key, val] : fields.items()) {
      auto [p, n] = field_params(key);
      FieldEntry e;
      if (val.contains("modulus")) e.modulus = val.at("modulus").get<std::vector<std::uint64_t>>();
      if (val.contains("generator")) e.generator = generator_from_json(val.at("generator"));
      registry_[canonical_id(p, n)] = e;
    }
  }

  void set_overrides(const std::string& modulus, const std::string& generator) {
    if (!modulus.empty()) override_.modulus = parse_uint_list(modulus);
    if (!generator.empty()) override_.generator = parse_generator(generator);
  }

  /// Registry entry, then the command-line overrides on top.
  FieldPtr resolve(const std::string& id, bool with_overrides = true) const {
    auto [p, n] = field_params(id);
    FieldEntry e;
    if (auto it = registry_.find(canonical_id(p, n)); it != registry_.end()) e = it->second;
    if (with_overrides) {
      if (override_.modulus) e.modulus = override_.modulus;
      if (override_.generator) e.generator = override_.generator;
    }
    return Field::make(p, n, e.modulus, e.generator);
  }

  FieldPtr unit_ext(std::uint64_t q) const {
    auto [p, k] = prime_power(q);
    return resolve(canonical_id(p, 2 * k));
  }

 private:
  std::map<std::string, FieldEntry> registry_;
  FieldEntry override_;
};

// ---------------------------------------------------------------- output

json element_json(FieldElement x, const Field& F) {
  if (F.n() == 1) return x.code();
  return format_element(x, F);
}

json report_json(const Mto1Report& rep, const Field& F) {
  json hist = json::object();
  for (auto [mult, count] : rep.histogram) hist[std::to_string(mult)] = count;
  json exc = json::object();
  for (const auto& [m, xs] : rep.exceptional) {
    json list = json::array();
    for (auto x : xs) list.push_back(element_json(x, F));
    exc[std::to_string(m)] = list;
  }
  return {{"field", F.id()}, {"domain", rep.domain}, {"histogram", hist}, {"valid_m", rep.valid_ms},
          {"exceptional", exc}};
}

json verdict_json(const CriterionVerdict& v) {
  return {{"applicable", v.applicable}, {"holds", v.holds}, {"witness", v.witness}};
}

std::string verdict_word(const CriterionVerdict& v) {
  if (!v.applicable) return "not applicable";
  return v.holds ? "holds" : "does not hold";
}

json branches_json(const BranchMap& map) {
  json list = json::array();
  const Field& F = *map.field();
  for (const auto& b : map.branches())
    list.push_back({{"a", element_json(b.a, F)}, {"r", b.r}, {"log_a", b.log_a}, {"d", b.d}});
  return list;
}

std::string branches_text(const BranchMap& map) {
  std::string s;
  const Field& F = *map.field();
  for (const auto& b : map.branches()) {
    if (!s.empty()) s += ",";
    s += format_element(b.a, F) + ":" + std::to_string(b.r);
  }
  return s;
}

std::string join(const std::vector<std::uint64_t>& xs) {
  std::string s;
  for (auto x : xs) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s.empty() ? "-" : s;
}

void print_table(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.first.size());
  for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(w) + 2) << k << v << "\n";
}

void print_report(std::ostream& out, const Mto1Report& rep, const Field& F) {
  std::vector<std::pair<std::string, std::string>> rows{
      {"field", F.id()}, {"domain", rep.domain}, {"size", std::to_string(rep.domain_size)}};
  std::string hist;
  for (auto [mult, count] : rep.histogram)
    hist += (hist.empty() ? "" : " ") + std::to_string(mult) + "x" + std::to_string(count);
  rows.emplace_back("histogram", hist.empty() ? "-" : hist);
  rows.emplace_back("valid m", join(rep.valid_ms));
  for (const auto& [m, xs] : rep.exceptional) {
    std::string e;
    for (auto x : xs) e += (e.empty() ? "" : " ") + format_element(x, F);
    rows.emplace_back("exceptional[" + std::to_string(m) + "]", e.empty() ? "{}" : "{" + e + "}");
  }
  print_table(out, rows);
}

struct Output {
  std::ostream& out;
  bool as_json = false;

  void emit(const json& j, const std::function<void()>& human) const {
    if (as_json)
      out << j.dump() << "\n";
    else
      human();
  }
};

DomainKind parse_domain(const std::string& d) {
  if (d == "fq") return DomainKind::Fq;
  if (d == "fqstar") return DomainKind::FqStar;
  if (d == "unit") return DomainKind::UnitCircle;
  throw Error(ErrorKind::InvalidArgument, "domain must be fq, fqstar or unit");
}

CyclicGroup parse_group(const FieldPtr& F, const std::string& g) {
  if (g == "fqstar") return CyclicGroup::multiplicative(F);
  if (g == "unit") return CyclicGroup::unit_circle(F);
  throw Error(ErrorKind::InvalidArgument, "group must be fqstar or unit");
}

Symbols symbols_for(const FieldPtr& F) {
  Symbols s{{"g", F->generator()}};
  if (F->n() % 2 == 0) s["z"] = CyclicGroup::unit_circle(F).gamma();
  return s;
}

BranchMap build_map(const FieldPtr& F, const std::string& group, const std::string& text) {
  auto G = parse_group(F, group);
  auto br = parse_branches(text, F, symbols_for(F));
  if (br.empty()) throw Error(ErrorKind::InvalidArgument, "no branches given");
  return BranchMap(CosetDecomposition(G, br.size()), br);
}

std::vector<std::pair<std::int64_t, std::int64_t>> parse_ranges(const std::string& text) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    try {
      if (colon == std::string::npos) {
        auto v = std::stoll(item);
        out.emplace_back(v, v);
      } else {
        out.emplace_back(std::stoll(item.substr(0, colon)), std::stoll(item.substr(colon + 1)));
      }
    } catch (const std::exception&) {
      throw Error(ErrorKind::SyntaxError, "bad range list " + text);
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Many-to-one tests for generalized cyclotomic mappings", "gcm"};
  app.fallthrough();
  // --h names the polynomial h, so help is long-form only
  app.set_help_flag("--help", "Print help");
  app.require_subcommand(1);

  bool as_json = false;
  std::string config, modulus, generator;
  std::uint64_t seed = 0;
  bool seed_given = false;
  app.add_flag("--json", as_json, "Emit one JSON document");
  app.add_option("--config", config, "JSON field registry: \"p^n\" -> modulus and generator");
  app.add_option("--modulus", modulus, "Modulus coefficients, constant term first");
  app.add_option("--generator", generator, "Generator: coefficients, an integer, or g^k");
  app.add_option("--seed", seed, "Seed for sampled sweeps")->each([&](const std::string&) { seed_given = true; });

  std::string field, poly, domain = "fqstar", branches, group = "fqstar";

  auto* c_info = app.add_subcommand("field-info", "Field parameters");
  c_info->add_option("--field", field, "P or P^N")->required();

  auto* c_classify = app.add_subcommand("classify", "Multiplicity report of a polynomial");
  c_classify->add_option("--field", field)->required();
  c_classify->add_option("--poly", poly)->required();
  c_classify->add_option("--domain", domain, "fq, fqstar or unit")->capture_default_str();

  auto* c_cyc = app.add_subcommand("cyc-classify", "Multiplicity report of a branch map");
  c_cyc->add_option("--field", field)->required();
  c_cyc->add_option("--branches", branches, "a0:r0,a1:r1,...")->required();
  c_cyc->add_option("--group", group, "fqstar or unit")->capture_default_str();

  bool unscaled = false;
  auto* c_expand = app.add_subcommand("expand", "Single polynomial of a branch map");
  c_expand->add_option("--field", field)->required();
  c_expand->add_option("--branches", branches)->required();
  c_expand->add_flag("--unscaled", unscaled, "Print ell times the polynomial");

  std::size_t rel_i = 0, rel_j = 1;
  auto* c_rel = app.add_subcommand("relation", "How two branch images meet");
  c_rel->add_option("--field", field)->required();
  c_rel->add_option("--branches", branches)->required();
  c_rel->add_option("--group", group)->capture_default_str();
  c_rel->add_option("--i", rel_i)->capture_default_str();
  c_rel->add_option("--j", rel_j)->capture_default_str();

  std::string theorem;
  std::uint64_t m = 0, ell = 0, base_q = 0;
  std::string a0 = "1", a1 = "1", g0 = "1", g1 = "1";
  std::int64_t r0 = 1, r1 = 1;
  bool with_oracle = false;
  auto* c_crit = app.add_subcommand("crit", "Evaluate a criterion");
  c_crit->add_option("--theorem", theorem, "l2, l3, 2to1, equal_d or a corollary such as COR32")->required();
  c_crit->add_option("--field", field)->required();
  c_crit->add_option("--branches", branches);
  c_crit->add_option("--group", group)->capture_default_str();
  c_crit->add_option("--m", m);
  c_crit->add_option("--ell", ell, "COR53, COR56");
  c_crit->add_option("--base-q", base_q, "COR56, COR62");
  c_crit->add_option("--a0", a0, "COR53");
  c_crit->add_option("--a1", a1, "COR53");
  c_crit->add_option("--r0", r0, "COR53, COR61, COR62");
  c_crit->add_option("--r1", r1, "COR53, COR61, COR62");
  c_crit->add_option("--g0", g0, "COR61 g0, COR62 h0");
  c_crit->add_option("--g1", g1, "COR61 g1, COR62 h1");
  c_crit->add_flag("--oracle", with_oracle, "Also report the brute-force verdict");

  std::uint64_t q = 0;
  std::int64_t r = 1;
  std::string h, path = "auto";
  auto* c_unit = app.add_subcommand("unit-classify", "x^r h(x^(q-1)) over F_{q^2}");
  c_unit->add_option("--q", q)->required();
  c_unit->add_option("--r", r)->required();
  c_unit->add_option("--h", h, "h over F_{q^2}; z is zeta, e is zeta^((q+1)/ell)")->required();
  c_unit->add_option("--m", m, "Single m; default all of [1, q+1]");
  c_unit->add_option("--ell", ell, "Index for the monomial-branch path");
  c_unit->add_option("--path", path, "auto, oracle or psi")->capture_default_str();

  std::string family, fa = "1", fb = "0";
  std::int64_t fu = 0, fv = 0, fk = 1;
  std::uint64_t fell = 2;
  bool check = false;
  auto* c_fam = app.add_subcommand("unit-family", "Build a family member and its predicted m");
  c_fam->add_option("--family", family, "B1 B2 B3 T4 T5 CBU CB0 CTAB CTA CTKUV")->required();
  c_fam->add_option("--q", q)->required();
  c_fam->add_option("--r", r)->required();
  c_fam->add_option("--a", fa)->capture_default_str();
  c_fam->add_option("--b", fb)->capture_default_str();
  c_fam->add_option("--u", fu)->capture_default_str();
  c_fam->add_option("--v", fv)->capture_default_str();
  c_fam->add_option("--k", fk)->capture_default_str();
  c_fam->add_option("--ell", fell, "B1, B2, B3")->capture_default_str();
  c_fam->add_flag("--check", check, "Compare the prediction with the oracle over F_{q^2}*");

  std::size_t limit = 20;
  std::string a_bounds, r_bounds;
  auto* c_enum = app.add_subcommand("enumerate", "Branch maps that are m-to-1");
  c_enum->add_option("--field", field)->required();
  c_enum->add_option("--ell", ell)->required();
  c_enum->add_option("--m", m)->required();
  c_enum->add_option("--limit", limit)->capture_default_str();
  c_enum->add_option("--a-bounds", a_bounds, "Per-branch generator-exponent ranges lo:hi,...");
  c_enum->add_option("--r-bounds", r_bounds, "Per-branch exponent ranges lo:hi,...");

  std::string sweep_file, crit_id, fields, ells, mode;
  std::optional<std::int64_t> r_min, r_max, a_min, a_max;
  std::optional<std::uint64_t> m_min, m_max, samples, cap;
  unsigned threads = 0;
  bool timing = false;
  auto* c_verify = app.add_subcommand("verify", "Differential check of a criterion against the oracle");
  c_verify->add_option("--sweep-file", sweep_file, "key = value sweep description");
  c_verify->add_option("--criterion", crit_id, "l2 l3 2to1 equal_d wrapped l2-no-size-bound");
  c_verify->add_option("--fields", fields, "Comma-separated field list");
  c_verify->add_option("--ells", ells, "Comma-separated index list");
  c_verify->add_option("--r-min", r_min);
  c_verify->add_option("--r-max", r_max);
  c_verify->add_option("--a-min", a_min);
  c_verify->add_option("--a-max", a_max);
  c_verify->add_option("--m-min", m_min);
  c_verify->add_option("--m-max", m_max);
  c_verify->add_option("--mode", mode, "exhaustive or random");
  c_verify->add_option("--samples", samples);
  c_verify->add_option("--cap", cap, "Projected oracle evaluations allowed");
  c_verify->add_option("--threads", threads);
  c_verify->add_flag("--timing", timing, "Include runtime in the report");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "gcm: " << e.what() << "\n";
    return kError;
  }
  Output o{out, as_json};
  try {
    FieldContext ctx;
    if (!config.empty()) ctx.load_registry(config);
    ctx.set_overrides(modulus, generator);

    if (c_info->parsed()) {
      auto F = ctx.resolve(field);
      json j{{"field", F->id()},
             {"p", F->p()},
             {"n", F->n()},
             {"q", F->q()},
             {"modulus", F->modulus()},
             {"generator", F->coeffs(F->generator())},
             {"order_factors", F->order_factors()}};
      o.emit(j, [&] {
        std::string mod, gen;
        for (auto c : F->modulus()) mod += (mod.empty() ? "" : ",") + std::to_string(c);
        for (auto c : F->coeffs(F->generator())) gen += (gen.empty() ? "" : ",") + std::to_string(c);
        print_table(out, {{"field", F->id()},
                          {"q", std::to_string(F->q())},
                          {"modulus", "[" + mod + "]"},
                          {"generator", "[" + gen + "]"},
                          {"q-1 primes", join(F->order_factors())}});
      });
      return kOk;
    }

    if (c_classify->parsed()) {
      auto F = ctx.resolve(field);
      auto f = parse_polynomial(poly, F, symbols_for(F));
      auto rep = classify(f, parse_domain(domain));
      o.emit(report_json(rep, *F), [&] { print_report(out, rep, *F); });
      return kOk;
    }

    if (c_cyc->parsed()) {
      auto F = ctx.resolve(field);
      auto map = build_map(F, group, branches);
      auto rep = classify(map);
      json j = report_json(rep, *F);
      j["ell"] = map.ell();
      j["branches"] = branches_json(map);
      o.emit(j, [&] {
        print_table(out, {{"branches", branches_text(map)}, {"ell", std::to_string(map.ell())}});
        print_report(out, rep, *F);
      });
      return kOk;
    }

    if (c_expand->parsed()) {
      auto F = ctx.resolve(field);
      auto map = build_map(F, "fqstar", branches);
      auto f = expand(map, !unscaled);
      json j{{"field", F->id()}, {"ell", map.ell()}, {"scaled", !unscaled}, {"polynomial", format_polynomial(f)}};
      o.emit(j, [&] { out << format_polynomial(f) << "\n"; });
      return kOk;
    }

    if (c_rel->parsed()) {
      auto F = ctx.resolve(field);
      auto map = build_map(F, group, branches);
      auto rel = branch_relation(map, rel_i, rel_j);
      json inter = json::array();
      for (auto x : rel.intersection) inter.push_back(element_json(x, *F));
      json j{{"i", rel_i},           {"j", rel_j},       {"relation", to_string(rel.kind)}, {"d", rel.d},
             {"dbar", rel.dbar},     {"c", rel.c},       {"count", rel.count},              {"base_exponent", rel.base_exponent},
             {"step", rel.step},     {"intersection", inter}};
      o.emit(j, [&] {
        std::string xs;
        for (auto x : rel.intersection) xs += (xs.empty() ? "" : " ") + format_element(x, *F);
        print_table(out, {{"relation", to_string(rel.kind)},
                          {"d, dbar", std::to_string(rel.d) + ", " + std::to_string(rel.dbar)},
                          {"count", std::to_string(rel.count)},
                          {"intersection", xs.empty() ? "{}" : "{" + xs + "}"}});
      });
      return kOk;
    }

    if (c_crit->parsed()) {
      auto F = ctx.resolve(field);
      auto sym = symbols_for(F);
      CriterionVerdict v;
      std::uint64_t about_m = m;
      std::optional<BranchMap> map;
      const auto cor = parse_corollary(theorem);
      auto need_branches = [&] {
        if (branches.empty()) throw Error(ErrorKind::InvalidArgument, theorem + " needs --branches");
        map = build_map(F, group, branches);
      };
      auto need_m = [&] {
        if (m == 0) throw Error(ErrorKind::InvalidArgument, theorem + " needs --m");
      };
      if (theorem == "l2" || theorem == "l3" || theorem == "equal_d") {
        need_branches();
        need_m();
        v = theorem == "l2" ? criterion_l2(*map, m) : theorem == "l3" ? criterion_l3(*map, m) : criterion_equal_d(*map, m);
      } else if (theorem == "2to1") {
        need_branches();
        about_m = 2;
        v = criterion_2to1_any_l(*map);
      } else if (cor) {
        CorollaryResult res;
        switch (*cor) {
          case Corollary::COR53:
            need_m();
            res = corollary_53(F, ell, parse_element(a0, F, sym), r0, parse_element(a1, F, sym), r1, m);
            break;
          case Corollary::COR56:
            need_m();
            res = corollary_56(F, base_q, ell, m);
            break;
          case Corollary::COR61:
            need_m();
            res = corollary_61(parse_polynomial(g0, F, sym), parse_polynomial(g1, F, sym), r0, r1, m);
            break;
          case Corollary::COR62:
            need_m();
            res = corollary_62(parse_polynomial(g0, F, sym), parse_polynomial(g1, F, sym), base_q, r0, r1, m);
            break;
          default:
            need_branches();
            res = specialized_criterion(*cor, *map, m);
        }
        v = res.verdict;
        about_m = res.m;
        if (res.map) map = res.map;
      } else {
        throw Error(ErrorKind::InvalidArgument, "unknown theorem " + theorem);
      }
      json j{{"theorem", theorem}, {"field", F->id()}, {"m", about_m}};
      j.update(verdict_json(v));
      std::optional<bool> oracle;
      if (with_oracle && map) {
        oracle = classify(*map).is_mto1(about_m);
        j["oracle"] = *oracle;
      }
      o.emit(j, [&] {
        std::vector<std::pair<std::string, std::string>> rows{
            {"theorem", theorem}, {"m", std::to_string(about_m)}, {"verdict", verdict_word(v)}, {"witness", v.witness}};
        if (oracle) rows.emplace_back("oracle", *oracle ? "m-to-1" : "not m-to-1");
        print_table(out, rows);
      });
      return v.applicable ? kOk : kNotApplicable;
    }

    if (c_unit->parsed()) {
      auto ext = ctx.unit_ext(q);
      auto hp = parse_polynomial(h, ext, unit_symbols(ext, ell));
      auto wm = make_wrapped(q, r, hp);
      WrappedPath wp = path == "oracle" ? WrappedPath::Oracle : path == "psi" ? WrappedPath::Psi : WrappedPath::Auto;
      if (path != "auto" && path != "oracle" && path != "psi")
        throw Error(ErrorKind::InvalidArgument, "path must be auto, oracle or psi");
      std::optional<std::uint64_t> ell_opt;
      if (ell) ell_opt = ell;
      std::vector<std::uint64_t> ms;
      if (m)
        ms = {m};
      else
        for (std::uint64_t k = 1; k <= q + 1; ++k) ms.push_back(k);
      json verdicts = json::object();
      std::vector<std::uint64_t> holds;
      bool any_applicable = false;
      std::vector<std::pair<std::string, std::string>> rows{{"field", ext->id()},
                                                            {"f", "x^" + std::to_string(r) + " h(x^" + std::to_string(q - 1) + ")"},
                                                            {"h", format_polynomial(hp)}};
      for (auto k : ms) {
        auto v = criterion_wrapped(wm, k, ell_opt, wp);
        verdicts[std::to_string(k)] = verdict_json(v);
        any_applicable = any_applicable || v.applicable;
        if (v.applicable && v.holds) holds.push_back(k);
        if (m) rows.emplace_back("verdict", verdict_word(v) + " (" + v.witness + ")");
      }
      rows.emplace_back("m-to-1 for", join(holds));
      json j{{"field", ext->id()}, {"q", q}, {"r", r}, {"h", format_polynomial(hp)}, {"verdicts", verdicts},
             {"valid_m", holds}};
      o.emit(j, [&] { print_table(out, rows); });
      return any_applicable ? kOk : kNotApplicable;
    }

    if (c_fam->parsed()) {
      auto ext = ctx.unit_ext(q);
      auto sym = unit_symbols(ext, family == "CTKUV" || family == "ctkuv" ? 3 : fell);
      auto fam = parse_family(family);
      if (!fam) throw Error(ErrorKind::InvalidArgument, "unknown family " + family);
      FamilySpec spec;
      spec.family = *fam;
      spec.r = r;
      spec.a = parse_element(fa, ext, sym);
      spec.b = parse_element(fb, ext, sym);
      spec.u = fu;
      spec.v = fv;
      spec.k = fk;
      spec.ell = fell;
      auto inst = family_construct(ext, spec);
      json j{{"family", to_string(*fam)},
             {"field", ext->id()},
             {"q", q},
             {"r", r},
             {"h", format_polynomial(inst.map.h())},
             {"applicable", inst.applicable},
             {"note", inst.note},
             {"m_max", inst.m_max},
             {"predicted", inst.predicted}};
      std::optional<std::vector<std::uint64_t>> oracle;
      if (check) {
        std::vector<FieldElement> dom;
        for (std::uint64_t c = 1; c < ext->q(); ++c) dom.emplace_back(c);
        auto rep = classify(ext, dom, [&](FieldElement x) { return inst.map.eval(x); });
        oracle.emplace();
        for (auto k : rep.valid_ms)
          if (k <= inst.m_max) oracle->push_back(k);
        j["oracle"] = *oracle;
        j["agrees"] = *oracle == inst.predicted;
      }
      o.emit(j, [&] {
        std::vector<std::pair<std::string, std::string>> rows{
            {"family", to_string(*fam)},
            {"field", ext->id()},
            {"f", "x^" + std::to_string(r) + " h(x^" + std::to_string(q - 1) + ")"},
            {"h", format_polynomial(inst.map.h())}};
        if (!inst.applicable)
          rows.emplace_back("predicted", inst.note);
        else
          rows.emplace_back("predicted m", join(inst.predicted) + "  (of 1.." + std::to_string(inst.m_max) + ")");
        if (oracle) rows.emplace_back("oracle m", join(*oracle));
        print_table(out, rows);
      });
      if (!inst.applicable) return kNotApplicable;
      if (oracle && *oracle != inst.predicted) return kError;
      return kOk;
    }

    if (c_enum->parsed()) {
      auto F = ctx.resolve(field);
      EnumerateBounds b{parse_ranges(a_bounds), parse_ranges(r_bounds)};
      auto maps = enumerate_mto1(F, ell, m, b, limit);
      json list = json::array();
      for (const auto& mp : maps) list.push_back(branches_json(mp));
      json j{{"field", F->id()}, {"ell", ell}, {"m", m}, {"count", maps.size()}, {"maps", list}};
      o.emit(j, [&] {
        for (const auto& mp : maps) out << branches_text(mp) << "\n";
      });
      return kOk;
    }

    if (c_verify->parsed()) {
      SweepSpec spec;
      if (!sweep_file.empty()) {
        std::ifstream in(sweep_file);
        if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + sweep_file);
        std::stringstream ss;
        ss << in.rdbuf();
        spec = parse_sweep(ss.str());
      }
      if (!crit_id.empty()) apply_sweep_option(spec, "criterion", crit_id);
      if (!fields.empty()) apply_sweep_option(spec, "field", fields);
      if (!ells.empty()) apply_sweep_option(spec, "ell", ells);
      if (!mode.empty()) apply_sweep_option(spec, "mode", mode);
      if (r_min) spec.r_min = r_min;
      if (r_max) spec.r_max = r_max;
      if (a_min) spec.a_min = a_min;
      if (a_max) spec.a_max = a_max;
      if (m_min) spec.m_min = m_min;
      if (m_max) spec.m_max = m_max;
      if (samples) spec.samples = *samples;
      if (cap) spec.cap = *cap;
      if (seed_given) spec.seed = seed;
      spec.threads = threads;
      auto rep = differential_verify(spec, [&](const std::string& id) { return ctx.resolve(id); });
      o.emit(to_json(rep, timing), [&] {
        std::vector<std::pair<std::string, std::string>> rows{
            {"criterion", rep.criterion},
            {"maps", std::to_string(rep.maps)},
            {"cases", std::to_string(rep.total_cases)},
            {"not applicable", std::to_string(rep.not_applicable)},
            {"mismatches", std::to_string(rep.mismatch_count)}};
        if (timing) rows.emplace_back("seconds", std::to_string(rep.runtime_seconds));
        print_table(out, rows);
        for (const auto& mm : rep.mismatches)
          out << "  " << mm.params.dump() << " m=" << mm.m << " criterion=" << mm.criterion
              << " oracle=" << mm.oracle << "\n";
      });
      return rep.ok() ? kOk : kError;
    }
  } catch (const Error& e) {
    err << "gcm: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "gcm: " << e.what() << "\n";
    return kError;
  }
  err << "gcm: no subcommand\n";
  return kError;
}

}  // namespace gcm::cli
