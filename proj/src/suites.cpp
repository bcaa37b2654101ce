#include "mms/suites.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "mms/errors.hpp"

namespace mms {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::string label(const std::string& suite, const GroupSpec& spec) {
  return suite + "/" + family_name(spec.family) + "(" + std::to_string(spec.level) + ")";
}

ItemStatus verdict(bool ok) { return ok ? ItemStatus::Pass : ItemStatus::Fail; }

// p^n with p prime; p = 0 for other levels.
std::pair<long, long> prime_power(long n) {
  if (n < 2) return {0, 0};
  long p = 2;
  while (n % p) ++p;
  long e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return n == 1 ? std::pair<long, long>{p, e} : std::pair<long, long>{0, 0};
}

std::string join(const std::vector<Integer>& xs) {
  std::string s;
  for (auto& x : xs) s += (s.empty() ? "" : ",") + to_string(x);
  return s;
}

std::vector<SymbolSpace> spaces(const SuiteConfig& config, const std::string& suite) {
  std::vector<long> levels = config.levels.empty() ? default_levels(suite, config.family) : config.levels;
  std::vector<SymbolSpace> out;
  for (long n : levels) {
    if (n < 1) throw UsageError("levels must be positive");
    out.push_back(build_space(make_spec(config.family, n)));
  }
  return out;
}

void rank_suite(const SuiteConfig& config, std::vector<SuiteItem>& items) {
  for (auto& s : spaces(config, "rank")) {
    const auto& inv = s.invariants();
    const long expect = 2 * inv.genus + 2 * (inv.cusps - 1);
    items.push_back({label("rank", s.spec()), verdict(s.rank() == expect),
                     "rank " + std::to_string(s.rank()) + ", 2g+2(c-1) = " + std::to_string(expect)});

    ExactSequenceReport ex = exact_sequence_check(s);
    items.push_back({label("exact", s.spec()), verdict(ex.holds),
                     "ker(pi) rank " + std::to_string(ex.kernel_rank) + ", coker rank " +
                         std::to_string(ex.coker_rank) + ", coker torsion [" + join(ex.coker_torsion) + "]"});

    Integer expect_index = 1;
    for (auto& c : s.cusps().classes()) expect_index *= c.width;
    expect_index /= s.cusps().d_gamma();
    auto idx = sublattice_index(boundary_kernel(s), homology_sublattice(s));
    items.push_back({label("h1index", s.spec()), verdict(idx && *idx == expect_index),
                     "[ker d : H1(Y)] = " + (idx ? to_string(*idx) : std::string("infinite")) +
                         ", (1/d) prod e_c = " + to_string(expect_index)});
  }
}

void manin_suite(const SuiteConfig& config, std::vector<SuiteItem>& items) {
  for (auto& s : spaces(config, "manin")) {
    auto idx = manin_index(s);
    std::string shown = idx ? to_string(*idx) : "infinite";
    auto [p, e] = prime_power(s.spec().level);
    if (p < 5) {
      // Outside p^n with p >= 5 the index is only recorded.
      items.push_back({label("manin", s.spec()), ItemStatus::Report, "index " + shown});
      continue;
    }
    const long expect = (s.spec().family == Family::Gamma0 && p % 3 == 1) ? 3 : 1;
    items.push_back({label("manin", s.spec()), verdict(idx && *idx == expect),
                     "index " + shown + ", expected " + std::to_string(expect)});
  }
}

void hecke_suite(const SuiteConfig& config, std::vector<SuiteItem>& items) {
  for (long q : config.primes)
    if (!is_prime(q)) throw UsageError("--primes entries must be prime: " + std::to_string(q));
  for (auto& s : spaces(config, "hecke")) {
    HeckeLawReport r = verify_hecke_laws(s, config.primes);
    std::string id = label("hecke", s.spec());
    std::string dens;
    for (auto& op : r.operators) dens += (dens.empty() ? "" : " ") + op.name + ":" + to_string(op.denominator);
    items.push_back({id + "/integral", verdict(r.integral), dens});
    items.push_back({id + "/denominators", verdict(r.denominators_bounded), dens});
    items.push_back({id + "/routes", verdict(r.routes_agree), ""});
    items.push_back({id + "/commute", verdict(r.commute), ""});
    items.push_back({id + "/pi_equivariant", verdict(r.pi_equivariant), ""});
    items.push_back({id + "/conj_commutes", verdict(r.conj_commutes), ""});
    items.push_back({id + "/sublattices", verdict(r.preserves_sublattices), ""});
    if (r.eisenstein_checked) items.push_back({id + "/eisenstein", verdict(r.eisenstein), "T_q = q+1 on ker(pi)"});
    for (auto& f : r.failures) items.push_back({id + "/failure", ItemStatus::Fail, f});
  }
}

void pairing_suite(const SuiteConfig& config, std::vector<SuiteItem>& items) {
  for (auto& s : spaces(config, "pairing")) {
    std::string id = label("pairing", s.spec());
    PairingMatrix p = pairing_matrix(s);
    bool antisym = p.mat == MatQ(-p.mat.transpose());
    items.push_back({id + "/antisymmetric", verdict(antisym && p.six_times.cast<Rational>() == MatQ(p.mat * Rational(6))),
                     "6<,> integral"});
    MatQ c = complex_conjugation(s).mat;
    items.push_back({id + "/conj", verdict(MatQ(c * p.mat) == MatQ(-p.mat * c.transpose())), ""});

    PerfectnessReport r = perfectness_report(s, p);
    std::string perfect_detail = "elementary divisors of 6<,> [" + join(r.elementary_divisors) + "], Z[1/" +
                                 to_string(r.inverted) + "]";
    const bool covered = s.spec().family == Family::Gamma0 && is_prime(s.spec().level) && s.spec().level >= 5;
    items.push_back({id + "/perfect", covered ? verdict(r.perfect) : ItemStatus::Report,
                     perfect_detail + (r.perfect ? " perfect" : " not perfect")});

    if (is_prime_power(s.spec().level) || s.spec().level == 1) {
      for (long q : config.primes) {
        if ((2 * s.spec().level) % q == 0 || !is_prime(q)) continue;
        items.push_back({id + "/adjoint(T" + std::to_string(q) + ")", verdict(adjointness_check(s, q)), ""});
      }
    }
    items.push_back({id + "/G_identity", verdict(verify_G_identity(s, p)), ""});

    std::string det_detail = "det " + to_string(r.det) + ", Pf " + to_string(r.pfaffian) + ", (1/d) prod e_c " +
                             to_string(r.expected_det);
    items.push_back({id + "/det", config.strict ? verdict(r.det_matches) : ItemStatus::Report, det_detail});
  }
}

void eis_suite(const SuiteConfig& config, std::vector<SuiteItem>& items) {
  const double tol = config.tolerance.value_or(numeric_settings().tolerance);
  auto describe = [](const NumericReport& r) {
    return "lhs " + num(r.lhs.real()) + ", rhs " + num(r.rhs.real()) + ", rel " + num(r.rel_error);
  };
  for (long pn : config.pn) {
    LogdetReports r;
    try {
      r = logdet_identity(pn, tol);
    } catch (const Unsupported&) {
      throw UsageError("--pn entries must be odd prime powers: " + std::to_string(pn));
    }
    std::string id = "eis/" + std::to_string(pn);
    items.push_back({id + "/detM'", verdict(r.m_prime.pass), describe(r.m_prime)});
    items.push_back({id + "/detM''", verdict(r.m_double_prime.pass), describe(r.m_double_prime)});
    items.push_back({id + "/detM'_log", ItemStatus::Report, describe(r.m_prime_corrected)});

    if (!is_prime(pn) || pn < 5) continue;
    Gamma0pConstants c = gamma0p_constants(pn);
    const long d = std::gcd(pn - 1, 12L);
    bool ok = c.d == d && c.n == (pn - 1) / d && c.coefficients[0] == c.n;
    for (long k = 1; k < static_cast<long>(c.coefficients.size()); ++k) {
      long sigma = 0;
      for (long m = 1; m <= k; ++m)
        if (k % m == 0 && m % pn) sigma += m;
      ok = ok && c.coefficients[k] * d == 24 * sigma;
    }
    const double l = -12.0 / static_cast<double>(d) * std::log(static_cast<double>(pn));
    ok = ok && std::abs(c.l_value - l) <= 1e-12 * std::abs(l) && c.l_value != 0 && c.two_pi_a0 != 0;
    items.push_back({"eis/gamma0(" + std::to_string(pn) + ")/constants", verdict(ok),
                     "n " + std::to_string(c.n) + ", L(E,1) " + num(c.l_value) + ", 2pi a0 " + num(c.two_pi_a0)});
  }
}

}  // namespace

std::string status_name(ItemStatus s) {
  switch (s) {
    case ItemStatus::Pass: return "pass";
    case ItemStatus::Fail: return "fail";
    case ItemStatus::Report: return "report";
  }
  return "?";
}

bool SuiteReport::passed() const { return failures().empty(); }

std::vector<std::string> SuiteReport::failures() const {
  std::vector<std::string> out;
  for (auto& i : items)
    if (i.status == ItemStatus::Fail) out.push_back(i.id);
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"rank", "manin", "hecke", "pairing", "eis", "all"};
  return names;
}

std::vector<long> default_levels(const std::string& suite, Family family) {
  if (suite == "manin") return {5, 7, 11, 13, 25, 49};
  if (family == Family::Gamma1) return {5, 7, 11, 13};
  return {1, 5, 7, 9, 11, 13, 23, 25};
}

SuiteReport run_suite(const SuiteConfig& config) {
  if (config.tolerance && !(*config.tolerance > 0)) throw UsageError("tolerance must be positive");
  if (config.family == Family::FullSL2) throw UsageError("family must be gamma0 or gamma1");
  SuiteReport report{config.suite, {}};
  const bool all = config.suite == "all";
  bool known = all;
  auto run = [&](const char* name, void (*fn)(const SuiteConfig&, std::vector<SuiteItem>&)) {
    if (all || config.suite == name) {
      known = true;
      fn(config, report.items);
    }
  };
  try {
    run("rank", rank_suite);
    run("manin", manin_suite);
    run("hecke", hecke_suite);
    run("pairing", pairing_suite);
    run("eis", eis_suite);
  } catch (const InvalidSpec& e) {
    throw UsageError(e.what());
  }
  if (!known) throw UsageError("unknown suite: " + config.suite);
  return report;
}

int exit_code(const SuiteReport& report) { return report.passed() ? 0 : 1; }

Json report_to_json(const SuiteReport& report) {
  Json doc;
  doc["suite"] = report.suite;
  Json items = Json::array();
  for (auto& i : report.items) items.push_back({{"id", i.id}, {"status", status_name(i.status)}, {"detail", i.detail}});
  doc["items"] = std::move(items);
  doc["version"] = kVersion;
  return doc;
}

std::string render(const SuiteReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return report_to_json(report).dump(2) + "\n";
  std::ostringstream os;
  os << "# suite " << report.suite << "\n\n| id | status | detail |\n|---|---|---|\n";
  for (auto& i : report.items) os << "| " << i.id << " | " << status_name(i.status) << " | " << i.detail << " |\n";
  os << "\n" << (report.passed() ? "all assertions passed" : "failing: " + std::to_string(report.failures().size()))
     << "\n";
  return os.str();
}

}  // namespace mms
