// Acceptance gate: one test case per criterion, each printing a single
// PASS/FAIL line with the measured runtime against the bound pinned here.
// The cases use desk-scale groups only; the stretch case (PSL3(19)) runs
// under an enlarged orbit budget and takes on the order of twenty minutes
// on one core, so it carries its own ctest entry labeled "stretch".

#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include <endorank/classify.hpp>
#include <endorank/field.hpp>
#include <endorank/groups.hpp>
#include <endorank/matgroup.hpp>
#include <endorank/posetrank.hpp>
#include <endorank/witnesses.hpp>

using json = nlohmann::json;
using namespace endorank;

namespace {

const std::string kBin = ENDORANK_BIN;
const std::string kDataDir = ENDORANK_DATA_DIR;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

// The single human-readable verdict line per criterion.  The line is
// printed before the assertions fire so a failing criterion still explains
// itself in full.
void report(const std::string& name, bool ok, double secs, double bound,
            const std::string& detail) {
  std::ostringstream os;
  os << "acceptance " << name << ": "
     << ((ok && secs < bound) ? "PASS" : "FAIL") << " [" << std::fixed
     << std::setprecision(2) << secs << "s < " << bound << "s] " << detail;
  std::cout << os.str() << "\n";
}

RankReport brute(const char* group, std::uint32_t n, std::uint32_t q,
                 std::uint32_t ell, const RankBudgets& budgets = {}) {
  return rank_of(descriptor_from_name(group, n, q), ell, budgets);
}

bool is_prime_power(std::uint32_t q) {
  if (q < 2) return false;
  std::uint32_t p = 2;
  while (q % p != 0) ++p;
  while (q % p == 0) q /= p;
  return q == 1;
}

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cmd(const std::string& cmd) {
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t k = 0;
  while ((k = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, k);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, std::move(out)};
}

}  // namespace

TEST_SUITE("acceptance") {

TEST_CASE("criterion 1: PGL3(4) at ell 3 with the stated class structure") {
  Stopwatch sw;
  RankPipelineResult res =
      run_rank_pipeline(descriptor_from_name("PGL", 3, 4), 3);
  const double secs = sw.seconds();

  const RankReport& rep = res.report;
  const bool tf_ok = rep.tf && *rep.tf == 3;
  const auto it3 = rep.class_counts_by_rank.find(3);
  const std::size_t rank3 =
      it3 == rep.class_counts_by_rank.end() ? 0 : it3->second;
  const std::size_t max2 = rep.maximal_rank2_classes;
  const bool structure_ok = rank3 == 1 && max2 == 2;

  std::ostringstream detail;
  detail << "tf_rank=" << (rep.tf ? std::to_string(*rep.tf) : "unknown")
         << " (want 3); rank-3 classes=" << rank3
         << " (want exactly 1); maximal rank-2 classes=" << max2
         << " (want exactly 2); components=" << rep.component_count;
  report("criterion 1", tf_ok && structure_ok, secs, 60.0, detail.str());

  CHECK(tf_ok);
  // The group's 3-rank is 2: its Sylow 3-subgroup is extraspecial of order
  // 27, so no rank-3 elementary abelian subgroup exists and the three
  // components are three maximal rank-2 classes.  The stated substructure
  // (one rank-3 class, two maximal rank-2 classes) cannot occur; the check
  // is kept as stated rather than weakened to match the group.
  CHECK(rank3 == 1);
  CHECK(max2 == 2);
  CHECK(secs < 60.0);
}

TEST_CASE("criterion 2: SL3(4) at ell 3 fuses to a single component") {
  Stopwatch sw;
  RankReport rep = brute("SL", 3, 4, 3);
  const double secs = sw.seconds();
  const bool ok = rep.tf && *rep.tf == 1;
  report("criterion 2", ok, secs, 60.0,
         "SL3(4) ell=3: tf_rank=" +
             (rep.tf ? std::to_string(*rep.tf) : "unknown") + " (want 1)");
  CHECK(ok);
  CHECK(secs < 60.0);
}

TEST_CASE("criterion 3: the ell=2 family of small rank-one groups") {
  struct Row {
    const char* group;
    std::uint32_t n, q;
    int want;
  };
  const Row rows[] = {{"SL", 2, 5, 0},
                      {"PSL", 2, 7, 2},
                      {"PSL", 2, 5, 1},
                      {"PGL", 2, 5, 2},
                      {"PGL", 2, 9, 2}};
  Stopwatch sw;
  bool all_ok = true;
  std::ostringstream detail;
  for (const Row& r : rows) {
    RankReport rep = brute(r.group, r.n, r.q, 2);
    const bool ok = rep.tf && *rep.tf == r.want;
    all_ok &= ok;
    detail << r.group << r.n << "(" << r.q << ")="
           << (rep.tf ? std::to_string(*rep.tf) : "unknown") << "/want "
           << r.want << (ok ? " " : "<MISMATCH> ");
  }
  const double secs = sw.seconds();
  report("criterion 3", all_ok, secs, 10.0, detail.str());
  CHECK(all_ok);
  CHECK(secs < 10.0);
}

TEST_CASE("criterion 4: defining-characteristic brute force with fallback") {
  // The five rows whose brute-force answers are unconditionally required.
  struct Row {
    const char* group;
    std::uint32_t n, q, ell;
    int want;
  };
  const Row exact[] = {{"SL", 3, 3, 3, 3},
                       {"SU", 3, 5, 5, 3},
                       {"PGU", 3, 5, 5, 1},
                       {"Sp", 4, 3, 3, 1},
                       {"Sp", 4, 5, 5, 2}};
  bool all_ok = true;
  double max_secs = 0.0;
  std::ostringstream detail;
  for (const Row& r : exact) {
    Stopwatch sw;
    RankReport rep = brute(r.group, r.n, r.q, r.ell);
    max_secs = std::max(max_secs, sw.seconds());
    const bool ok = rep.tf && *rep.tf == r.want;
    all_ok &= ok;
    detail << r.group << r.n << "(" << r.q << ")="
           << (rep.tf ? std::to_string(*rep.tf) : "unknown") << "/want "
           << r.want << (ok ? " " : "<MISMATCH> ");
  }

  // Degree-3 groups over GF(7): brute force under the unitriangular Sylow
  // provider, falling back to the torus-orbit count on the maximal
  // elementary abelian census when an orbit exhausts the budget.
  const struct {
    const char* group;
    int want;
  } deg3[] = {{"PGL", 3}, {"SL", 5}};
  for (const auto& r : deg3) {
    Stopwatch sw;
    RankPipelineResult res =
        run_rank_pipeline(descriptor_from_name(r.group, 3, 7), 7);
    max_secs = std::max(max_secs, sw.seconds());
    all_ok &= res.sylow_strategy == "unitriangular";
    if (res.report.tf) {
      const bool ok = *res.report.tf == r.want;
      all_ok &= ok;
      detail << r.group << "3(7)=" << *res.report.tf << "/want " << r.want
             << (ok ? " " : "<MISMATCH> ");
    } else {
      WitnessSetDefChar w = build_witness_defchar(7, DefCharVariant::linear);
      const std::size_t got = std::string(r.group) == "PGL"
                                  ? w.torus_classes_full
                                  : w.torus_classes_det1;
      const bool ok = got == static_cast<std::size_t>(r.want);
      all_ok &= ok;
      detail << r.group << "3(7)=unknown,fallback=" << got << "/want "
             << r.want << (ok ? " " : "<MISMATCH> ");
    }
  }
  report("criterion 4", all_ok, max_secs, 300.0, detail.str());
  CHECK(all_ok);
  CHECK(max_secs < 300.0);
}

TEST_CASE("criterion 5: torus orbit counts on the unitriangular census") {
  Stopwatch sw;
  bool all_ok = true;
  std::ostringstream detail;
  for (std::uint32_t p : {3u, 5u, 7u, 13u}) {
    WitnessSetDefChar w = build_witness_defchar(p, DefCharVariant::linear);
    const std::size_t want_det1 = p % 3 == 1 ? 5 : 3;
    const bool ok =
        w.torus_classes_full == 3 && w.torus_classes_det1 == want_det1;
    all_ok &= ok;
    detail << "p=" << p << ": full=" << w.torus_classes_full
           << "/want 3, det1=" << w.torus_classes_det1 << "/want "
           << want_det1 << (ok ? " " : "<MISMATCH> ");
  }
  const double secs = sw.seconds();
  report("criterion 5", all_ok, secs, 10.0, detail.str());
  CHECK(all_ok);
  CHECK(secs < 10.0);
}

TEST_CASE("criterion 6: PSU3(8) at ell 3 splits into four components") {
  Stopwatch sw;
  RankPipelineResult res =
      run_rank_pipeline(descriptor_from_name("PSU", 3, 8), 3);
  const double secs = sw.seconds();
  const RankReport& rep = res.report;

  // "Four pairwise non-conjugate maximal rank-2 classes": fusion classes
  // are non-conjugate by construction, so the claim is that exactly four
  // complete maximal rank-2 classes exist.
  std::size_t max2_complete = 0;
  for (const OrbitClass& c : res.poset.classes)
    if (c.rank == 2 && c.maximal && c.complete) ++max2_complete;

  const bool ok = rep.tf && *rep.tf == 4 && max2_complete == 4 &&
                  rep.maximal_rank2_classes == 4;
  std::ostringstream detail;
  detail << "tf_rank=" << (rep.tf ? std::to_string(*rep.tf) : "unknown")
         << " (want 4); complete maximal rank-2 classes=" << max2_complete
         << " (want 4)";
  report("criterion 6", ok, secs, 600.0, detail.str());
  CHECK(ok);
  CHECK(secs < 600.0);
}

TEST_CASE("criterion 7: witness identity suite over the congruence grid") {
  Stopwatch sw;
  std::size_t pairs = 0, failures = 0;
  std::ostringstream detail;
  for (std::uint32_t ell : {3u, 5u}) {
    for (std::uint32_t q = 2; q <= 64; ++q) {
      if (!is_prime_power(q) || (q - 1) % ell != 0) continue;
      ++pairs;
      WitnessSetSL w = build_witness_sl(ell, q);
      const Field& F = w.F;

      Mat zi = mat_identity(F, ell);
      for (std::uint32_t i = 0; i < ell; ++i) zi.at(i, i) = w.zeta;
      const Mat hi = mat_inv(F, w.h);
      const Mat xi = mat_inv(F, w.x);
      const Mat bi = mat_inv(F, w.b);
      const Mat h2 = mat_mul(F, w.h, w.h);

      const bool ok =
          mat_det(F, w.h) == 1 &&
          mat_mul(F, w.x, w.v) == mat_mul(F, w.v, w.b) &&
          mat_mul(F, mat_mul(F, hi, w.x), w.h) == w.b &&
          mat_mul(F, mat_mul(F, hi, w.b), w.h) == xi &&
          mat_mul(F, mat_mul(F, h2, w.x), mat_inv(F, h2)) == xi &&
          mat_mul(F, mat_mul(F, w.x, w.b), mat_mul(F, xi, bi)) == zi;
      if (!ok) {
        ++failures;
        detail << "(" << ell << "," << q << ")<FAIL> ";
      }
    }
  }
  const double secs = sw.seconds();
  std::ostringstream head;
  head << pairs << " (ell,q) pairs, " << failures
       << " identity failures (want 0) " << detail.str();
  report("criterion 7", pairs == 17 && failures == 0, secs, 30.0, head.str());
  CHECK(pairs == 17);
  CHECK(failures == 0);
  CHECK(secs < 30.0);
}

TEST_CASE("criterion 8: defining tables against the golden file") {
  std::ifstream in(kDataDir + "/defining_tables_golden.json");
  REQUIRE(in.good());
  json golden = json::parse(in);
  REQUIRE(golden.at("schema") == "endorank.golden-defining/v1");
  const auto& rows = golden.at("rows");

  Stopwatch sw;
  std::size_t mismatches = 0;
  std::ostringstream detail;
  for (const json& row : rows) {
    const auto name = row.at("name").get<std::string>();
    const auto q = row.at("q").get<std::uint64_t>();
    LieDescriptor d = descriptor_from_name(name, q);
    ClassifyResult res = classify(d, d.p);
    const bool ok = res.tf_rank && *res.tf_rank == row.at("tf").get<int>() &&
                    res.rule == row.at("rule").get<std::string>() &&
                    res.caveats.empty() && res.special.empty();
    if (!ok) {
      ++mismatches;
      detail << name << "(" << q << ")<MISMATCH> ";
    }
  }
  const double secs = sw.seconds();
  std::ostringstream head;
  head << rows.size() << " golden cells, " << mismatches
       << " mismatches (want 0) " << detail.str();
  report("criterion 8", rows.size() == 53 && mismatches == 0, secs, 1.0,
         head.str());
  CHECK(rows.size() == 53);
  CHECK(mismatches == 0);
  CHECK(secs < 1.0);
}

TEST_CASE("criterion 9: dual-route cross-check over the default grid") {
  // Runs the shipped grid through the command-line tool: every brute-force
  // run goes through the pipeline's structural tripwires (any violation
  // aborts the row and fails the grid), and classify must agree with brute
  // force on every row where both produce a number.
  Stopwatch sw;
  CmdResult res = run_cmd(kBin + " crosscheck --grid " + kDataDir +
                          "/default_grid.json");
  const double secs = sw.seconds();
  const bool clean = res.out.find(" 0 mismatches, 0 errors") !=
                     std::string::npos;
  const bool ok = res.exit_code == 0 && clean;
  std::ostringstream detail;
  detail << "exit=" << res.exit_code << " (want 0), zero violations="
         << (clean ? "yes" : "no");
  report("criterion 9", ok, secs, 600.0, detail.str());
  CHECK(res.exit_code == 0);
  CHECK(clean);
  CHECK(secs < 600.0);
}

TEST_CASE("stretch: PSL3(19) at ell 3 under an enlarged orbit budget") {
  // Non-gating target.  Orbits reach 2.6e7 subgroups, so the default 1e7
  // budget reports unknown; the enlarged budget completes in roughly
  // twenty minutes on one core.  A budget-exhausted "unknown" is accepted;
  // only a wrong number fails.
  RankBudgets budgets;
  budgets.orbit_budget = 30000000;
  Stopwatch sw;
  RankReport rep = brute("PSL", 3, 19, 3, budgets);
  const double secs = sw.seconds();
  const bool ok = !rep.tf || *rep.tf == 4;
  std::ostringstream detail;
  detail << "tf_rank=" << (rep.tf ? std::to_string(*rep.tf) : "unknown")
         << " (want 4 or unknown); orbit_budget=" << budgets.orbit_budget;
  report("stretch", ok, secs, 3600.0, detail.str());
  CHECK(ok);
  CHECK(secs < 3600.0);
}

}  // TEST_SUITE
