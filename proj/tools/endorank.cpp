// endorank: command-line surface over the endotrivial-rank toolkit.
//
// Subcommands:
//   classify    symbolic decision tree on a Lie-type descriptor
//   rank        brute-force orbit-poset pipeline on a matrix group
//   crosscheck  run both routes over a JSON grid file and compare answers
//   witness     rebuild the explicit witness subgroups, dump identity checks
//
// Machine output is JSON with versioned schemas and is byte-identical across
// runs for fixed arguments; every rank document embeds the budgets and seed
// that produced it, so an "unknown" outcome stays attributable to a specific
// budget.  Setting ENDORANK_CACHE_DIR enables a content-addressed cache of
// rank runs keyed by descriptor, prime, budgets, seed, and schema version.
//
// Exit codes: 0 definite answer (all rows agree, all identities hold);
// 3 qualified answer (caveats, unresolved cases, or budget exhaustion);
// 1 error, identity failure, or cross-check disagreement.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <endorank/classify.hpp>
#include <endorank/groups.hpp>
#include <endorank/matgroup.hpp>
#include <endorank/posetrank.hpp>
#include <endorank/witnesses.hpp>

namespace {

using json = nlohmann::json;
using endorank::LieDescriptor;
using endorank::RankBudgets;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitQualified = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

char family_letter(endorank::RootFamily f) {
  switch (f) {
    case endorank::RootFamily::A: return 'A';
    case endorank::RootFamily::B: return 'B';
    case endorank::RootFamily::C: return 'C';
    case endorank::RootFamily::D: return 'D';
    case endorank::RootFamily::E: return 'E';
    case endorank::RootFamily::F: return 'F';
    case endorank::RootFamily::G: return 'G';
  }
  return '?';
}

std::uint64_t lie_q(const LieDescriptor& d) {
  std::uint64_t q = 1;
  for (int i = 0; i < d.r; ++i) q *= d.p;
  return q;
}

// Short display label, e.g. "3D4(5)", "A2(4) ad", "A4(11) psl-like".
std::string lie_label(const LieDescriptor& d) {
  if (d.factors.size() >= 2) {
    std::string s;
    for (std::size_t i = 0; i < d.factors.size(); ++i) {
      if (i) s += " x ";
      s += lie_label(d.factors[i]);
    }
    return s;
  }
  std::string s;
  if (d.twist > 1) s += std::to_string(d.twist);
  s += family_letter(d.family);
  s += std::to_string(d.n);
  s += "(" + std::to_string(lie_q(d)) + ")";
  if (!d.associated.empty())
    s += " " + d.associated;
  else if (!d.isogeny.empty() && d.isogeny != "sc")
    s += " " + d.isogeny;
  return s;
}

// ---------------------------------------------------------------- rank runs

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json budgets_json(const RankBudgets& b) {
  return json{{"enum_bound", b.enum_bound},
              {"orbit_budget", b.orbit_budget},
              {"subgroup_cap", b.subgroup_cap},
              {"threads", b.threads}};
}

// Canonical identity of a rank run; doubles as the cache key.  Budgets and
// seed belong to the identity because the emitted document embeds them:
// serving a cached run under different budgets would produce a document
// that lies about how its result was obtained.
std::string run_key(const std::string& group, std::uint32_t ell,
                    const RankBudgets& b, std::uint64_t seed) {
  std::ostringstream ss;
  ss << "endorank.rankrun/v1|" << group << "|ell=" << ell
     << "|enum=" << b.enum_bound << "|cap=" << b.subgroup_cap
     << "|budget=" << b.orbit_budget << "|threads=" << b.threads
     << "|seed=" << seed;
  return ss.str();
}

std::optional<std::filesystem::path> cache_path(const std::string& key) {
  const char* dir = std::getenv("ENDORANK_CACHE_DIR");
  if (!dir || !*dir) return std::nullopt;
  std::ostringstream name;
  name << "rank-" << std::hex << std::setw(16) << std::setfill('0')
       << fnv1a64(key) << ".json";
  return std::filesystem::path(dir) / name.str();
}

struct RankRun {
  json doc;
  bool cached = false;
};

RankRun run_rank_cached(const endorank::GroupDescriptor& gd, std::uint32_t ell,
                        const RankBudgets& budgets, std::uint64_t seed) {
  if (!is_prime(ell))
    throw std::invalid_argument("ell must be prime: " + std::to_string(ell));
  const std::string name = endorank::group_name(gd);
  const std::string key = run_key(name, ell, budgets, seed);
  const auto path = cache_path(key);
  if (path && std::filesystem::exists(*path)) {
    try {
      json j = json::parse(read_file(path->string()));
      // The stored key is compared in full so a hash collision degrades to
      // a recompute, never to a wrong answer.
      if (j.value("schema", "") == "endorank.rankrun/v1" &&
          j.value("run_key", "") == key)
        return {std::move(j), true};
    } catch (const std::exception&) {
      // Unreadable cache entries are treated as misses and overwritten.
    }
  }

  endorank::RankPipelineResult res =
      endorank::run_rank_pipeline(gd, ell, budgets);
  json j;
  j["schema"] = "endorank.rankrun/v1";
  j["run_key"] = key;
  j["group"] = name;
  j["order"] = endorank::exact_order(gd).str();
  j["ell"] = ell;
  j["budgets"] = budgets_json(budgets);
  j["seed"] = seed;
  j["sylow_strategy"] = res.sylow_strategy;
  j["report"] = json::parse(endorank::report_to_json(res.report));
  j["poset"] = json::parse(endorank::poset_to_json(res.poset));

  if (path) {
    try {
      std::filesystem::create_directories(path->parent_path());
      auto tmp = *path;
      tmp += ".tmp";
      write_file(tmp.string(), j.dump(2) + "\n");
      std::filesystem::rename(tmp, *path);
    } catch (const std::exception&) {
      // The cache is best-effort; a failed write never fails the run.
    }
  }
  return {std::move(j), false};
}

endorank::OrbitPoset poset_from_doc(const json& j) {
  endorank::OrbitPoset p;
  p.ell = j.at("ell").get<std::uint32_t>();
  p.center_rank = j.at("center_rank").get<int>();
  p.all_complete = j.at("all_complete").get<bool>();
  for (const json& jc : j.at("classes")) {
    endorank::OrbitClass c;
    c.id = jc.at("id").get<std::uint32_t>();
    c.rank = jc.at("rank").get<int>();
    c.orbit_size = jc.at("orbit_size").get<std::uint64_t>();
    c.complete = jc.at("complete").get<bool>();
    c.maximal = jc.at("maximal").get<bool>();
    c.members = jc.at("members").get<std::vector<std::uint32_t>>();
    p.classes.push_back(std::move(c));
  }
  for (const json& je : j.at("edges"))
    p.edges.emplace_back(je.at(0).get<std::uint32_t>(),
                         je.at(1).get<std::uint32_t>());
  p.components =
      j.at("components").get<std::vector<std::vector<std::uint32_t>>>();
  return p;
}

void print_rank_text(std::ostream& os, const json& doc) {
  const json& rep = doc.at("report");
  os << "group: " << doc.at("group").get<std::string>() << "\n";
  os << "order: " << doc.at("order").get<std::string>() << "\n";
  os << "ell: " << rep.at("ell").get<std::uint32_t>() << "\n";
  const json& b = doc.at("budgets");
  os << "budgets: enum_bound=" << b.at("enum_bound").get<std::uint64_t>()
     << " subgroup_cap=" << b.at("subgroup_cap").get<std::uint64_t>()
     << " orbit_budget=" << b.at("orbit_budget").get<std::uint64_t>()
     << " threads=" << b.at("threads").get<std::uint32_t>() << "\n";
  os << "seed: " << doc.at("seed").get<std::uint64_t>() << "\n";
  os << "sylow strategy: " << doc.at("sylow_strategy").get<std::string>()
     << "\n";
  os << "ell rank: " << rep.at("ell_rank").get<int>() << "\n";
  os << "classes by rank:";
  for (const auto& [rank, count] : rep.at("class_counts_by_rank").items())
    os << " " << rank << ":" << count.get<std::uint64_t>();
  os << "\n";
  os << "maximal rank-2 classes: "
     << rep.at("maximal_rank2_classes").get<std::uint64_t>() << "\n";
  os << "components: " << rep.at("component_count").get<std::uint64_t>()
     << "\n";
  const json& tf = rep.at("tf_rank");
  if (tf.is_null())
    os << "tf_rank: unknown\n";
  else
    os << "tf_rank: " << tf.get<int>() << "\n";
  os << "rule: " << rep.at("rule").get<std::string>() << "\n";
  for (const json& c : rep.at("caveats"))
    os << "caveat: " << c.get<std::string>() << "\n";
}

// ---------------------------------------------------------------- witnesses

json mat_json(const endorank::Mat& m) {
  json rows = json::array();
  for (std::uint32_t i = 0; i < m.n; ++i) {
    json row = json::array();
    for (std::uint32_t j = 0; j < m.n; ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"n", m.n}, {"rows", rows}};
}

json field_json(const endorank::Field& F) {
  return json{{"p", F.p()},
              {"k", F.k()},
              {"q", F.q()},
              {"defining_poly", F.defining_poly()}};
}

json subgroup_json(const endorank::Subgroup& s) {
  return json{{"order", s.key.elems.size()},
              {"rank", s.rank},
              {"elementary_abelian", s.elementary_abelian}};
}

json checks_json(const std::vector<std::string>& checks) {
  json a = json::array();
  for (const std::string& c : checks)
    a.push_back(json{{"name", c}, {"pass", true}});
  return a;
}

// --------------------------------------------------------------- crosscheck

struct GridEntry {
  std::optional<endorank::GroupDescriptor> gd;  // brute-force route
  std::optional<LieDescriptor> lie;             // symbolic route
  std::string label;
  std::uint32_t ell = 0;
  std::optional<int> expected;  // empty means "derive"
  RankBudgets budgets;
};

std::vector<GridEntry> parse_grid(const std::string& text) {
  json j = json::parse(text);
  if (j.value("schema", "") != "endorank.grid/v1")
    throw std::invalid_argument("grid schema must be endorank.grid/v1");
  std::vector<GridEntry> out;
  for (const json& je : j.at("entries")) {
    GridEntry e;
    e.ell = je.at("ell").get<std::uint32_t>();
    if (!is_prime(e.ell))
      throw std::invalid_argument("grid entry ell must be prime");
    const json& exp = je.at("expected");
    if (exp.is_number_integer())
      e.expected = exp.get<int>();
    else if (exp != "derive")
      throw std::invalid_argument(
          "grid entry expected must be an integer or \"derive\"");
    if (je.contains("budgets")) {
      const json& jb = je.at("budgets");
      e.budgets.enum_bound = jb.value("enum_bound", e.budgets.enum_bound);
      e.budgets.subgroup_cap =
          jb.value("subgroup_cap", e.budgets.subgroup_cap);
      e.budgets.orbit_budget =
          jb.value("orbit_budget", e.budgets.orbit_budget);
      e.budgets.threads = jb.value("threads", e.budgets.threads);
      if (e.budgets.enum_bound == 0 || e.budgets.subgroup_cap == 0 ||
          e.budgets.orbit_budget == 0 || e.budgets.threads == 0)
        throw std::invalid_argument("grid budgets must be positive");
    }
    if (je.contains("group")) {
      const auto g = je.at("group").get<std::string>();
      const auto n = je.at("n").get<std::uint32_t>();
      const auto q = je.at("q").get<std::uint32_t>();
      e.gd = endorank::descriptor_from_name(g, n, q);
      e.label = endorank::group_name(*e.gd);
      // The symbolic route exists only for groups that are simple modulo
      // center; full linear/unitary/similitude groups run brute force only.
      try {
        e.lie = endorank::descriptor_from_name(g + std::to_string(n),
                                               std::uint64_t{q});
      } catch (const std::exception&) {
      }
    } else if (je.contains("descriptor")) {
      e.lie = endorank::descriptor_from_json(je.at("descriptor").dump());
      e.label = lie_label(*e.lie);
    } else {
      throw std::invalid_argument(
          "grid entry needs either group/n/q or descriptor");
    }
    out.push_back(std::move(e));
  }
  return out;
}

struct CrossRow {
  std::string label;
  std::uint32_t ell = 0;
  std::string classify_cell = "n/a";
  std::string brute_cell = "n/a";
  std::string expected_cell;
  std::string match_cell;
  bool mismatch = false;
  bool error = false;
  bool unknown = false;
};

CrossRow run_grid_entry(const GridEntry& e) {
  CrossRow row;
  row.label = e.label;
  row.ell = e.ell;
  row.expected_cell = e.expected ? std::to_string(*e.expected) : "derive";

  std::optional<int> cnum, bnum;
  if (e.lie) {
    try {
      endorank::ClassifyResult r = endorank::classify(*e.lie, e.ell);
      if (r.tf_rank) {
        cnum = *r.tf_rank;
        row.classify_cell = std::to_string(*cnum);
      } else {
        row.classify_cell = r.special.empty() ? "unknown" : r.special;
        row.unknown = true;
      }
    } catch (const std::exception& ex) {
      row.classify_cell = std::string("error: ") + ex.what();
      row.error = true;
    }
  }
  if (e.gd) {
    try {
      RankRun run = run_rank_cached(*e.gd, e.ell, e.budgets, /*seed=*/0);
      const json& tf = run.doc.at("report").at("tf_rank");
      if (tf.is_null()) {
        row.brute_cell = "unknown";
        row.unknown = true;
      } else {
        bnum = tf.get<int>();
        row.brute_cell = std::to_string(*bnum);
      }
    } catch (const std::exception& ex) {
      // This also catches the pipeline's internal tripwires (logic_error):
      // a structural violation must fail the grid, not hide in a cell.
      row.brute_cell = std::string("error: ") + ex.what();
      row.error = true;
    }
  }

  if (cnum && bnum && *cnum != *bnum) row.mismatch = true;
  if (e.expected) {
    if (cnum && *cnum != *e.expected) row.mismatch = true;
    if (bnum && *bnum != *e.expected) row.mismatch = true;
  }
  row.match_cell = row.error      ? "error"
                   : row.mismatch ? "MISMATCH"
                   : row.unknown  ? "unknown"
                                  : "yes";
  return row;
}

// ------------------------------------------------------------- subcommands

int cmd_classify(const std::string& family, int twist,
                 const std::string& isogeny, const std::string& associated,
                 std::uint64_t q, std::uint64_t ell,
                 const std::string& descriptor_json_path) {
  LieDescriptor d;
  if (!descriptor_json_path.empty()) {
    d = endorank::descriptor_from_json(read_file(descriptor_json_path));
  } else {
    if (family.size() < 2)
      throw std::invalid_argument(
          "--family expects a letter and a rank, e.g. A2 or D4");
    if (q == 0)
      throw std::invalid_argument("--q is required with --family");
    json j;
    j["family"] = family.substr(0, 1);
    j["n"] = std::stoi(family.substr(1));
    j["twist"] = twist;
    if (!isogeny.empty()) j["isogeny"] = isogeny;
    if (!associated.empty()) j["associated"] = associated;
    j["q"] = q;
    d = endorank::descriptor_from_json(j.dump());
  }
  endorank::ClassifyResult res = endorank::classify(d, ell);
  std::cout << endorank::classify_to_json(d, ell, res);
  if (!res.special.empty() || !res.caveats.empty() || !res.tf_rank)
    return kExitQualified;
  return kExitOk;
}

int cmd_rank(const std::string& group, std::uint32_t n, std::uint32_t q,
             std::uint32_t ell, const RankBudgets& budgets,
             std::uint64_t seed, const std::string& export_poset,
             const std::string& format) {
  endorank::GroupDescriptor gd = endorank::descriptor_from_name(group, n, q);
  RankRun run = run_rank_cached(gd, ell, budgets, seed);
  if (!export_poset.empty())
    write_file(export_poset, run.doc.at("poset").dump(2) + "\n");
  if (format == "json")
    std::cout << run.doc.dump(2) << "\n";
  else if (format == "dot")
    std::cout << endorank::poset_to_dot(poset_from_doc(run.doc.at("poset")));
  else
    print_rank_text(std::cout, run.doc);
  return run.doc.at("report").at("tf_rank").is_null() ? kExitQualified
                                                      : kExitOk;
}

int cmd_crosscheck(const std::string& grid_path, const std::string& format) {
  std::vector<GridEntry> entries = parse_grid(read_file(grid_path));
  std::vector<CrossRow> rows;
  rows.reserve(entries.size());
  std::size_t mismatches = 0, errors = 0, unknowns = 0;
  for (const GridEntry& e : entries) {
    rows.push_back(run_grid_entry(e));
    const CrossRow& r = rows.back();
    mismatches += r.mismatch;
    errors += r.error;
    unknowns += r.unknown && !r.mismatch && !r.error;
  }
  const bool ok = mismatches == 0 && errors == 0;

  if (format == "json") {
    json j;
    j["schema"] = "endorank.crosscheck/v1";
    j["grid"] = grid_path;
    j["entries"] = json::array();
    for (const CrossRow& r : rows)
      j["entries"].push_back(json{{"descriptor", r.label},
                                  {"ell", r.ell},
                                  {"classify", r.classify_cell},
                                  {"brute", r.brute_cell},
                                  {"expected", r.expected_cell},
                                  {"match", r.match_cell}});
    j["mismatches"] = mismatches;
    j["errors"] = errors;
    j["unknowns"] = unknowns;
    j["ok"] = ok;
    std::cout << j.dump(2) << "\n";
  } else {
    std::size_t w = 12;
    for (const CrossRow& r : rows) w = std::max(w, r.label.size() + 2);
    std::cout << "cross-check grid: " << grid_path << " (" << entries.size()
              << " entries)\n";
    std::cout << std::left << std::setw(static_cast<int>(w)) << "descriptor"
              << std::setw(5) << "ell" << std::setw(18) << "classify"
              << std::setw(18) << "brute" << std::setw(10) << "expected"
              << "match\n";
    for (const CrossRow& r : rows)
      std::cout << std::left << std::setw(static_cast<int>(w)) << r.label
                << std::setw(5) << r.ell << std::setw(18) << r.classify_cell
                << std::setw(18) << r.brute_cell << std::setw(10)
                << r.expected_cell << r.match_cell << "\n";
    std::cout << "summary: " << entries.size() << " entries, " << mismatches
              << " mismatches, " << errors << " errors, " << unknowns
              << " unknown\n";
  }
  return ok ? kExitOk : kExitError;
}

int cmd_witness(const std::string& variant, std::uint32_t ell,
                std::uint32_t q, std::uint32_t p, const std::string& form) {
  json j;
  j["schema"] = "endorank.witness/v1";
  j["variant"] = variant;
  try {
    if (variant == "gl") {
      if (ell == 0 || q == 0)
        throw std::invalid_argument("--variant gl needs --ell and --q");
      endorank::WitnessSetGL w = endorank::build_witness_gl(ell, q);
      j["ell"] = w.ell;
      j["q"] = w.q;
      j["s"] = w.s;
      j["field"] = field_json(w.F);
      j["gamma"] = w.gamma;
      j["zeta"] = w.zeta;
      j["matrices"] = json{{"x", mat_json(w.x)},
                           {"y", mat_json(w.y)},
                           {"z", mat_json(w.z)},
                           {"a", mat_json(w.a)},
                           {"b", mat_json(w.b)}};
      j["subgroups"] = json{{"E1_gl", subgroup_json(w.E1_gl)},
                            {"E2_gl", subgroup_json(w.E2_gl)},
                            {"E3_gl", subgroup_json(w.E3_gl)},
                            {"E1", subgroup_json(w.E1)},
                            {"E2", subgroup_json(w.E2)},
                            {"E3", subgroup_json(w.E3)}};
      j["checks"] = checks_json(w.checks);
    } else if (variant == "sl") {
      if (ell == 0 || q == 0)
        throw std::invalid_argument("--variant sl needs --ell and --q");
      endorank::WitnessSetSL w = endorank::build_witness_sl(ell, q);
      j["ell"] = w.ell;
      j["q"] = w.q;
      j["s"] = w.s;
      j["field"] = field_json(w.F);
      j["gamma"] = w.gamma;
      j["zeta"] = w.zeta;
      j["mu"] = w.mu;
      j["eps"] = w.eps;
      j["matrices"] = json{{"x", mat_json(w.x)}, {"y", mat_json(w.y)},
                           {"z", mat_json(w.z)}, {"b", mat_json(w.b)},
                           {"w", mat_json(w.w)}, {"v", mat_json(w.v)},
                           {"h", mat_json(w.h)}};
      json esl = json::array(), epsl = json::array();
      for (const endorank::Subgroup& s : w.E_sl)
        esl.push_back(subgroup_json(s));
      for (const endorank::Subgroup& s : w.E_psl)
        epsl.push_back(subgroup_json(s));
      j["subgroups"] = json{{"E_sl", esl}, {"E_psl", epsl}};
      j["checks"] = checks_json(w.checks);
    } else {  // defchar
      if (p == 0)
        throw std::invalid_argument("--variant defchar needs --p");
      const auto kind = form == "unitary"
                            ? endorank::DefCharVariant::unitary
                            : endorank::DefCharVariant::linear;
      endorank::WitnessSetDefChar w = endorank::build_witness_defchar(p, kind);
      j["p"] = w.p;
      j["form"] = form;
      j["field"] = field_json(w.F);
      if (kind == endorank::DefCharVariant::linear) {
        j["matrices"] = json{{"x_alpha", mat_json(w.x_alpha)},
                             {"x_beta", mat_json(w.x_beta)},
                             {"x_alphabeta", mat_json(w.x_alphabeta)}};
      } else {
        json lines = json::array();
        for (const endorank::Mat& m : w.x_line) lines.push_back(mat_json(m));
        j["matrices"] = json{{"x_line", lines},
                             {"z_center", mat_json(w.z_center)}};
      }
      json census = json::array();
      for (const endorank::Subgroup& s : w.E) census.push_back(subgroup_json(s));
      j["maximal_elementary_abelians"] = std::move(census);
      j["torus_classes_full"] = w.torus_classes_full;
      j["torus_classes_det1"] = w.torus_classes_det1;
      j["checks"] = checks_json(w.checks);
    }
  } catch (const std::logic_error& e) {
    // Identity verification failures carry the failing check's name; report
    // those as an explicit failed check.  Anything else (e.g. a violated
    // precondition, which is also a logic_error) stays an ordinary error.
    const std::string msg = e.what();
    const std::string prefix = "witness identity failed: ";
    if (msg.rfind(prefix, 0) != 0) throw;
    j["checks"] = json::array(
        {json{{"name", msg.substr(prefix.size())}, {"pass", false}}});
    j["all_pass"] = false;
    j["error"] = msg;
    std::cout << j.dump(2) << "\n";
    return kExitError;
  }
  j["all_pass"] = true;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "endotrivial-rank toolkit: symbolic classification and brute-force "
      "orbit-poset computation for finite groups of Lie type"};
  app.require_subcommand(1);

  // classify
  std::string c_family, c_isogeny, c_associated, c_json;
  int c_twist = 1;
  std::uint64_t c_q = 0, c_ell = 0;
  CLI::App* classify = app.add_subcommand(
      "classify", "symbolic rank from a Lie-type descriptor");
  auto* opt_family = classify->add_option(
      "--family", c_family, "family letter and rank, e.g. A2 or D4");
  classify->add_option("--twist", c_twist, "twisting order (1, 2, or 3)")
      ->capture_default_str();
  classify->add_option("--isogeny", c_isogeny, "sc | ad | other");
  classify->add_option("--associated", c_associated,
                       "psl-like | pgl-like | hj");
  auto* opt_cq = classify->add_option("--q", c_q, "field size (prime power)");
  classify->add_option("--ell", c_ell, "prime to classify at")->required();
  classify
      ->add_option("--descriptor-json", c_json,
                   "read the descriptor from a JSON file instead of flags")
      ->excludes(opt_family)
      ->excludes(opt_cq);

  // rank
  std::string r_group, r_export, r_format = "json";
  std::uint32_t r_n = 0, r_q = 0, r_ell = 0;
  std::uint64_t r_seed = 0;
  RankBudgets r_budgets;
  CLI::App* rank = app.add_subcommand(
      "rank", "brute-force rank via the orbit poset of a matrix group");
  rank->add_option("--group", r_group,
                   "GL | SL | GU | SU | Sp or a P-prefixed quotient")
      ->required();
  rank->add_option("--n", r_n, "degree")->required();
  rank->add_option("--q", r_q, "field size (prime power)")->required();
  rank->add_option("--ell", r_ell, "prime")->required();
  rank->add_option("--enum-bound", r_budgets.enum_bound,
                   "element enumeration bound")
      ->capture_default_str();
  rank->add_option("--subgroup-cap", r_budgets.subgroup_cap,
                   "subgroup closure cap")
      ->capture_default_str();
  rank->add_option("--orbit-budget", r_budgets.orbit_budget,
                   "conjugation orbit budget")
      ->capture_default_str();
  rank->add_option("--threads", r_budgets.threads, "orbit walk threads")
      ->capture_default_str();
  rank->add_option("--seed", r_seed, "recorded in the output for provenance")
      ->capture_default_str();
  rank->add_option("--export-poset", r_export,
                   "write the orbit poset JSON to this path");
  rank->add_option("--format", r_format, "json | dot | text")
      ->check(CLI::IsMember({"json", "dot", "text"}))
      ->capture_default_str();

  // crosscheck
  std::string x_grid, x_format = "text";
  CLI::App* crosscheck = app.add_subcommand(
      "crosscheck", "run both routes over a grid file and compare");
  crosscheck->add_option("--grid", x_grid, "grid JSON file")->required();
  crosscheck->add_option("--format", x_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  // witness
  std::string w_variant, w_form = "linear";
  std::uint32_t w_ell = 0, w_q = 0, w_p = 0;
  CLI::App* witness = app.add_subcommand(
      "witness", "build witness subgroups and verify their identities");
  witness->add_option("--variant", w_variant, "gl | sl | defchar")
      ->required()
      ->check(CLI::IsMember({"gl", "sl", "defchar"}));
  witness->add_option("--ell", w_ell, "prime (gl/sl variants)");
  witness->add_option("--q", w_q, "field size (gl/sl variants)");
  witness->add_option("--p", w_p, "prime (defchar variant)");
  witness->add_option("--form", w_form, "linear | unitary (defchar variant)")
      ->check(CLI::IsMember({"linear", "unitary"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*classify)
      return cmd_classify(c_family, c_twist, c_isogeny, c_associated, c_q,
                          c_ell, c_json);
    if (*rank)
      return cmd_rank(r_group, r_n, r_q, r_ell, r_budgets, r_seed, r_export,
                      r_format);
    if (*crosscheck) return cmd_crosscheck(x_grid, x_format);
    if (*witness) return cmd_witness(w_variant, w_ell, w_q, w_p, w_form);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
