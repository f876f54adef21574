#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "clrank/motive.hpp"
#include "clrank/scan.hpp"
#include "clrank/serialize.hpp"
#include "clrank/symmetry.hpp"
#include "suites.hpp"

namespace clrank::cli {

using nlohmann::json;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2;

struct Common {
  std::uint32_t q = 3;
  unsigned n = 1;
  std::string poly;
  bool json_out = false, csv_out = false;
  unsigned workers = 1;
  std::uint64_t seed = 1;
  std::string out;
};

unsigned default_workers() {
  if (const char* env = std::getenv("CLRANK_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void add_common(CLI::App* cmd, Common& c, bool with_poly) {
  cmd->add_option("--q", c.q, "field size (prime power)")->capture_default_str();
  cmd->add_option("--n", c.n, "tensor power n >= 1")->capture_default_str();
  if (with_poly) cmd->add_option("--poly", c.poly, "little-endian coefficients a0,a1,...,am")->required();
  cmd->add_flag("--json", c.json_out, "JSON output");
  cmd->add_flag("--csv", c.csv_out, "CSV output (tables only)");
  cmd->add_option("--workers", c.workers, "worker threads (default $CLRANK_WORKERS or 1)");
  cmd->add_option("--seed", c.seed, "seed for randomized suites")->capture_default_str();
  cmd->add_option("--out", c.out, "write output to this file");
}

motive::TwistedPower parse_input(const Common& c) {
  const auto field = ff::FieldCtx::of_order(c.q);
  return motive::TwistedPower(field, io::parse_poly(field, c.poly), c.n);
}

void emit(const Common& c, std::ostream& out, const std::string& text) {
  std::string body = text;
  if (body.empty() || body.back() != '\n') body += '\n';
  if (c.out.empty()) {
    out << body;
    return;
  }
  std::ofstream f(c.out);
  f << body;
  if (!f) throw std::runtime_error("cannot write " + c.out);
}

std::pair<unsigned, unsigned> parse_range(const std::string& s) {
  auto num = [&](const std::string& t) {
    std::size_t used = 0;
    const unsigned long v = std::stoul(t, &used);
    if (used != t.size()) throw std::invalid_argument("bad degree \"" + s + "\"");
    return static_cast<unsigned>(v);
  };
  try {
    for (const std::string sep : {"..", "-", ":"}) {
      const auto pos = s.find(sep);
      if (pos != std::string::npos) return {num(s.substr(0, pos)), num(s.substr(pos + sep.size()))};
    }
    const unsigned v = num(s);
    return {v, v};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad degree \"" + s + "\" (expected m or lo-hi)");
  }
}

std::string suite_line(const suites::SuiteResult& r) {
  std::ostringstream os;
  os << r.name << ": " << r.passed << "/" << (r.passed + r.failed) << (r.ok() ? " pass" : " FAIL");
  for (const auto& f : r.failures) os << "\n  failed: " << f;
  return os.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact L-functions and analytic ranks of twisted Carlitz tensor powers"};
  app.require_subcommand(1);
  Common c;
  c.workers = default_workers();

  auto* lfun = app.add_subcommand("lfun", "print L(U) as JSON");
  add_common(lfun, c, true);
  bool records = false;
  lfun->add_flag("--records", records, "list of {u_deg, coeffs_T} records instead of a degree map");

  auto* rank = app.add_subcommand("rank", "print the analytic rank");
  add_common(rank, c, true);
  std::uint32_t at = 1;
  rank->add_option("--at", at, "order of vanishing at U = gamma")->capture_default_str();

  auto* orbit = app.add_subcommand("orbit", "images of P under the generator families, with ranks");
  add_common(orbit, c, true);

  auto* verify = app.add_subcommand("verify", "run identity, conjugacy, Euler and property suites");
  add_common(verify, c, false);
  std::string suite = "all", gen = "all";
  std::uint64_t cases = 0;
  std::size_t window = 10;
  verify->add_option("--suite", suite, "all|identity|conj|euler|props")->capture_default_str();
  verify->add_option("--gen", gen, "all|mu|nu|iota|tau|sigma|twist")->capture_default_str();
  verify->add_option("--cases", cases, "cases per suite (default 100; euler 200)");
  verify->add_option("--window", window, "largest conjugacy window")->capture_default_str();

  auto* scanc = app.add_subcommand("scan", "exhaustive rank tally over squarefree P");
  add_common(scanc, c, false);
  std::string m_range;
  std::optional<ff::Elem> lead;
  bool shift_stable = false, force = false;
  std::string resume;
  scan::ScanSpec spec;
  scanc->add_option("--m", m_range, "degree m or range lo-hi")->required();
  scanc->add_option("--lead", lead, "leading coefficient (default: all of F_q*)");
  scanc->add_flag("--shift-stable", shift_stable, "only P fixed by every shift theta -> theta + d");
  scanc->add_option("--resume", resume, "checkpoint file prefix; finished chunks are reused");
  scanc->add_option("--cap", spec.cap, "largest enumeration without --force")->capture_default_str();
  scanc->add_flag("--force", force, "allow enumerations above the cap");
  scanc->add_option("--chunk", spec.chunk, "polynomials per chunk");
  scanc->add_option("--witnesses", spec.witness_cap, "witnesses kept per cell and rank")->capture_default_str();
  scanc->add_option("--audit", spec.audit_period, "audit one in this many ranks against the full L (0: off)")
      ->capture_default_str();

  auto* coset = app.add_subcommand("coset", "exhaustive check of the rank >= 1 coset");
  add_common(coset, c, false);
  unsigned m_max = 7;
  coset->add_option("--m-max", m_max, "largest degree")->capture_default_str();

  auto* dims = app.add_subcommand("dims", "naive parameter counts");
  add_common(dims, c, false);
  unsigned r = 2, dim_m = 0;
  ff::Elem dim_a = 1;
  std::string mode = "single";
  dims->add_option("--r", r, "rank")->capture_default_str();
  dims->add_option("--mode", mode, "single|infinite|shift-stable")->capture_default_str();
  dims->add_option("--m", dim_m, "degree (shift-stable mode)");
  dims->add_option("--lead", dim_a, "leading coefficient (shift-stable mode)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (lfun->parsed()) {
      const auto l = motive::l_function(parse_input(c));
      emit(c, out, io::lfun_to_json(l, records ? io::LFunLayout::Records : io::LFunLayout::ByDegree));
      return kOk;
    }
    if (rank->parsed()) {
      const auto tp = parse_input(c);
      if (at == 0) throw std::invalid_argument("--at: gamma must be nonzero");
      if (!tp.field().valid(at)) throw std::invalid_argument("--at: gamma is outside the field");
      const unsigned value = poly::lfun_order_at(motive::l_function(tp), at);
      emit(c, out, c.json_out ? json{{"rank", value}, {"at", at}}.dump() : std::to_string(value));
      return kOk;
    }
    if (orbit->parsed()) {
      const auto tp = parse_input(c);
      const auto& f = tp.field();
      json images = json::array();
      auto add = [&](const symmetry::GroupElem& g) {
        const auto image = symmetry::act_on_poly(g, tp);
        images.push_back({{"generator", symmetry::describe(g)},
                          {"poly", io::format_poly(image.p())},
                          {"n", image.n()},
                          {"rank", motive::analytic_rank(image)}});
      };
      std::set<std::vector<ff::Elem>> shifts;
      for (ff::Elem d = 0; d < f.size(); ++d) {
        add(symmetry::gen::Mu{d});
        shifts.insert(symmetry::act_on_poly(symmetry::gen::Mu{d}, tp).p().coeffs);
      }
      for (ff::Elem x = 1; x < f.size(); ++x) add(symmetry::gen::Nu{x});
      for (ff::Elem x = 1; x < f.size(); ++x) add(symmetry::gen::Tau{x});
      add(symmetry::gen::Iota{});
      json doc{{"poly", io::format_poly(tp.p())},
               {"q", tp.q()},
               {"n", tp.n()},
               {"rank", motive::analytic_rank(tp)},
               {"shift_orbit_size", shifts.size()},
               {"images", std::move(images)}};
      emit(c, out, doc.dump(2));
      return kOk;
    }
    if (verify->parsed()) {
      std::vector<std::string> gens;
      if (gen == "all")
        gens = suites::generator_names();
      else
        gens = {gen};
      for (const auto& g : gens)
        if (std::find(suites::generator_names().begin(), suites::generator_names().end(), g) ==
            suites::generator_names().end())
          throw std::invalid_argument("unknown generator \"" + g + "\"");
      if (suite != "all" && suite != "identity" && suite != "conj" && suite != "euler" && suite != "props")
        throw std::invalid_argument("unknown suite \"" + suite + "\"");
      std::vector<suites::SuiteResult> results;
      const std::uint64_t base = cases ? cases : 100;
      if (suite == "all" || suite == "identity")
        for (const auto& g : gens) results.push_back(suites::identity_suite(g, base, c.seed));
      if (suite == "all" || suite == "conj")
        for (const auto& g : gens) results.push_back(suites::conjugacy_suite(g, base, c.seed, window));
      if (suite == "all" || suite == "euler") results.push_back(suites::euler_suite(cases ? cases : 200, c.seed));
      if (suite == "all" || suite == "props") results.push_back(suites::property_suite(base, c.seed));
      bool ok = true;
      std::ostringstream text;
      json doc = json::array();
      for (const auto& res : results) {
        ok = ok && res.ok();
        text << suite_line(res) << "\n";
        doc.push_back({{"suite", res.name}, {"passed", res.passed}, {"failed", res.failed}, {"failures", res.failures}});
      }
      emit(c, out, c.json_out ? doc.dump(2) : text.str());
      return ok ? kOk : kFailed;
    }
    if (scanc->parsed()) {
      const auto [lo, hi] = parse_range(m_range);
      spec.q = c.q;
      spec.n = c.n;
      spec.mode = shift_stable ? scan::Mode::ShiftStable : scan::Mode::AllSquarefree;
      spec.workers = c.workers;
      spec.force = force;
      spec.checkpoint = resume;
      if (lead && (*lead == 0 || *lead >= c.q)) throw std::invalid_argument("--lead must be in F_q*");
      const auto table = scan::run_scans(spec, lo, hi, lead);
      emit(c, out, c.json_out ? table.to_json() : table.to_csv(spec.thresholds));
      if (spec.audit_period) err << "audit: " << table.audit_checked << " checked, " << table.audit_mismatches
                                 << " mismatches\n";
      return table.audit_mismatches ? kFailed : kOk;
    }
    if (coset->parsed()) {
      const auto rep = scan::coset_audit(c.q, c.n, m_max);
      json classes = json::array();
      for (const auto& cls : rep.classes)
        classes.push_back({{"a", cls.a},
                           {"m_mod", cls.residue},
                           {"in_coset", cls.in_coset},
                           {"total", cls.total},
                           {"rank_ge1", cls.rank_ge1}});
      json viol = json::array();
      for (const auto& p : rep.violating) viol.push_back(io::format_poly(p));
      json doc{{"q", rep.q},
               {"n", rep.n},
               {"m_max", rep.m_max},
               {"coset_members", rep.coset_members},
               {"violations", rep.violations},
               {"off_coset", rep.off_coset},
               {"off_coset_rank_ge1", rep.off_coset_rank_ge1},
               {"classes", std::move(classes)},
               {"violating", std::move(viol)}};
      if (c.json_out) {
        emit(c, out, doc.dump(2));
      } else {
        std::ostringstream os;
        os << "coset members: " << rep.coset_members << ", violations: " << rep.violations << "\n"
           << "off coset: " << rep.off_coset << ", of which rank >= 1: " << rep.off_coset_rank_ge1 << "\n";
        emit(c, out, os.str());
      }
      return rep.violations ? kFailed : kOk;
    }
    if (dims->parsed()) {
      scan::DimMode dm;
      if (mode == "single")
        dm = scan::DimMode::Single;
      else if (mode == "infinite")
        dm = scan::DimMode::InfiniteFamily;
      else if (mode == "shift-stable")
        dm = scan::DimMode::ShiftStable;
      else
        throw std::invalid_argument("unknown mode \"" + mode + "\"");
      const auto rep = scan::dim_report(c.q, r, dm, dim_m, dim_a, c.n);
      json doc{{"q", rep.q},
               {"r", rep.r},
               {"mode", mode},
               {"k", rep.k},
               {"equations", rep.equations},
               {"parameters", rep.parameters},
               {"expected_dim", rep.expected_dim},
               {"feasible", rep.feasible},
               {"bound_2q_minus_3", rep.bound_2q_minus_3}};
      if (dm != scan::DimMode::ShiftStable) doc["max_feasible_r"] = rep.max_feasible_r;
      emit(c, out, doc.dump(2));
      return kOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace clrank::cli
