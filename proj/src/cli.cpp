// Command-line driver: a thin parsing and formatting layer over the
// library.  Every record is one json object per line (or one tsv row
// with a header re-emitted whenever the column set changes); rational
// values print exactly as num/den strings, integers stay unquoted, and
// elapsed-time fields are the only nondeterministic output.

#include "qbm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "qbm/arith.hpp"
#include "qbm/brauer.hpp"
#include "qbm/census.hpp"
#include "qbm/constants.hpp"
#include "qbm/local.hpp"
#include "qbm/verify.hpp"

namespace qbm {

namespace {

using ojson = nlohmann::ordered_json;
using i64 = std::int64_t;
using u64 = std::uint64_t;

class RecordWriter {
 public:
  RecordWriter(std::ostream& os, std::string format) : os_(os), format_(std::move(format)) {}

  void write(const ojson& rec) {
    if (format_ == "tsv") {
      std::vector<std::string> keys;
      for (const auto& item : rec.items()) keys.push_back(item.key());
      if (keys != header_) {
        header_ = keys;
        for (std::size_t i = 0; i < keys.size(); ++i) os_ << (i ? "\t" : "") << keys[i];
        os_ << '\n';
      }
      std::size_t i = 0;
      for (const auto& item : rec.items()) {
        os_ << (i++ ? "\t" : "");
        if (item.value().is_string())
          os_ << item.value().get<std::string>();
        else
          os_ << item.value().dump();
      }
      os_ << '\n';
    } else {
      os_ << rec.dump() << '\n';
    }
  }

 private:
  std::ostream& os_;
  std::string format_;
  std::vector<std::string> header_;
};

std::string place_key(const Place& v) { return v.real ? "real" : std::to_string(v.p); }

std::string halves_string(int h) { return h % 2 ? "1/2" : "0"; }

const char* residue_class_name(PowerResidueClass c) {
  switch (c) {
    case PowerResidueClass::Zero: return "zero";
    case PowerResidueClass::NonResidue: return "non_residue";
    case PowerResidueClass::SquareNotFourth: return "square_not_fourth";
    case PowerResidueClass::FourthPower: return "fourth_power";
  }
  return "unknown";
}

std::array<i64, 4> parse_point(const std::string& s) {
  std::array<i64, 4> v{};
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    std::size_t comma = i < 3 ? s.find(',', pos) : s.size();
    if (comma == std::string::npos)
      throw std::invalid_argument("brauer: --point needs four comma-separated integers");
    const char* first = s.data() + pos;
    const char* last = s.data() + comma;
    auto [ptr, ec] = std::from_chars(first, last, v[static_cast<std::size_t>(i)]);
    if (ec != std::errc() || ptr != last)
      throw std::invalid_argument("brauer: --point component is not an integer");
    pos = comma + 1;
  }
  return v;
}

ojson rational_string(const mpq_class& r) { return r.get_str(); }

ojson form_coefficients(const LinearForm& l) {
  ojson arr = ojson::array();
  for (const mpq_class& c : l.coef) arr.push_back(rational_string(c));
  return arr;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"diagonal ternary quadrics: local solvability, Brauer obstructions, census counts"};
  app.require_subcommand(1);

  std::string format = "json-lines";
  app.add_option("--format", format, "record format (default json-lines)")
      ->check(CLI::IsMember({"json-lines", "tsv"}));
  std::string out_path;
  app.add_option("--out", out_path, "write records to FILE instead of stdout");

  i64 la = 0, lb = 0, lc = 0, ln = 0;
  u64 lp = 0;
  auto* local_sub = app.add_subcommand("local", "decide solvability over R and Z_p");
  local_sub->fallthrough();
  local_sub->add_option("--a", la, "x^2 coefficient")->required();
  local_sub->add_option("--b", lb, "y^2 coefficient")->required();
  local_sub->add_option("--c", lc, "z^2 coefficient")->required();
  local_sub->add_option("--n", ln, "represented integer")->required();
  auto* lp_opt = local_sub->add_option("--p", lp, "single prime to test (default: all places)");

  u64 oq = 0;
  i64 oa = 0, oc = 0, od = 0, oe = 0;
  auto* obstruct_sub = app.add_subcommand("obstruct", "family obstruction decision");
  obstruct_sub->fallthrough();
  obstruct_sub->add_option("--q", oq, "family modulus")->required();
  obstruct_sub->add_option("--a", oa, "parameter a")->required();
  obstruct_sub->add_option("--c", oc, "parameter c")->required();
  obstruct_sub->add_option("--d", od, "parameter d")->required();
  obstruct_sub->add_option("--e", oe, "parameter e")->required();

  i64 ba = 0, bb = 0, bc = 0, bn = 0;
  std::string bpoint;
  auto* brauer_sub = app.add_subcommand("brauer", "explicit quaternion decomposition");
  brauer_sub->fallthrough();
  brauer_sub->add_option("--a", ba, "x^2 coefficient")->required();
  brauer_sub->add_option("--b", bb, "y^2 coefficient")->required();
  brauer_sub->add_option("--c", bc, "z^2 coefficient")->required();
  brauer_sub->add_option("--n", bn, "represented integer")->required();
  auto* bpoint_opt =
      brauer_sub->add_option("--point", bpoint, "isotropic base point x,y,z,t (default: search)");

  std::string cmode;
  u64 cB = 0, cq = 0;
  i64 cn = 1;
  unsigned cthreads = 1;
  auto* count_sub = app.add_subcommand("count", "census counts");
  count_sub->fallthrough();
  count_sub->add_option("--mode", cmode, "count route")
      ->required()
      ->check(CLI::IsMember({"nbr-direct", "nbr-characters", "nloc"}));
  count_sub->add_option("--B", cB, "count bound")->required();
  auto* cq_opt = count_sub->add_option("--q", cq, "family modulus (census modes)");
  auto* cn_opt = count_sub->add_option("--n", cn, "represented integer (mode nloc, default 1)");
  count_sub->add_option("--threads", cthreads, "worker count (default 1)")
      ->envname("QBM_THREADS");

  std::string kname;
  u64 kq = 17, kP = 1000000, kf = 1;
  i64 ka = 1, kb = 1, kc = 1;
  auto* constants_sub = app.add_subcommand("constants", "truncated analytic constants");
  constants_sub->fallthrough();
  constants_sub->add_option("--name", kname, "which constant")
      ->required()
      ->check(CLI::IsMember({"C", "Cf", "D", "E"}));
  constants_sub->add_option("--q", kq, "family modulus (default 17)");
  constants_sub->add_option("--P", kP, "prime truncation bound (default 10^6)");
  auto* ka_opt = constants_sub->add_option("--a", ka, "side condition for C (default 1)");
  auto* kb_opt = constants_sub->add_option("--b", kb, "side condition for C (default 1)");
  auto* kc_opt = constants_sub->add_option("--c", kc, "side condition for C (default 1)");
  auto* kf_opt = constants_sub->add_option("--f", kf, "squarefree divisor for Cf (default 1)");

  std::string vsuite;
  u64 vseed = 20260822;
  auto* verify_sub = app.add_subcommand("verify", "run self-check suites");
  verify_sub->fallthrough();
  verify_sub->add_option("--suite", vsuite, "which suite")
      ->required()
      ->check(CLI::IsMember({"identities", "oracles", "all"}));
  verify_sub->add_option("--seed", vseed, "seed for randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      err << "error: cannot open " << out_path << '\n';
      return 2;
    }
    sink = &file;
  }
  RecordWriter writer(*sink, format);

  try {
    if (local_sub->parsed()) {
      QuadricInstance Q(la, lb, lc, ln);
      if (lp_opt->count()) {
        LocalVerdict v = solvable_at_prime(Q, lp);
        ojson rec;
        rec["place"] = place_key(v.place);
        rec["solvable"] = v.solvable;
        if (v.witness) {
          ojson w = ojson::array();
          for (i64 x : *v.witness) w.push_back(x);
          rec["witness"] = w;
          rec["witness_exponent"] = v.witness_exponent;
        } else {
          rec["witness"] = nullptr;
          rec["witness_exponent"] = 0;
        }
        rec["searched_depth"] = v.searched_depth;
        writer.write(rec);
      } else {
        EverywhereVerdict v = solvable_everywhere(Q);
        ojson rec;
        rec["locally_solvable"] = v.solvable;
        ojson failing = ojson::array();
        for (const Place& pl : v.failing) failing.push_back(place_key(pl));
        rec["failing_places"] = failing;
        writer.write(rec);
      }
      return 0;
    }

    if (obstruct_sub->parsed()) {
      FamilyInstance F(oq, oa, oc, od, oe);
      ObstructionDecision dec = obstruction_decision(F);
      ojson rec;
      rec["locally_solvable"] = dec.locally_solvable;
      rec["obstructed"] = dec.obstructed;
      ojson profile = ojson::object();
      if (dec.locally_solvable) {
        InvariantProfile prof = family_invariant_profile(F);
        for (const auto& [pl, h] : prof.halves) profile[place_key(pl)] = halves_string(h);
      }
      rec["invariant_profile"] = profile;
      rec["a_class"] = residue_class_name(dec.a_class);
      writer.write(rec);
      return 0;
    }

    if (brauer_sub->parsed()) {
      QuadricInstance Q(ba, bb, bc, bn);
      std::array<i64, 4> M{};
      if (bpoint_opt->count()) {
        M = parse_point(bpoint);
      } else {
        const std::array<i64, 4> coef = {ba, bb, bc, -bn};
        if (!isotropic_everywhere(coef)) {
          err << "error: the rank-4 form is anisotropic at some completion; "
                 "no decomposition exists\n";
          return 2;
        }
        auto found = isotropic_vector(coef, 2048);
        if (!found) {
          err << "inconsistency: the form is isotropic everywhere but no base point "
                 "was found within the search height\n";
          return 3;
        }
        M = *found;
      }
      BrauerDecomposition D = brauer_decomposition(Q, M);
      ojson rec;
      ojson base = ojson::array();
      for (i64 x : D.base_point) base.push_back(x);
      rec["base_point"] = base;
      rec["d"] = D.d;
      rec["c0"] = rational_string(D.c0);
      rec["l1"] = form_coefficients(D.l1);
      rec["l2"] = form_coefficients(D.l2);
      rec["l3"] = form_coefficients(D.l3);
      rec["l4"] = form_coefficients(D.l4);
      writer.write(rec);
      return 0;
    }

    if (count_sub->parsed()) {
      if (cthreads == 0) throw std::invalid_argument("count: --threads must be at least 1");
      ojson rec;
      if (cmode == "nloc") {
        if (cq_opt->count())
          throw std::invalid_argument("count: --q does not apply to mode nloc");
        CountReport rep = count_nloc(cB, cn, cthreads);
        rec["b"] = rep.B;
        rec["n"] = cn;
        rec["count"] = rep.count;
        rec["route"] = rep.route;
        rec["elapsed_seconds"] = rep.elapsed_seconds;
      } else {
        if (cn_opt->count())
          throw std::invalid_argument("count: --n applies only to mode nloc");
        if (!cq_opt->count())
          throw std::invalid_argument("count: --q is required for census modes");
        const double E = constant_E(cq).value;
        CountReport rep = cmode == "nbr-direct" ? count_nbr_direct(cB, cq, cthreads, E)
                                                : count_nbr_characters(cB, cq, E);
        rec["b"] = rep.B;
        rec["q"] = rep.q;
        rec["count"] = rep.count;
        rec["predicted"] = rep.predicted;
        rec["route"] = rep.route;
        rec["elapsed_seconds"] = rep.elapsed_seconds;
      }
      writer.write(rec);
      return 0;
    }

    if (constants_sub->parsed()) {
      if (kname != "C" && (ka_opt->count() || kb_opt->count() || kc_opt->count()))
        throw std::invalid_argument("constants: --a/--b/--c apply only to name C");
      if (kname != "Cf" && kf_opt->count())
        throw std::invalid_argument("constants: --f applies only to name Cf");
      ConstantReport rep;
      if (kname == "C")
        rep = euler_C(ka, kb, kc, kP);
      else if (kname == "Cf")
        rep = euler_C_f(kf, kq, kP);
      else if (kname == "D")
        rep = constant_D(kq, kP);
      else
        rep = constant_E(kq, kP);
      ojson rec;
      rec["name"] = rep.name;
      rec["value"] = rep.value;
      rec["truncation_prime"] = rep.truncation_prime;
      rec["error_estimate"] = rep.error_estimate;
      rec["inputs"] = rep.inputs;
      writer.write(rec);
      return 0;
    }

    if (verify_sub->parsed()) {
      SuiteReport rep = run_suite(vsuite, vseed);
      std::size_t passed = 0;
      for (const CheckResult& c : rep.checks) {
        ojson rec;
        rec["check"] = c.name;
        rec["passed"] = c.passed;
        rec["detail"] = c.detail;
        writer.write(rec);
        passed += c.passed ? 1u : 0u;
      }
      ojson summary;
      summary["suite"] = rep.suite;
      summary["checks"] = rep.checks.size();
      summary["passed"] = passed;
      summary["ok"] = rep.ok;
      writer.write(summary);
      return rep.ok ? 0 : 3;
    }
  } catch (const NumericalInconsistency& e) {
    err << "inconsistency: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {
    err << "inconsistency: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "inconsistency: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace qbm
