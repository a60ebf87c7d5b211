#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "prism/cli.hpp"
#include "prism/errors.hpp"
#include "prism/qpd.hpp"
#include "prism/witt.hpp"

namespace prism {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kSchemaVersion = "1";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json case_json(const CaseResult& c) {
  return json{{"name", c.name}, {"status", c.status}, {"witness", c.witness}, {"millis", c.millis}};
}

json factors_json(const InvariantFactors& h) {
  return json{{"free", h.free_rank}, {"torsion", h.torsion}, {"twist", h.twist}};
}

int finish(const std::string& command, const json& params, std::vector<CaseResult> cases, const json& results,
           const std::string& out_path, std::ostream& out) {
  std::sort(cases.begin(), cases.end(), [](const CaseResult& a, const CaseResult& b) { return a.name < b.name; });
  std::size_t npass = 0, nfail = 0, nskip = 0;
  json arr = json::array();
  for (const auto& c : cases) {
    (c.status == "pass" ? npass : c.status == "fail" ? nfail : nskip)++;
    arr.push_back(case_json(c));
  }
  json report{{"version", kSchemaVersion}, {"command", command}, {"params", params}, {"cases", arr}};
  if (!results.is_null()) report["results"] = results;
  report["summary"] = json{{"total", cases.size()}, {"pass", npass}, {"fail", nfail}, {"skip", nskip},
                           {"status", nfail ? "fail" : "pass"}};
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + out_path);
    f << text;
  }
  return nfail ? 3 : 0;
}

template <class F>
CaseResult timed_case(const std::string& name, bool timings, F&& body) {
  CaseResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto [ok, witness] = body();
    r.status = ok ? "pass" : "fail";
    r.witness = witness;
  } catch (const Defect& e) {
    r.status = "fail";
    r.defect = true;
    r.witness = std::string(e.what()) + (e.witness().empty() ? "" : ": " + e.witness());
  }
  if (timings)
    r.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<Int> parse_int_list(const std::string& s) {
  std::vector<Int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    try {
      out.emplace_back(item);
    } catch (const std::invalid_argument&) {
      throw UsageError("not an integer list: " + s);
    }
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"prismcheck"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"prismcheck: exact checks for delta-rings, Witt vectors, q-divided powers and q-de Rham complexes"};
  app.require_subcommand(1);
  SuiteConfig cfg;
  std::string ring, theory = "qderham", at = "q1", witt_op;
  std::vector<std::string> framings;
  std::uint64_t degree = 0;
  unsigned level = 0, len = 2, vars = 1, twist = 0;
  unsigned long field = 0;
  std::string a_text = "0", b_text = "0";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "prime p")->check(CLI::PositiveNumber);
    sub->add_option("--prec", cfg.N, "p-adic precision N (coefficients mod p^N)")->check(CLI::PositiveNumber);
    sub->add_option("--series-prec", cfg.M, "depth M of the truncation in powers of (t-1)")->check(CLI::PositiveNumber);
    sub->add_option("--root-depth", cfg.K, "root depth K: q = t^(p^K)");
    sub->add_option("--window", cfg.window, "degree window W (default 2p^2)")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "seed for randomized cases");
    sub->add_option("--out", cfg.out, "write the JSON report here instead of stdout");
    sub->add_flag("--timings", cfg.timings, "record wall-clock millis (reports are then not reproducible)");
  };

  auto* verify = app.add_subcommand("verify", "run verification suites");
  common(verify);
  verify->add_option("--suite", cfg.suite, "suite name")->check(CLI::IsMember(suite_names()));

  auto* coh = app.add_subcommand("cohomology", "stable cohomology of a framed q-de Rham complex");
  common(coh);
  coh->add_option("--ring", ring, "presentation, e.g. \"x^\xC2\xB1" "1, y\"")->required();
  coh->add_option("--framing", framings, "coordinate change, e.g. \"x -> x*(1+p*x)\"");
  coh->add_option("--theory", theory, "qderham | derham | hodge-tate")
      ->check(CLI::IsMember({"qderham", "derham", "hodge-tate"}));
  coh->add_option("--at", at, "q1 | zeta")->check(CLI::IsMember({"q1", "zeta"}));
  auto* series_opt_coh = coh->get_option("--series-prec");

  auto* nyg = app.add_subcommand("nygaard", "Nygaard filtration checks on the q-PD envelope");
  common(nyg);
  nyg->add_option("--degree", degree, "degree bound D (default p^2 + p)");
  nyg->add_option("--level", level, "filtration level n");
  nyg->add_option("--vars", vars, "number of variables (Kunneth products)")->check(CLI::Range(1, 2));

  auto* wt = app.add_subcommand("witt", "truncated Witt vector arithmetic");
  common(wt);
  wt->add_option("--len", len, "length m")->check(CLI::PositiveNumber);
  wt->add_option("op", witt_op, "add | mul | teich | tate-twist")
      ->required()
      ->check(CLI::IsMember({"add", "mul", "teich", "tate-twist"}));
  wt->add_option("--a", a_text, "first operand: comma separated components (teich: one element)");
  wt->add_option("--b", b_text, "second operand");
  wt->add_option("--field", field, "finite field size q for teich and tate-twist (default p)");
  wt->add_option("--n", twist, "Tate twist n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!is_prime(cfg.p)) throw UsageError("--p must be a prime");
    if (*verify) {
      json params{{"suite", cfg.suite},      {"p", cfg.p},   {"prec", cfg.N},
                  {"series_prec", cfg.M},    {"root_depth", cfg.K},
                  {"window", cfg.effective_window()}, {"seed", cfg.seed}};
      return finish("verify", params, run_suite(cfg), json(), cfg.out, out);
    }
    if (*coh) {
      RingPresentation pres = parse_presentation(ring);
      for (const auto& f : framings) parse_framing(pres, f);
      if (theory == "derham" && at != "q1") throw UsageError("--theory derham is the specialization q -> 1");
      if (theory == "hodge-tate") at = "zeta";
      const Specialization s = at == "q1" ? Specialization::QToOne : Specialization::QToZeta;
      const unsigned need = s == Specialization::QToZeta ? cfg.N * static_cast<unsigned>(cfg.p - 1) + 1 : 2;
      unsigned M = cfg.M;
      if (M < need) {
        if (series_opt_coh->count())
          throw PrecisionLoss("--series-prec " + std::to_string(M) + " is below " + std::to_string(need) +
                              ", needed to divide by q - 1 and reach " + (s == Specialization::QToZeta ? "zeta_p" : "q = 1"));
        M = need;
      }
      auto P = build_algebra(pres, base_ring_create(cfg.p, cfg.N, M, 0));
      const int W = cfg.effective_window(), W2 = W + static_cast<int>(cfg.p * cfg.p);
      json params{{"ring", print_ring(pres)}, {"framing", print_framing(pres)}, {"theory", theory},
                  {"at", to_string(s)},       {"p", cfg.p},                   {"prec", cfg.N},
                  {"series_prec", M},         {"window", W},                  {"window2", W2}};
      std::vector<CaseResult> cases;
      json degrees = json::array();
      ChainComplex c1 = specialize(build_complex(P, W), s, cfg.N), c2 = specialize(build_complex(P, W2), s, cfg.N);
      for (unsigned i = 0; i <= P->r(); ++i) {
        CohomologyTable t = cohomology_invariants(c1, c2, i);
        json stable = json::array();
        for (const auto& [n, h] : t.stable) {
          json row = factors_json(h);
          row["twist"] = theory == "hodge-tate" ? -static_cast<int>(i) : 0;
          stable.push_back(json{{"label", label_string(n)}, {"H", row}});
        }
        json unstable = json::array();
        for (const auto& n : t.unstable) unstable.push_back(label_string(n));
        degrees.push_back(json{{"degree", i}, {"total", factors_json(t.total)}, {"stable", stable}, {"unstable", unstable}});
        cases.push_back(timed_case("H" + std::to_string(i) + ".stable_core", cfg.timings, [&] {
          return std::pair<bool, std::string>{true, t.total.to_string()};
        }));
        if (theory == "hodge-tate")
          cases.push_back(timed_case("H" + std::to_string(i) + ".hodge_tate", cfg.timings, [&] {
            GradedComparison g = hodge_tate_check(P, i, cfg.N, W);
            std::string w;
            for (const auto& f : g.failures) w += (w.empty() ? "" : "; ") + f;
            return std::pair<bool, std::string>{g.ok(), w};
          }));
      }
      if (theory == "derham")
        cases.push_back(timed_case("crystalline_reduction", cfg.timings, [&] {
          CrystallineReport rep = crystalline_reduction_check(P, W);
          std::string w;
          for (const auto& f : rep.failures) w += (w.empty() ? "" : "; ") + f;
          return std::pair<bool, std::string>{rep.ok(), w};
        }));
      json results{{"algebra", P->describe()}, {"degrees", degrees}};
      if (theory == "qderham" || theory == "hodge-tate")
        results["note"] = "invariant factors only; equal tables do not certify a canonical quasi-isomorphism";
      return finish("cohomology", params, std::move(cases), results, cfg.out, out);
    }
    if (*nyg) {
      if (cfg.K < 1) throw UsageError("--root-depth must be at least 1 for the q-PD envelope");
      if (degree == 0) degree = cfg.p * cfg.p + cfg.p;
      auto B = base_ring_create(cfg.p, cfg.N, cfg.M, cfg.K);
      QPDModulePtr m = QPDModule::create(B, 1, degree);
      if (vars == 2) m = kunneth_product(m, m);
      json params{{"p", cfg.p}, {"prec", cfg.N}, {"series_prec", cfg.M}, {"root_depth", cfg.K},
                  {"degree", degree}, {"level", level}, {"vars", vars}};
      NygaardReport rep;
      std::vector<CaseResult> cases;
      cases.push_back(timed_case("verify", cfg.timings, [&] {
        rep = nygaard_verify(m, level);
        std::string w;
        for (const auto& f : rep.failures) w += (w.empty() ? "" : "; ") + f;
        return std::pair<bool, std::string>{rep.ok(), w};
      }));
      auto add = [&](const char* name, bool ok) {
        cases.push_back(CaseResult{std::string("verify.") + name, ok ? "pass" : "fail", "", 0, !ok});
      };
      add("divisible", rep.divisible);
      add("image", rep.image);
      add("minimal", rep.minimal);
      add("graded", rep.graded && rep.gr_rank == rep.expected_rank);
      json image = json::array();
      for (const auto& e : rep.image_degrees) image.push_back(m->frobenius_target()->degree_string(e));
      json results{{"module", m->describe()},        {"degrees", rep.degrees},
                   {"gr_rank", rep.gr_rank},          {"expected_rank", rep.expected_rank},
                   {"image_degrees", image}};
      return finish("nygaard", params, std::move(cases), results, cfg.out, out);
    }
    if (*wt) {
      const unsigned long p = cfg.p;
      json params{{"op", witt_op}, {"p", p}, {"prec", cfg.N}, {"len", len}};
      std::vector<CaseResult> cases;
      json results;
      if (witt_op == "add" || witt_op == "mul") {
        auto R = std::make_shared<const ZmodRing>(p, cfg.N);
        auto vec = [&](const std::string& text) {
          std::vector<Int> v = parse_int_list(text);
          v.resize(len, Int(0));
          std::vector<Int> c;
          for (const auto& x : v) c.push_back(R->from_int(x));
          return WittVec<ZmodRing>(R, p, c);
        };
        auto a = vec(a_text), b = vec(b_text);
        auto c = witt_op == "add" ? witt_add(a, b) : witt_mul(a, b);
        results = json{{"ring", R->describe()}, {"a", a.to_string()}, {"b", b.to_string()}, {"value", c.to_string()}};
        cases.push_back(timed_case("ghost_compatible", cfg.timings, [&] {
          auto ga = ghost(a), gb = ghost(b), gc = ghost(c);
          for (unsigned i = 0; i < len; ++i) {
            Int expect = R->from_int(witt_op == "add" ? Int(ga[i] + gb[i]) : Int(ga[i] * gb[i]));
            if (gc[i] != expect) return std::pair<bool, std::string>{false, "ghost component " + std::to_string(i)};
          }
          return std::pair<bool, std::string>{true, ""};
        }));
        params["a"] = a_text;
        params["b"] = b_text;
      } else if (witt_op == "teich") {
        const unsigned long q = field ? field : p;
        if (prime_power(q).first != p) throw UsageError("--field must be a power of --p");
        auto F = std::make_shared<const GaloisField>(q);
        std::vector<Int> v = parse_int_list(a_text);
        if (v.size() != 1 || v[0] < 0 || v[0] >= q) throw UsageError("--a must be one field element index below q");
        auto x = F->element(v[0].get_ui());
        auto t = teichmuller(F, p, x, len);
        results = json{{"field", F->describe()}, {"a", F->to_string(x)}, {"value", t.to_string()}};
        cases.push_back(timed_case("frobenius_of_teichmuller", cfg.timings, [&] {
          if (len < 2) return std::pair<bool, std::string>{true, ""};
          bool ok = witt_F(t) == teichmuller(F, p, F->frobenius(x), len - 1);
          return std::pair<bool, std::string>{ok, ok ? "" : "F([a]) != [a^p]"};
        }));
        params["field"] = q;
        params["a"] = a_text;
      } else {
        const unsigned long q = field ? field : p;
        if (prime_power(q).first != p) throw UsageError("--field must be a power of --p");
        if (len < twist + 1) throw UsageError("--len must be at least n + 1");
        TateTwistResult t = tate_twist_invariants(q, len, twist);
        results = json{{"field_size", q}, {"length", t.length}, {"H0", factors_json(t.h0)}, {"H1", factors_json(t.h1)}};
        cases.push_back(timed_case("euler_characteristic", cfg.timings, [&] {
          bool ok = t.h0.length(t.length) == t.h1.length(t.length);
          return std::pair<bool, std::string>{ok, ok ? "" : "lengths of H0 and H1 differ"};
        }));
        params["field"] = q;
        params["n"] = twist;
      }
      return finish("witt", params, std::move(cases), results, cfg.out, out);
    }
  } catch (const ParseError& e) {
    err << "prismcheck: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "prismcheck: " << e.what() << "\n";
    return 2;
  } catch (const Defect& e) {
    json ce{{"error", e.what()}, {"witness", e.witness()}};
    err << "prismcheck: defect: " << e.what() << "\n";
    out << ce.dump(2) << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "prismcheck: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace prism
