#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "banglab/measures.hpp"
#include "banglab/suites.hpp"

using namespace banglab;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kPropertyFailure = 1, kUsage = 2;

struct Globals {
  bool json = false;
  std::uint64_t fuel = 100;
  unsigned card = 2, depth = 3, pool = 2;
  std::uint64_t seed = 1;

  Bounds bounds() const { return {card, pool, depth}; }
  Budgets budgets() const {
    Budgets b;
    b.fuel = fuel;
    b.bounds = bounds();
    return b;
  }
};

// Raised for bad user input that gets past the option parser.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void out(const Globals& g, const json& j, const std::string& plain) {
  if (g.json)
    std::cout << j.dump() << "\n";
  else
    std::cout << plain << (plain.empty() || plain.back() == '\n' ? "" : "\n");
}

Term term_arg(const std::string& s) {
  try {
    return parse_term(s);
  } catch (const ParseError& e) {
    throw UsageError(std::string("cannot parse term: ") + e.what());
  }
}

std::string read_input(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

json typing_json(const Typing& t) {
  return {{"env", env_to_json(t.first)}, {"type", type_to_json(t.second)}, {"text", print_typing(t)}};
}

std::string nat_str(const Nat& n) { return n.str(); }

json meaning_json(const MeaningResult& m) {
  json j = {{"verdict", verdict_name(m.verdict)},
            {"reason", m.reason},
            {"normal_form", print_term(m.normal_form)},
            {"normalized", m.normalized}};
  if (m.context) j["context"] = print_ctx(*m.context);
  if (m.derivation) j["typing"] = typing_json(m.derivation->typing());
  if (m.replay.valid()) j["observable"] = print_term(m.replay);
  return j;
}

json c_meaning_json(const CMeaning& m) {
  json j = {{"verdict", verdict_name(m.verdict)},
            {"reason", m.reason},
            {"normal_form", print_term(m.normal_form)},
            {"steps", m.steps}};
  if (m.context) j["context"] = print_ctx(*m.context);
  if (m.reached.valid()) j["reached"] = print_term(m.reached);
  return j;
}

std::string report_text(const Report& r) {
  std::ostringstream s;
  s << "suite " << r.suite << "\n"
    << "  " << r.statement << "\n"
    << "  regime: " << r.regime << "\n"
    << "  pass " << r.pass << "  fail " << r.fail << "  unknown " << r.unknown << "\n";
  for (const auto& c : r.cases) s << "  [" << c["verdict"].get<std::string>() << "] " << c["case"].dump() << " " << c["detail"].get<std::string>() << "\n";
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laboratory for the distant bang calculus and its CBN/CBV sub-calculi"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  if (const char* s = std::getenv("BANGLAB_SEED")) {
    try {
      g.seed = std::stoull(s);
    } catch (const std::exception&) {
      std::cerr << "BANGLAB_SEED is not a number\n";
      return kUsage;
    }
  }
  app.add_flag("--json", g.json, "JSON output");
  app.add_option("--fuel", g.fuel, "reduction step budget")->capture_default_str();
  app.add_option("--card", g.card, "largest multitype cardinality in enumerated types")->capture_default_str();
  app.add_option("--depth", g.depth, "largest type depth in enumerated types")->capture_default_str();
  app.add_option("--pool", g.pool, "number of type variables")->capture_default_str();
  app.add_option("--seed", g.seed, "random seed (default from BANGLAB_SEED, else 1)");

  std::string term, strategy = "surface", system = "B", type, env, from, suite, file = "-";
  bool trace = false, shape = false, check = false;
  std::optional<std::size_t> count;
  std::optional<unsigned> size;
  unsigned names = 2;
  int code = kOk;

  auto need_term = [&](CLI::App* c) { c->add_option("term", term, "term")->required(); };

  auto* parse = app.add_subcommand("parse", "parse and print a term");
  need_term(parse);
  parse->callback([&] {
    Term t = term_arg(term);
    out(g, {{"term", print_term(t)}, {"ast", term_to_json(t)}, {"size", t.size()}}, print_term(t));
  });

  auto* reduce = app.add_subcommand("reduce", "reduce up to --fuel steps");
  need_term(reduce);
  reduce->add_option("--strategy", strategy, "surface or full")->check(CLI::IsMember({"surface", "full"}));
  reduce->add_flag("--trace", trace, "one JSON line per step");
  reduce->callback([&] {
    Term t = term_arg(term);
    ReduceOutcome o = normalize(t, parse_closure(strategy), g.fuel, true);
    if (trace) {
      std::size_t i = 1;
      for (const auto& e : o.trace)
        std::cout << json{{"step", i++}, {"rule", rule_name(e.rule)}, {"position", e.position}, {"term", print_term(e.term)}}.dump()
                  << "\n";
      return;
    }
    std::ostringstream s;
    for (const auto& e : o.trace) s << "-" << rule_name(e.rule) << "-> " << print_term(e.term) << "\n";
    s << (o.normalized ? "normal form" : "fuel exhausted") << " after " << o.steps << " steps";
    out(g, outcome_to_json(o), s.str());
  });

  auto* norm = app.add_subcommand("normalize", "reduce to normal form within --fuel");
  need_term(norm);
  norm->add_option("--strategy", strategy, "surface or full")->check(CLI::IsMember({"surface", "full"}));
  norm->callback([&] {
    Term t = term_arg(term);
    ReduceOutcome o = normalize(t, parse_closure(strategy), g.fuel, false);
    json j = outcome_to_json(o);
    j.erase("trace");
    if (o.normalized && strategy == "surface") j["class"] = nf_class_name(classify(o.term));
    out(g, j, print_term(o.term) + (o.normalized ? "" : "   (fuel exhausted after " + std::to_string(o.steps) + " steps)"));
  });

  auto* cls = app.add_subcommand("classify", "surface normal-form class and clashes");
  need_term(cls);
  cls->callback([&] {
    Term t = term_arg(term);
    NfClass c = classify(t);
    json clashes = json::array();
    for (const auto& p : static_clashes(t, Closure::Surface)) clashes.push_back(p);
    std::string plain = nf_class_name(c);
    if (c == NfClass::NoS) plain += " (" + std::string(nf_class_name(grammar_class(t))) + ")";
    out(g, {{"class", nf_class_name(c)}, {"grammar", nf_class_name(grammar_class(t))}, {"surface_clashes", clashes}}, plain);
  });

  auto* meas = app.add_subcommand("measure", "multiset size and potential multiplicities");
  need_term(meas);
  meas->callback([&] {
    Term t = term_arg(term);
    json mults = json::object();
    std::string plain = "size " + multi_size(t).str();
    for (const auto& x : free_vars(t)) {
      mults[x] = nat_str(pot_mult(x, t));
      plain += "\nM_" + x + " = " + nat_str(pot_mult(x, t));
    }
    out(g, {{"multiset", multi_size(t).str()}, {"multiplicities", mults}}, plain);
  });

  auto* typ = app.add_subcommand("typings", "typings within the type bounds");
  need_term(typ);
  typ->add_option("--system", system, "B, N or V")->check(CLI::IsMember({"B", "N", "V"}));
  typ->callback([&] {
    Term t = term_arg(term);
    Enumeration e = typings_enumerate(parse_system(system), t, g.bounds());
    json arr = json::array();
    std::string plain;
    for (const auto& d : e.derivations) {
      arr.push_back(typing_json(d->typing()));
      plain += print_typing(d->typing()) + "\n";
    }
    plain += std::to_string(e.derivations.size()) + " typings" + (e.truncated ? " (truncated)" : "");
    out(g, {{"system", system}, {"typings", arr}, {"truncated", e.truncated}}, plain);
  });

  auto* chk = app.add_subcommand("check-derivation", "check a JSON derivation (file or - for stdin)");
  chk->add_option("file", file, "derivation JSON");
  chk->callback([&] {
    DerivPtr d;
    try {
      d = derivation_from_json(json::parse(read_input(file)));
    } catch (const json::exception& e) {
      throw UsageError(std::string("bad derivation JSON: ") + e.what());
    }
    CheckReport r = check_derivation(*d);
    out(g, {{"ok", r.ok}, {"node", r.node}, {"rule", r.rule}, {"message", r.message}},
        r.ok ? "ok " + print_typing(d->typing()) : "rejected at " + json(r.node).dump() + " (" + r.rule + "): " + r.message);
    if (!r.ok) code = kPropertyFailure;
  });

  auto* inh = app.add_subcommand("inhabit", "search a closed inhabitant");
  inh->add_option("--system", system, "B, N or V")->check(CLI::IsMember({"B", "N", "V"}));
  inh->add_option("--type", type, "goal type, e.g. '[a] -> [a]'")->required();
  inh->callback([&] {
    Type goal;
    try {
      goal = parse_type(type);
    } catch (const std::exception& e) {
      throw UsageError(std::string("cannot parse type: ") + e.what());
    }
    InhResult r = inhabit(parse_system(system), goal);
    json j = {{"status", inh_status_name(r.status)}, {"reason", r.reason}};
    std::string plain = inh_status_name(r.status);
    if (r.status == InhStatus::Inhabited) {
      j["witness"] = print_term(r.witness);
      j["derivations"] = json::array();
      for (const auto& d : r.derivations) j["derivations"].push_back(derivation_to_json(*d));
      plain += " by " + print_term(r.witness);
    } else if (!r.reason.empty()) {
      plain += ": " + r.reason;
    }
    out(g, j, plain);
  });

  auto* tst = app.add_subcommand("testable", "is a typing testable");
  tst->add_option("--system", system, "B, N or V")->check(CLI::IsMember({"B", "N", "V"}));
  tst->add_option("--env", env, "environment, e.g. 'x:[a]'");
  tst->add_option("--type", type, "type")->required();
  tst->callback([&] {
    Typing ty;
    try {
      ty = {parse_env(env), parse_type(type)};
    } catch (const std::exception& e) {
      throw UsageError(std::string("cannot parse typing: ") + e.what());
    }
    TestableResult r = testable(parse_system(system), ty);
    json w = json::object();
    for (const auto& [x, t] : r.env_witnesses) w[x] = print_term(t);
    json as = json::array();
    for (const auto& t : r.arg_witnesses) as.push_back(print_term(t));
    out(g, {{"testable", tri_name(r.verdict)}, {"env_witnesses", w}, {"arg_witnesses", as}, {"reason", r.reason}},
        std::string(tri_name(r.verdict)) + (r.reason.empty() ? "" : ": " + r.reason));
  });

  auto* mean = app.add_subcommand("meaningful", "meaningfulness verdict with evidence");
  need_term(mean);
  mean->add_flag("--shape-check", shape, "reject normal forms whose variables need conflicting witnesses");
  mean->callback([&] {
    Term t = term_arg(term);
    Budgets b = g.budgets();
    b.shape_check = shape;
    MeaningResult m = meaningful(t, b);
    std::string plain = std::string(verdict_name(m.verdict)) + ": " + m.reason;
    if (m.context) plain += "\ncontext " + print_ctx(*m.context) + " reaches " + print_term(m.replay);
    out(g, meaning_json(m), plain);
  });

  auto add_from = [&](CLI::App* c) {
    c->add_option("--from", from, "cbn or cbv")->required()->check(CLI::IsMember({"cbn", "cbv"}));
  };
  auto cterm_arg = [&]() {
    Term t = term_arg(term);
    if (!is_cterm(t)) throw UsageError("not a CBN/CBV term (no bangs or derelictions allowed)");
    return t;
  };

  auto* emb = app.add_subcommand("embed", "embed a CBN/CBV term");
  need_term(emb);
  add_from(emb);
  emb->callback([&] {
    Term e = embed(parse_calculus(from), cterm_arg());
    out(g, {{"image", print_term(e)}}, print_term(e));
  });

  auto* sim = app.add_subcommand("simulate", "project source steps onto the embedding");
  need_term(sim);
  add_from(sim);
  sim->callback([&] {
    SimReport r = simulate_check(parse_calculus(from), cterm_arg(), g.fuel);
    json steps = json::array();
    std::string plain;
    for (const auto& s : r.steps) {
      json chain = json::array();
      for (const auto& c : s.chain) chain.push_back(print_term(c));
      const char* status = s.exact ? "exact" : s.modulo ? "up-to-closure-placement" : s.exhausted ? "failed" : "unknown";
      steps.push_back({{"from", print_term(s.source)}, {"to", print_term(s.target)}, {"status", status}, {"chain", chain}});
      plain += std::string(status) + ": " + print_term(s.source) + "  ~>  " + print_term(s.target) + "\n";
    }
    plain += "exact " + std::to_string(r.exact) + "  modulo " + std::to_string(r.modulo) + "  failed " +
             std::to_string(r.failed) + "  unknown " + std::to_string(r.unknown);
    out(g, {{"steps", steps}, {"exact", r.exact}, {"modulo", r.modulo}, {"failed", r.failed}, {"unknown", r.unknown}},
        plain);
    if (!r.ok()) code = kPropertyFailure;
  });

  auto* tr = app.add_subcommand("transfer", "compare meaningfulness and typability with the embedding");
  need_term(tr);
  add_from(tr);
  tr->callback([&] {
    Calculus c = parse_calculus(from);
    Term t = cterm_arg();
    TransferReport m = transfer_check(c, t, g.budgets());
    TypingTransfer ty = typing_transfer_check(c, t, g.bounds());
    json j = {{"source", c_meaning_json(m.source)},
              {"embedding", meaning_json(m.target)},
              {"disagreement", m.disagreement},
              {"typings", {{"ok", ty.ok}, {"source", ty.source}, {"embedding", ty.target}, {"carried", ty.carried},
                           {"failures", ty.failures}, {"sets_equal", ty.sets_equal}, {"detail", ty.detail}}}};
    std::string plain = std::string(calculus_name(c)) + ": " + verdict_name(m.source.verdict) +
                        "   embedding: " + verdict_name(m.target.verdict) +
                        (m.disagreement ? "   DISAGREE" : "") + "\ntypings carried " + std::to_string(ty.carried) +
                        ", failures " + std::to_string(ty.failures);
    out(g, j, plain);
    if (m.disagreement || !ty.ok) code = kPropertyFailure;
  });

  auto* pt = app.add_subcommand("prop-test", "run a property suite");
  pt->add_option("--suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  pt->add_option("--count", count, "sample this many cases instead of the default regime");
  pt->add_option("--size", size, "term size bound");
  pt->add_option("--names", names, "free names for enumeration")->capture_default_str();
  pt->callback([&] {
    SuiteConfig cfg;
    cfg.suite = suite;
    cfg.seed = g.seed;
    cfg.count = count;
    cfg.size = size;
    cfg.names = names;
    cfg.fuel = g.fuel;
    cfg.bounds = g.bounds();
    Report r = run_suite(cfg);
    out(g, r.to_json(), report_text(r));
    if (!r.ok()) code = kPropertyFailure;
  });

  auto* corp = app.add_subcommand("corpus", "list the curated examples, or check them with --check");
  corp->add_flag("--check", check, "check every entry");
  corp->callback([&] {
    json arr = json::array();
    std::string plain;
    bool all = true;
    for (const auto& e : corpus()) {
      json j = {{"name", e.name}, {"kind", e.kind}, {"data", e.data}};
      plain += e.name + " [" + e.kind + "]";
      if (check) {
        std::string err = check_corpus_entry(e);
        j["ok"] = err.empty();
        if (!err.empty()) j["error"] = err;
        all = all && err.empty();
        plain += err.empty() ? "  ok" : "  FAIL: " + err;
      }
      arr.push_back(j);
      plain += "\n";
    }
    out(g, {{"schema", "banglab.corpus/1"}, {"entries", arr}}, plain);
    if (!all) code = kPropertyFailure;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPropertyFailure;
  }
  return code;
}
