#pragma once

// Command-line front end: roots, schubert, decompose, check.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coxhodge/bott_samelson.hpp"
#include "coxhodge/coxeter.hpp"
#include "coxhodge/decompose.hpp"
#include "coxhodge/hodge.hpp"
#include "coxhodge/polynomial.hpp"
#include "coxhodge/schubert.hpp"

namespace coxhodge::cli {

using nlohmann::json;

enum ExitCode { kOk = 0, kInvalid = 2, kInfinite = 3, kInternal = 4 };

struct RunConfig {
  std::string command;
  std::string type;
  std::string matrix_file;
  std::string word;
  std::string lambda;
  std::string format = "text";
  std::string output;
  size_t bound = 100000;
  int threads = 0;
  bool all = false;
  bool full = false;
};

inline CoxeterMatrix parse_matrix_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("matrix file must hold a non-empty array of arrays");
  CoxeterMatrix m;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != j.size()) throw InvalidInput("matrix must be square");
    std::vector<int> r;
    for (const auto& e : row) {
      if (e.is_string() && e.get<std::string>() == "inf")
        r.push_back(kInfinity);
      else if (e.is_number_integer())
        r.push_back(e.get<int>());
      else
        throw InvalidInput("matrix entries must be integers or \"inf\"");
    }
    m.push_back(std::move(r));
  }
  return m;
}

inline SystemPtr load_system(const RunConfig& c) {
  if (c.type.empty() == c.matrix_file.empty())
    throw InvalidInput("give exactly one of --type and --matrix");
  if (!c.type.empty()) return CoxeterSystem::from_type(c.type);
  std::ifstream in(c.matrix_file);
  if (!in) throw InvalidInput("cannot open matrix file " + c.matrix_file);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("matrix file is not valid JSON: ") + e.what());
  }
  return std::make_shared<const CoxeterSystem>(parse_matrix_json(j), c.matrix_file);
}

inline std::string group_name(const RunConfig& c) { return c.type.empty() ? c.matrix_file : c.type; }

/// "1,2,1" -> {0,1,0}
inline Word parse_word(const std::string& text, int rank) {
  Word w;
  if (text.empty()) return w;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      throw InvalidInput("bad generator index '" + tok + "'");
    }
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    if (pos != tok.size()) throw InvalidInput("bad generator index '" + tok + "'");
    if (v < 1 || v > rank)
      throw InvalidInput("generator index " + std::to_string(v) + " outside 1.." + std::to_string(rank));
    w.push_back(v - 1);
  }
  return w;
}

inline std::vector<int> one_based(const Word& w) {
  std::vector<int> r;
  for (int s : w) r.push_back(s + 1);
  return r;
}

inline AmpleWeight parse_lambda(const std::string& text, const CoxeterSystem& sys) {
  if (text == "rho") return rho_weight(sys);
  Vector lam;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) lam.push_back(parse_field_element(tok, sys.field_ptr()));
  return make_weight(sys, std::move(lam));
}

inline int thread_count(const RunConfig& c) {
  int n = c.threads;
  if (const char* env = std::getenv("COXHODGE_THREADS")) {
    try {
      n = std::stoi(env);
    } catch (const std::exception&) {
      throw InvalidInput("COXHODGE_THREADS must be an integer");
    }
  }
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return n;
}

/// Runs job(k) for k < count on up to `width` threads; first error is rethrown.
template <class Job>
void parallel_for(size_t count, int width, Job job) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t k; (k = next++) < count;) {
      try {
        job(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const size_t n = std::min<size_t>(std::max(1, width), std::max<size_t>(count, 1));
  std::vector<std::thread> pool;
  for (size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::vector<std::string> strings(const Vector& v) {
  std::vector<std::string> r;
  for (const auto& x : v) r.push_back(x.to_string());
  return r;
}

/// Coefficient vector as text, e.g. "α1∨ + φα2∨"; φ marks the golden ratio.
inline std::string combination_label(const Vector& v, const std::string& symbol) {
  std::string out;
  for (size_t s = 0; s < v.size(); ++s) {
    const FieldElement& c = v[s];
    if (c.is_zero()) continue;
    std::string coef;
    FieldElement a = abs(c);
    if (a.is_one())
      coef = "";
    else if (a * a == a + FieldElement(1))
      coef = "φ";
    else if (a.is_rational())
      coef = a.to_string();
    else
      coef = "(" + a.to_string() + ")";
    const bool neg = sign(c) < 0;
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    out += coef + symbol + std::to_string(s + 1);
  }
  return out.empty() ? "0" : out;
}

inline std::string coroot_label(const Vector& v) {
  std::string s = combination_label(v, "α");
  // append the coroot mark after every index digit run
  std::string r;
  for (size_t i = 0; i < s.size(); ++i) {
    r += s[i];
    if (std::isdigit(static_cast<unsigned char>(s[i])) &&
        (i + 1 == s.size() || !std::isdigit(static_cast<unsigned char>(s[i + 1]))))
      r += "∨";
  }
  return r;
}

/// Elements sorted by length, then lexicographic reduced word.
inline std::vector<size_t> sorted_elements(const FiniteCoxeterGroup& g) {
  std::vector<size_t> idx(g.order());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    if (g.length(a) != g.length(b)) return g.length(a) < g.length(b);
    return g.word(a) < g.word(b);
  });
  return idx;
}

inline std::string class_label(const FiniteCoxeterGroup& g, size_t x) {
  return "Y_{" + (g.length(x) ? word_string(g.word(x)) : std::string("id")) + "}";
}

inline json cmd_roots(const RunConfig& c) {
  SystemPtr sys = load_system(c);
  FiniteCoxeterGroup g(sys, c.bound);
  json j;
  j["group"] = group_name(c);
  j["rank"] = sys->rank();
  j["order"] = g.order();
  const FieldContext& ctx = sys->field();
  j["field"] = {{"conductor", ctx.conductor()}, {"degree", ctx.degree()}};
  json cartan = json::array();
  for (int s = 0; s < sys->rank(); ++s) {
    json row = json::array();
    for (int t = 0; t < sys->rank(); ++t) row.push_back(sys->cartan(s, t).to_string());
    cartan.push_back(row);
  }
  j["cartan"] = cartan;
  j["roots"] = json::array();
  for (size_t k : root_sequence(g)) {
    const Root& r = g.positive_roots()[k];
    std::vector<double> approx;
    for (const auto& x : r.coords) approx.push_back(x.approx());
    j["roots"].push_back({{"root", strings(r.coords)},
                          {"label", combination_label(r.coords, "α")},
                          {"approx", approx},
                          {"reflection", one_based(g.word(r.reflection))},
                          {"coroot", strings(r.coroot)}});
  }
  return j;
}

inline json cmd_schubert(const RunConfig& c) {
  SystemPtr sys = load_system(c);
  auto g = std::make_shared<const FiniteCoxeterGroup>(sys, c.bound);
  SchubertCalculus sc(g);
  std::vector<size_t> order = sorted_elements(*g);
  json j;
  j["group"] = group_name(c);
  j["order"] = g->order();
  j["classes"] = json::array();
  for (size_t x : order)
    j["classes"].push_back({{"label", class_label(*g, x)},
                            {"element", one_based(g->word(x))},
                            {"degree", sc.degree(x)},
                            {"polynomial", sc.Y(x).to_string()}});
  const int top = 2 * g->length(g->longest());
  json pairing = json::array();
  for (size_t x : order) {
    json row = json::array();
    for (size_t z : order)
      row.push_back(sc.degree(x) + sc.degree(z) == top ? sc.pairing(sc.Y(x), sc.Y(z)).to_string() : "0");
    pairing.push_back(row);
  }
  j["pairing"] = pairing;
  j["edges"] = json::array();
  for (size_t x : order) {
    auto covers = g->lower_covers(x);
    std::sort(covers.begin(), covers.end(), [&](const Cover& a, const Cover& b) {
      return g->word(a.target) < g->word(b.target);
    });
    for (const auto& cv : covers) {
      const Vector& cr = g->positive_roots()[cv.root].coroot;
      j["edges"].push_back({{"from", class_label(*g, x)},
                            {"to", class_label(*g, cv.target)},
                            {"coroot", strings(cr)},
                            {"label", coroot_label(cr)}});
    }
  }
  return j;
}

inline json cmd_decompose(const RunConfig& c) {
  SystemPtr sys = load_system(c);
  Word w = parse_word(c.word, sys->rank());
  GradedModule bs = bs_module(*sys, w);
  Decomposition dec = decompose_bott_samelson(*sys, w);
  SoergelCatalog cat(sys, c.bound);
  cat.label(dec);
  json j;
  j["group"] = group_name(c);
  j["word"] = one_based(w);
  j["dims"] = bs.piece_dims();
  j["summands"] = json::array();
  for (const auto& s : dec.summands)
    j["summands"].push_back({{"label", s.label},
                             {"shift", s.shift},
                             {"dims", s.module.piece_dims()},
                             {"total", s.module.total_dim()}});
  j["description"] = describe(dec);
  j["verified"] = verify_decomposition(bs, dec);
  return j;
}

inline LefschetzReport check_one(const CoxeterSystem& sys, const std::string& group, const Word& w,
                                 const std::string& lambda, bool full) {
  AmpleWeight lam = parse_lambda(lambda, sys);
  LefschetzReport rep;
  if (full) {
    GradedModule bs = bs_module(sys, w);
    rep = check_module(bs, lam, static_cast<int>(w.size()));
    rep.summand = "full";
  } else {
    SoergelModule d = soergel_module(sys, w);
    rep = check_module(d.module, lam, static_cast<int>(w.size()));
    rep.summand = "D_w";
  }
  rep.group = group;
  rep.word = one_based(w);
  return rep;
}

inline json cmd_check(const RunConfig& c) {
  SystemPtr sys = load_system(c);
  if (c.lambda.empty()) throw InvalidInput("check needs --lambda");
  if (!c.all) {
    Word w = parse_word(c.word, sys->rank());
    return to_json(check_one(*sys, group_name(c), w, c.lambda, c.full));
  }
  if (!c.word.empty()) throw InvalidInput("--all and --word are exclusive");
  FiniteCoxeterGroup g(sys, c.bound);
  std::vector<size_t> order = sorted_elements(g);
  std::vector<LefschetzReport> reps(order.size());
  parallel_for(order.size(), thread_count(c), [&](size_t k) {
    reps[k] = check_one(*sys, group_name(c), g.word(order[k]), c.lambda, c.full);
  });
  json arr = json::array();
  for (const auto& r : reps) arr.push_back(to_json(r));
  return arr;
}

// Text renderings read the same JSON values, so both formats agree.

inline std::string join(const json& arr, const std::string& sep = ", ") {
  std::string s;
  for (size_t i = 0; i < arr.size(); ++i) {
    if (i) s += sep;
    s += arr[i].is_string() ? arr[i].get<std::string>() : arr[i].dump();
  }
  return s;
}

inline void text_roots(const json& j, std::ostream& out) {
  out << "group " << j["group"].get<std::string>() << ", rank " << j["rank"] << ", |W| = " << j["order"]
      << ", field Q(c), c = 2cos(pi/" << j["field"]["conductor"] << "), degree " << j["field"]["degree"]
      << "\n";
  out << "cartan matrix\n";
  for (const auto& row : j["cartan"]) out << "  [" << join(row) << "]\n";
  out << "positive roots (" << j["roots"].size() << ")\n";
  size_t k = 1;
  for (const auto& r : j["roots"]) {
    out << "  " << k++ << ": " << r["label"].get<std::string>() << "  coords (" << join(r["root"]) << ")  ~ (";
    for (size_t i = 0; i < r["approx"].size(); ++i) {
      if (i) out << ", ";
      out << std::fixed << std::setprecision(6) << r["approx"][i].get<double>() << std::defaultfloat;
    }
    out << ")  reflection " << join(r["reflection"], "") << "  coroot (" << join(r["coroot"]) << ")\n";
  }
}

inline void text_schubert(const json& j, std::ostream& out) {
  out << "group " << j["group"].get<std::string>() << ", |W| = " << j["order"] << "\n";
  out << "schubert classes (" << j["classes"].size() << ")\n";
  for (const auto& c : j["classes"])
    out << "  " << c["label"].get<std::string>() << "  degree " << c["degree"] << "  "
        << c["polynomial"].get<std::string>() << "\n";
  out << "pairing matrix\n";
  for (const auto& row : j["pairing"]) out << "  [" << join(row) << "]\n";
  out << "chevalley graph: " << j["classes"].size() << " vertices, " << j["edges"].size() << " edges\n";
  for (const auto& e : j["edges"])
    out << "  " << e["from"].get<std::string>() << " -> " << e["to"].get<std::string>() << "  "
        << e["label"].get<std::string>() << "  (" << join(e["coroot"]) << ")\n";
}

inline void text_decompose(const json& j, std::ostream& out) {
  out << "BS(" << join(j["word"], ",") << ") over " << j["group"].get<std::string>() << ", dims ("
      << join(j["dims"]) << ")\n";
  out << j["description"].get<std::string>() << "\n";
  for (const auto& s : j["summands"])
    out << "  " << s["label"].get<std::string>() << "  shift " << s["shift"] << "  dims (" << join(s["dims"])
        << ")  total " << s["total"] << "\n";
  out << "verified: " << (j["verified"].get<bool>() ? "yes" : "no") << "\n";
}

inline void text_report(const json& r, std::ostream& out) {
  out << r["group"].get<std::string>() << " word [" << join(r["word"], ",") << "] " << r["summand"].get<std::string>()
      << "  lambda (" << join(r["lambda"]) << ")  ample " << (r["ample"].get<bool>() ? "yes" : "no") << "  "
      << r["verdict"].get<std::string>() << "  " << r["millis"] << " ms\n";
  for (const auto& d : r["degrees"])
    out << "  i=" << d["i"] << " dim " << d["dim"] << " rank " << d["rank"] << " hl "
        << (d["hl"].get<bool>() ? "yes" : "no") << " prim " << d["prim_dim"] << " signature ("
        << join(d["signature"]) << ") hr " << (d["hr"].get<bool>() ? "yes" : "no") << "\n";
}

inline void text_check(const json& j, std::ostream& out) {
  if (j.is_array()) {
    size_t pass = 0;
    for (const auto& r : j) {
      text_report(r, out);
      pass += r["verdict"] == "pass";
    }
    out << pass << "/" << j.size() << " pass\n";
  } else {
    text_report(j, out);
  }
}

inline int execute(const RunConfig& c, std::ostream& out) {
  json j;
  if (c.command == "roots") j = cmd_roots(c);
  else if (c.command == "schubert") j = cmd_schubert(c);
  else if (c.command == "decompose") j = cmd_decompose(c);
  else if (c.command == "check") j = cmd_check(c);
  else throw InvalidInput("unknown command");
  std::ofstream file;
  std::ostream* dst = &out;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) throw InvalidInput("cannot write " + c.output);
    dst = &file;
  }
  if (c.format == "json") {
    *dst << j.dump(2) << "\n";
  } else if (c.command == "roots") {
    text_roots(j, *dst);
  } else if (c.command == "schubert") {
    text_schubert(j, *dst);
  } else if (c.command == "decompose") {
    text_decompose(j, *dst);
  } else {
    text_check(j, *dst);
  }
  return kOk;
}

/// Parses argv-style arguments (without the program name) and runs.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Coxeter group Hodge theory toolkit", "coxhodge"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--type", c.type, "group type, e.g. A3, H3, I2:5");
    sub->add_option("--matrix", c.matrix_file, "Coxeter matrix JSON file");
    sub->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--output", c.output, "write output to a file");
    sub->add_option("--bound", c.bound, "enumeration bound");
    sub->add_option("--threads", c.threads, "parallel width");
  };
  auto* roots = app.add_subcommand("roots", "positive roots, reflections, coroots, Cartan matrix");
  auto* schubert = app.add_subcommand("schubert", "Schubert basis, pairing matrix, Chevalley graph");
  auto* decomp = app.add_subcommand("decompose", "decompose a Bott-Samelson module");
  auto* check = app.add_subcommand("check", "hard Lefschetz and Hodge-Riemann checks");
  for (auto* s : {roots, schubert, decomp, check}) add_common(s);
  decomp->add_option("--word", c.word, "generator indices, 1-based, comma separated")->required();
  check->add_option("--word", c.word, "generator indices, 1-based, comma separated");
  check->add_option("--lambda", c.lambda, "coordinates in the simple roots, or rho")->required();
  check->add_flag("--all", c.all, "check D_w for every w");
  check->add_flag("--full", c.full, "check the whole Bott-Samelson module");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }
  for (auto* s : {roots, schubert, decomp, check})
    if (s->parsed()) c.command = s->get_name();
  try {
    return execute(c, out);
  } catch (const GroupInfinite& e) {
    err << "error: group is infinite: " << e.what() << "\n";
    return kInfinite;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace coxhodge::cli
