#include "lattice_ist/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lattice_ist/gelfand_levitan.hpp"
#include "lattice_ist/marchenko.hpp"
#include "lattice_ist/tev_inverse.hpp"

namespace lattice_ist {

namespace {

using json = nlohmann::ordered_json;

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- output ---------------------------------------------------------------

void put_number(std::string& s, double x) {
  if (!std::isfinite(x)) {
    s += "null";
    return;
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  s.append(buf, res.ptr);
}

void emit(std::string& s, const json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    s += '\n';
    s.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        s += "{}";
        return;
      }
      s += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) s += ',';
        first = false;
        newline(depth + 1);
        s += json(k).dump();
        s += indent < 0 ? ":" : ": ";
        emit(s, v, indent, depth + 1);
      }
      newline(depth);
      s += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        s += "[]";
        return;
      }
      // numeric leaves stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      s += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) s += flat && indent >= 0 ? ", " : ",";
        if (!flat) newline(depth + 1);
        emit(s, j[i], indent, depth + 1);
      }
      if (!flat) newline(depth);
      s += ']';
      return;
    }
    case json::value_t::number_float:
      put_number(s, j.get<double>());
      return;
    default:
      s += j.dump();
  }
}

std::string dump(const json& j) {
  std::string s;
  emit(s, j, 2, 0);
  s += '\n';
  return s;
}

json numbers(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

json jost_document(const LaurentPoly& f0, int b) {
  std::vector<double> c(static_cast<std::size_t>(2 * b), 0.0);
  for (int k = 0; k < 2 * b; ++k) c[static_cast<std::size_t>(k)] = f0.coeff(k);
  return json{{"kind", "jost"}, {"f0", numbers(c)}, {"b", b}};
}

json laurent(const LaurentPoly& p) { return json{{"lo", p.lo()}, {"coeffs", numbers(p.coeffs())}}; }

json complex_pair(Complex c) { return json::array({c.real(), c.imag()}); }

json bound_states_json(const std::vector<BoundState>& bs) {
  json a = json::array();
  for (const auto& s : bs) a.push_back({{"z", s.z}, {"mu", s.mu}, {"c", s.c}, {"C", s.C}});
  return a;
}

// ---- input ----------------------------------------------------------------

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw SchemaError(where + " must be finite");
  return x;
}

std::vector<double> number_array(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) throw SchemaError(std::string("\"") + key + "\" must be an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < doc[key].size(); ++i) v.push_back(number(doc[key][i], std::string(key) + "[" + std::to_string(i) + "]"));
  return v;
}

int integer(const json& doc, const char* key) {
  if (!doc.contains(key)) throw SchemaError(std::string("missing \"") + key + "\"");
  const double x = number(doc[key], key);
  if (x != std::floor(x) || std::abs(x) > 1e6) throw SchemaError(std::string("\"") + key + "\" must be an integer");
  return static_cast<int>(x);
}

json read_document(const std::string& path, std::istream& in, std::initializer_list<const char*> kinds,
                   std::initializer_list<const char*> fields) {
  json doc;
  try {
    if (path == "-") {
      doc = json::parse(in);
    } else {
      std::ifstream f(path);
      if (!f) throw SchemaError("cannot open " + path);
      doc = json::parse(f);
    }
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("document must be a JSON object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) throw SchemaError("missing string field \"kind\"");
  const std::string kind = doc["kind"].get<std::string>();
  if (std::find_if(kinds.begin(), kinds.end(), [&](const char* k) { return kind == k; }) == kinds.end()) {
    std::string want;
    for (const char* k : kinds) want += (want.empty() ? "" : " or ") + std::string(k);
    throw SchemaError("expected kind " + want + ", got \"" + kind + "\"");
  }
  for (const auto& [k, v] : doc.items()) {
    if (k == "kind") continue;
    if (k == "meta") {
      if (!v.is_object()) throw SchemaError("\"meta\" must be an object of strings");
      for (const auto& [mk, mv] : v.items())
        if (!mv.is_string()) throw SchemaError("meta." + mk + " must be a string");
      continue;
    }
    if (std::find_if(fields.begin(), fields.end(), [&](const char* f) { return k == f; }) == fields.end())
      throw SchemaError("unexpected field \"" + k + "\"");
  }
  return doc;
}

Potential read_potential(const json& doc) {
  auto v = number_array(doc, "V");
  if (v.empty()) throw SchemaError("\"V\" must be non-empty: b >= 1 required");
  if (std::abs(v.back()) <= 1e-12) throw SchemaError("the last entry of \"V\" must be nonzero (it defines b)");
  return Potential(std::move(v));
}

SpectralData read_jost(const json& doc) {
  SpectralData d;
  d.b = integer(doc, "b");
  if (d.b < 1) throw SchemaError("\"b\" must be >= 1");
  const auto f0 = number_array(doc, "f0");
  if (static_cast<int>(f0.size()) != 2 * d.b) throw SchemaError("\"f0\" must hold the 2b coefficients c_0 .. c_{2b-1}");
  d.f0 = LaurentPoly(0, f0);
  if (doc.contains("bound_states")) {
    if (!doc["bound_states"].is_array()) throw SchemaError("\"bound_states\" must be an array");
    for (const auto& s : doc["bound_states"]) {
      if (!s.is_object() || !s.contains("z") || !s.contains("C"))
        throw SchemaError("each bound state needs \"z\" and \"C\"");
      BoundState b;
      b.z = number(s["z"], "bound state z");
      b.C = number(s["C"], "bound state C");
      if (b.z == 0.0) throw SchemaError("bound state z must be nonzero");
      b.mu = 2.0 - b.z - 1.0 / b.z;
      d.bound_states.push_back(b);
    }
  }
  return d;
}

TransmissionSpectrum read_spectrum(const json& doc) {
  if (!doc.contains("eigs") || !doc["eigs"].is_array()) throw SchemaError("\"eigs\" must be an array of [re, im] pairs");
  std::vector<Complex> ev;
  for (std::size_t i = 0; i < doc["eigs"].size(); ++i) {
    const json& e = doc["eigs"][i];
    const std::string where = "eigs[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2) throw SchemaError(where + " must be [re, im]");
    ev.emplace_back(number(e[0], where), number(e[1], where));
  }
  try {
    TransmissionSpectrum s = make_spectrum(std::move(ev));
    build_E(s);  // conjugate closure is part of the schema
    return s;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::OddCount || e.code() == ErrorCode::NotConjugateClosed) throw SchemaError(e.what());
    throw;
  }
}

// ---- commands -------------------------------------------------------------

const char* endpoint_name(EndpointClass c) { return c == EndpointClass::Generic ? "generic" : "exceptional"; }

json cmd_forward(const json& doc) {
  const Potential V = read_potential(doc);
  const int b = V.support();
  const LaurentPoly f0 = jost_function(V);
  const ScatteringMatrix S = scattering_matrix(f0);
  const auto det = transmission_det(V);

  json out{{"kind", "forward_report"}, {"b", b}, {"V", numbers(V.values())}, {"jost", jost_document(f0, b)}};
  out["f0"] = numbers(f0.coeffs());
  out["S"] = {{"numerator", laurent(S.numerator)}, {"denominator", laurent(S.denominator)}};
  out["bound_states"] = bound_states_json(bound_states(f0, V));
  out["endpoints"] = {{"plus_one", endpoint_name(classify_endpoint(f0, Endpoint::PlusOne))},
                      {"minus_one", endpoint_name(classify_endpoint(f0, Endpoint::MinusOne))}};
  out["D"] = numbers(det.D.coeffs());
  out["E"] = numbers(det.E.coeffs());

  std::vector<Complex> ev;
  if (b >= 2) ev = transmission_eigenvalues(V).eigenvalues;
  json te = json::array();
  Complex sum = 0.0;
  for (std::size_t i = 0; i < ev.size();) {
    std::size_t j = i;
    while (j < ev.size() && ev[j] == ev[i]) ++j;
    te.push_back({{"lambda", complex_pair(ev[i])}, {"multiplicity", j - i}});
    i = j;
  }
  for (const auto& l : ev) sum += l;
  double head = 0.0;
  for (int j = 1; j < b; ++j) head += V[j];
  out["transmission_eigenvalues"] = te;
  out["eigenvalue_sum"] = sum.real();
  out["sum_rule_residual"] = std::abs(sum - (4.0 * (b - 1) + head));
  return out;
}

json report_json(const InversionReport& r, InversionMethod method) {
  json out{{"kind", "inversion_report"},
           {"status", to_string(r.status)},
           {"method", method == InversionMethod::Marchenko ? "marchenko" : "gl"}};
  out["potential"] = r.potential ? numbers(r.potential->values()) : json(nullptr);
  out["f0"] = r.f0 ? numbers(r.f0->coeffs()) : json(nullptr);
  if (r.f0) out["jost"] = jost_document(*r.f0, r.diagnostics.b);
  const auto& d = r.diagnostics;
  json diag{{"b", d.b},
            {"K01_over_Vb", d.K01_over_Vb},
            {"eigenvalue_sum", d.eigenvalue_sum},
            {"four_b_minus_1", d.four_b_minus_1},
            {"gap", d.gap},
            {"warnings", d.warnings},
            {"message", d.message}};
  if (d.gamma) diag["gamma"] = *d.gamma;
  if (d.epsilon) diag["epsilon"] = *d.epsilon;
  if (d.family) {
    json pots = json::array();
    for (const auto& p : d.family->potentials) pots.push_back(numbers(p.values()));
    diag["family"] = {{"one_parameter_family", d.family->one_parameter_family}, {"potentials", pots}};
  }
  out["diagnostics"] = diag;
  return out;
}

json cmd_marchenko(const json& doc) {
  const SpectralData d = read_jost(doc);
  const MarchenkoKernel M = marchenko_kernel(d.f0, d.b);
  const KTable K = marchenko_solve(M);
  const Potential V = marchenko_invert(d.f0, d.b);
  json rows = json::array();
  for (const auto& row : K.rows()) rows.push_back(numbers(row));
  return json{{"kind", "marchenko_report"}, {"b", d.b}, {"kernel", numbers(M.values())}, {"K", rows},
              {"potential", numbers(V.values())}};
}

json cmd_gl(const json& doc) {
  SpectralData d = read_jost(doc);
  if (doc["kind"] == "jost") d = spectral_data_from_jost(d.f0, d.b);
  const int size = d.b + 1;
  const GLKernel G = gl_kernel(d, size);
  const ATable A = gl_solve(G, d.b);
  const GLInversion inv = gl_invert_with_warnings(d);
  json g = json::array(), a = json::array();
  for (int n = 1; n <= size; ++n) {
    std::vector<double> row;
    for (int m = 1; m <= size; ++m) row.push_back(G(n, m));
    g.push_back(numbers(row));
  }
  for (int n = 2; n <= size; ++n) {
    std::vector<double> row;
    for (int j = 1; j < n; ++j) row.push_back(A(n, j));
    a.push_back(numbers(row));
  }
  return json{{"kind", "gl_report"},         {"b", d.b},
              {"bound_states", bound_states_json(d.bound_states)},
              {"G", g},                       {"A", a},
              {"potential", numbers(inv.potential.values())},
              {"used_quadrature", G.used_quadrature},
              {"warnings", inv.warnings}};
}

json cmd_unusual_b3(double gamma, double epsilon) {
  const UnusualFamily f = unusual_family_b3(gamma, epsilon);
  json pots = json::array();
  for (const auto& p : f.potentials) pots.push_back(numbers(p.values()));
  return json{{"kind", "unusual_family"}, {"gamma", gamma}, {"epsilon", epsilon},
              {"one_parameter_family", f.one_parameter_family}, {"potentials", pots}};
}

int cmd_examples(const std::vector<std::string>& only, std::ostream& out, std::ostream& err) {
  std::optional<double> tol;
  if (const char* env = std::getenv("LATTICE_IST_TOL"); env && *env) {
    char* end = nullptr;
    const double t = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(t > 0.0) || !std::isfinite(t)) {
      err << "LATTICE_IST_TOL must be a positive number, got \"" << env << "\"\n";
      return kExitSchema;
    }
    tol = t;
  }
  std::vector<GoldenCase> cases;
  try {
    cases = run_golden_cases(only, tol);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitSchema;
  }
  json arr = json::array();
  bool all = true;
  for (const auto& c : cases) {
    json checks = json::array();
    double worst = 0.0;
    for (const auto& k : c.checks) {
      checks.push_back({{"what", k.what}, {"residual", k.residual}, {"tolerance", k.tolerance}, {"pass", k.passed}});
      if (k.tolerance > 0.0) worst = std::max(worst, k.residual);
    }
    json jc{{"name", c.name}, {"description", c.description}, {"pass", c.passed()}, {"max_residual", worst},
            {"checks", checks}};
    if (!c.error.empty()) jc["error"] = c.error;
    arr.push_back(jc);
    all = all && c.passed();
    err << (c.passed() ? "PASS " : "FAIL ") << c.name << "  max residual " << worst << "  " << c.description;
    if (!c.error.empty()) err << "  (" << c.error << ")";
    err << '\n';
  }
  out << dump(json{{"kind", "examples_report"}, {"all_pass", all}, {"cases", arr}});
  return all ? kExitOk : kExitGoldenFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Forward and inverse spectral problems for the half-line discrete Schrodinger operator", "lattice-ist"};
  app.require_subcommand(1);
  std::string input = "-";
  std::string method = "marchenko";
  std::vector<std::string> only;
  double gamma = 0.0, epsilon = 0.0;

  auto* forward = app.add_subcommand("forward", "potential -> Jost function, S, bound states, transmission eigenvalues");
  auto* invert = app.add_subcommand("invert", "transmission eigenvalues -> potential");
  auto* march = app.add_subcommand("marchenko", "Jost function -> Marchenko kernel, K table, potential");
  auto* gl = app.add_subcommand("gl", "Jost function or GL data -> G kernel, A table, potential");
  auto* examples = app.add_subcommand("examples", "run the golden reproduction cases");
  auto* unusual = app.add_subcommand("unusual-b3", "potentials (V1, -V1, V3) of the b = 3 unusual family");
  for (auto* sc : {forward, invert, march, gl})
    sc->add_option("input", input, "input JSON document (default: stdin)");
  invert->add_option("--method", method, "delegated inversion")->check(CLI::IsMember({"marchenko", "gl"}));
  examples->add_option("--only", only, "case names, e.g. 6.6");
  unusual->add_option("--gamma", gamma)->required();
  unusual->add_option("--epsilon", epsilon)->required();

  std::vector<std::string> argv_store{"lattice-ist"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitSchema;
  }

  try {
    if (*examples) return cmd_examples(only, out, err);
    if (*unusual) {
      out << dump(cmd_unusual_b3(gamma, epsilon));
      return kExitOk;
    }
    if (*forward) {
      out << dump(cmd_forward(read_document(input, in, {"potential"}, {"V"})));
      return kExitOk;
    }
    if (*march) {
      out << dump(cmd_marchenko(read_document(input, in, {"jost"}, {"f0", "b"})));
      return kExitOk;
    }
    if (*gl) {
      const json doc = read_document(input, in, {"jost", "gl_data"}, {"f0", "b", "bound_states"});
      if (doc["kind"] == "jost" && doc.contains("bound_states"))
        throw SchemaError("\"bound_states\" belongs to kind gl_data");
      const json rep = cmd_gl(doc);
      for (const auto& w : rep["warnings"]) err << "warning: " << w.get<std::string>() << '\n';
      out << dump(rep);
      return kExitOk;
    }
    const json doc = read_document(input, in, {"spectrum"}, {"eigs"});
    const auto m = method == "gl" ? InversionMethod::GelfandLevitan : InversionMethod::Marchenko;
    const InversionReport r = tev_invert(read_spectrum(doc), m);
    for (const auto& w : r.diagnostics.warnings) err << "warning: " << w << '\n';
    if (!r.diagnostics.message.empty()) err << to_string(r.status) << ": " << r.diagnostics.message << '\n';
    out << dump(report_json(r, m));
    switch (r.status) {
      case InversionStatus::Unique: return kExitOk;
      case InversionStatus::Unusual: return kExitUnusual;
      case InversionStatus::Inconsistent: return kExitInconsistent;
    }
    return kExitInconsistent;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const Error& e) {
    err << "computation failed: " << e.what() << '\n';
    return kExitComputation;
  }
}

}  // namespace lattice_ist
