#include "rittcalc/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "rittcalc/errors.hpp"

namespace rittcalc::report {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json complex_json(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

Json matrix_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) entries.push_back(complex_json(m(i, j)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Json space_json(const numlin::SpaceModel& space) {
  using namespace numlin;
  Json j{{"name", space.name()}};
  if (space.is<Hilbert>()) {
    j["model"] = "hilbert";
    j["dim"] = space.as<Hilbert>().dim;
  } else if (space.is<LpWeighted>()) {
    const auto& l = space.as<LpWeighted>();
    j["model"] = "lp";
    j["p"] = l.p;
    j["weights"] = l.weights;
  } else if (space.is<SchattenP>()) {
    j["model"] = "schatten";
    j["p"] = space.as<SchattenP>().p;
    j["n"] = space.as<SchattenP>().n;
  } else {
    j["model"] = "sup";
    j["dim"] = space.as<SupSeq>().dim;
  }
  return j;
}

Json series_json(const Series& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    Json row = Json::array();
    for (double v : r) row.push_back(number(v));
    rows.push_back(std::move(row));
  }
  return Json{{"columns", s.columns}, {"rows", std::move(rows)}};
}

std::string seed_string(std::uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(seed));
  return buf;
}

Json envelope(const std::string& kind, std::uint64_t seed, bool timestamp) {
  Json j{{"schema", kSchema}, {"kind", kind}, {"seed", seed_string(seed)}};
  if (timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    j["timestamp"] = buf;
  }
  return j;
}

Json to_json(const ritt::RittReport& r) {
  Json sup = Json::array();
  for (const auto& [beta, v] : r.resolvent_sup) sup.push_back(Json{{"beta", beta}, {"sup", number(v)}});
  auto arr = [](const std::array<double, 4>& a) {
    Json out = Json::array();
    for (double v : a) out.push_back(number(v));
    return out;
  };
  return Json{{"verdict", ritt::to_string(r.verdict)},
              {"reasons", r.reasons},
              {"type_alpha", r.type_alpha ? Json(*r.type_alpha) : Json("not-stolz")},
              {"power_bound", number(r.power_bound)},
              {"increment_bound", number(r.increment_bound)},
              {"decay", arr(r.decay)},
              {"power_bound_2n", number(r.power_bound_2n)},
              {"increment_bound_2n", number(r.increment_bound_2n)},
              {"decay_2n", arr(r.decay_2n)},
              {"resolvent_sup", std::move(sup)},
              {"resolvent_sampled", true},
              {"norms_exact", r.norms_exact},
              {"has_unit_eigenvalue", r.has_unit_eigenvalue},
              {"n_used", r.n_used},
              {"space", space_json(r.space)}};
}

Json to_json(const funcalc::CalcReport& r) {
  return Json{{"value", matrix_json(r.value)},
              {"error_estimate", number(r.error_estimate)},
              {"beta", r.beta},
              {"nodes", r.nodes},
              {"refinements", r.refinements},
              {"converged", r.converged},
              {"deflated", r.deflated}};
}

Json to_json(const sqfun::SFReport& r) {
  return Json{{"value", number(r.value)},
              {"tail_bound", number(r.tail_bound)},
              {"n_used", r.n_used},
              {"capped", r.capped}};
}

Json to_json(const sqfun::SFConstant& c) {
  Json w = Json::array();
  for (Index i = 0; i < c.witness.size(); ++i) w.push_back(complex_json(c.witness(i)));
  return Json{{"value", number(c.value)}, {"exact", c.exact}, {"tested", c.tested}, {"witness", std::move(w)}};
}

Json to_json(const sqfun::RadEstimate& r) {
  return Json{{"value", number(r.value)},
              {"exact", r.exact},
              {"samples", r.samples},
              {"seed", seed_string(r.seed)},
              {"std_error", number(r.std_error)}};
}

Json to_json(const lab::SimilarityReport& r) {
  return Json{{"contraction_norm", number(r.contraction_norm)},
              {"contraction_ok", r.ok()},
              {"equiv_lower", number(r.equiv_lower)},
              {"equiv_upper", number(r.equiv_upper)},
              {"condition", number(r.condition)},
              {"tail", number(r.tail)},
              {"v", matrix_json(r.v)},
              {"m", matrix_json(r.m)}};
}

Json to_json(const lab::GalleryInstance& g) {
  Json params = Json::object(), checks = Json::object();
  for (const auto& [k, v] : g.params) params[k] = number(v);
  for (const auto& [k, v] : g.checks) checks[k] = number(v);
  return Json{{"gallery", lab::to_string(g.kind)},
              {"params", std::move(params)},
              {"space", space_json(g.space)},
              {"checks", std::move(checks)},
              {"flags", g.flags},
              {"t", matrix_json(g.t)}};
}

Json to_json(const lab::C0Witness& w) {
  return Json{{"n", w.n},
              {"covering_size", w.m},
              {"covering", number(w.covering)},
              {"covering_certified", w.covering_certified},
              {"rad", number(w.rad)},
              {"sup_column", number(w.sup_column)},
              {"ratio", number(w.ratio)},
              {"holds", w.holds}};
}

Json to_json(const lab::ConditionalBasis& c) {
  return Json{{"n", c.n},
              {"kappa", c.kappa},
              {"basis_condition", number(c.basis_condition)},
              {"sf_constant", number(c.sf_constant)},
              {"sf_constant_adjoint", number(c.sf_constant_adjoint)},
              {"equiv_ratio", number(c.equiv_ratio)},
              {"contraction_norm", number(c.contraction_norm)},
              {"t", matrix_json(c.t)}};
}

void add_series(Json& report, const Series& s) { report["series"][s.name] = series_json(s); }

std::string to_csv(const Json& report, const std::string& name) {
  if (!report.is_object() || !report.contains("series") || !report["series"].is_object() ||
      report["series"].empty())
    throw DomainError("report has no series");
  const Json& all = report["series"];
  const Json* s = nullptr;
  if (name.empty()) {
    if (all.size() != 1) {
      std::string names;
      for (const auto& [k, v] : all.items()) names += (names.empty() ? "" : ", ") + k;
      throw DomainError("report has several series, pick one of: " + names);
    }
    s = &all.begin().value();
  } else {
    if (!all.contains(name)) throw DomainError("no series named '" + name + "'");
    s = &all[name];
  }
  std::ostringstream out;
  const Json& cols = (*s)["columns"];
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].get<std::string>();
  out << '\n';
  for (const Json& row : (*s)["rows"]) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << (row[i].is_string() ? row[i].get<std::string>() : row[i].dump());
    }
    out << '\n';
  }
  return out.str();
}

namespace {

bool scalar_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const Json& e : j)
    if (e.is_structured()) return false;
  return true;
}

// Indented like dump(2), but arrays of scalars stay on one line.
void write(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' '), close(static_cast<std::size_t>(indent), ' ');
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(k).dump() + ": ";
      write(v, indent + 2, out);
    }
    out += "\n" + close + "}";
  } else if (j.is_array() && !j.empty() && !scalar_array(j)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      write(j[i], indent + 2, out);
    }
    out += "\n" + close + "]";
  } else if (scalar_array(j) && !j.empty()) {
    out += "[";
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
    out += "]";
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string dump(const Json& j) {
  std::string out;
  if (j.is_object() && j.contains("series")) {
    Json moved = j;
    Json series = std::move(moved["series"]);
    moved.erase("series");
    moved["series"] = std::move(series);
    write(moved, 0, out);
  } else {
    write(j, 0, out);
  }
  return out + "\n";
}

}  // namespace rittcalc::report
