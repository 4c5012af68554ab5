#include "rittcalc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "rittcalc/errors.hpp"
#include "rittcalc/funcalc.hpp"
#include "rittcalc/lab.hpp"
#include "rittcalc/matrix_io.hpp"
#include "rittcalc/report.hpp"
#include "rittcalc/ritt.hpp"
#include "rittcalc/sqfun.hpp"
#include "rittcalc/stolz.hpp"
#include "rittcalc/verify.hpp"

namespace rittcalc::cli {

namespace {

using report::Json;
using numlin::SpaceModel;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kFooter = R"(Exit codes:
  0 success, 1 verify found a failing check, 2 usage error, 3 input could not
  be read, 4 a numerical routine failed.

Matrix files: Matrix Market (array or coordinate; real, integer, complex or
pattern) or JSON {"rows": r, "cols": c, "entries": [[re, im], ...]} with
row-major entries.

Spaces: hilbert, sup, lp:P, schatten:P (the matrix acts on vec(x), so it must
be n^2 x n^2).

CSV series (plotdata --series NAME):
  resolvent_sup        beta, sup               analyze, gallery
  decay                j, sup_N, sup_2N        analyze, gallery
  contour              node_re, node_im, weight, tangent_re, tangent_im   funcalc
  terms                k, term                 sqfun
  ratio_vs_n           n, ratio, sqrt_n_over_2 gallery c0
  constants_vs_kappa   kappa, basis_condition, sf_constant, equiv_ratio   gallery conditional-basis)";

double parse_real(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError("bad number '" + s + "' in " + what);
  return v;
}

// "2", "-1.5", "2+3i", "0.5-i", "i", "-2j".
Complex parse_complex(std::string s, const std::string& what) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw UsageError("empty value in " + what);
  if (s.back() != 'i' && s.back() != 'j') return parse_real(s, what);
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  const std::string re = split == std::string::npos ? "" : body.substr(0, split);
  const std::string im = split == std::string::npos ? body : body.substr(split);
  double imv = 1.0;
  if (im == "-")
    imv = -1.0;
  else if (!im.empty() && im != "+")
    imv = parse_real(im, what);
  return {re.empty() ? 0.0 : parse_real(re, what), imv};
}

std::vector<Complex> parse_list(const std::string& s, const std::string& what) {
  std::vector<Complex> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_complex(item, what));
  if (out.empty()) throw UsageError("empty list in " + what);
  return out;
}

SpaceModel parse_space(const std::string& spec, const ComplexMatrix& t) {
  const Index d = t.rows();
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "hilbert" && arg.empty()) return SpaceModel::hilbert(d);
  if (kind == "sup" && arg.empty()) return SpaceModel::sup(d);
  if (kind == "lp" && !arg.empty()) {
    const double p = parse_real(arg, "--space");
    if (!(p > 1.0)) throw UsageError("lp needs p > 1");
    return SpaceModel::lp(p, d);
  }
  if (kind == "schatten" && !arg.empty()) {
    const double p = parse_real(arg, "--space");
    if (!(p >= 1.0)) throw UsageError("schatten needs p >= 1");
    const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(d))));
    if (n * n != d) throw UsageError("schatten space needs an n^2 x n^2 matrix, got " + std::to_string(d));
    return SpaceModel::schatten(p, n);
  }
  throw UsageError("unknown space '" + spec + "' (hilbert, sup, lp:P, schatten:P)");
}

std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError("bad seed '" + s + "'");
  return v;
}

ComplexMatrix load_square(const std::string& path) {
  const ComplexMatrix t = io::read_matrix(path);
  if (t.rows() != t.cols() || t.rows() == 0)
    throw IngestError("'" + path + "' is " + std::to_string(t.rows()) + " x " + std::to_string(t.cols()) +
                      ", expected a nonempty square matrix");
  if (!numlin::all_finite(t)) throw IngestError("'" + path + "' has non-finite entries");
  return t;
}

struct PhiSpec {
  funcalc::HolomorphicFn fn;
  std::optional<double> frac;
};

PhiSpec parse_phi(const std::string& spec, double gamma) {
  using funcalc::HolomorphicFn;
  if (spec.rfind("poly:", 0) == 0) return {HolomorphicFn::polynomial(parse_list(spec.substr(5), "--phi")), {}};
  if (spec.rfind("frac:", 0) == 0) {
    const double d = parse_real(spec.substr(5), "--phi");
    if (!(d > 0.0)) throw UsageError("frac needs delta > 0");
    return {funcalc::frac_fn(d), d};
  }
  if (spec == "sqrt") return {funcalc::frac_fn(0.5), 0.5};
  if (spec == "exp")
    return {HolomorphicFn::closure([](Complex z) { return std::exp(z); }, std::nullopt, "exp"), {}};
  if (spec == "cayley") {
    // |1 + z| >= 1 - sin(gamma) on B_gamma.
    const HolomorphicFn c = HolomorphicFn::rational({1.0, -1.0}, {1.0, 1.0}).with_name("cayley");
    return {c.with_certificate({1.0 / (1.0 - std::sin(gamma)), 1.0}), {}};
  }
  throw UsageError("unknown --phi '" + spec + "' (poly:c0,c1,..., frac:delta, sqrt, exp, cayley)");
}

Json ritt_section(const ritt::RittReport& r, Json& doc) {
  report::Series sup{"resolvent_sup", {"beta", "sup"}, {}};
  for (const auto& [b, v] : r.resolvent_sup) sup.rows.push_back({b, v});
  report::Series decay{"decay", {"j", "sup_N", "sup_2N"}, {}};
  for (int j = 0; j < 4; ++j)
    decay.rows.push_back({static_cast<double>(j), r.decay[static_cast<std::size_t>(j)],
                          r.decay_2n[static_cast<std::size_t>(j)]});
  report::add_series(doc, sup);
  report::add_series(doc, decay);
  return report::to_json(r);
}

struct Common {
  std::string seed_text = report::seed_string(kDefaultSeed);
  bool no_timestamp = false;
  std::string out_path;
  std::uint64_t seed() const { return parse_seed(seed_text); }
};

void emit(const std::string& text, const Common& c, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + c.out_path + "'");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical workbench for Ritt operators on finite-dimensional spaces.", "rittcalc"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--seed", common.seed_text, "seed for every randomized routine (decimal or 0x hex)")
      ->capture_default_str();
  app.add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp field (byte-identical reruns)");
  app.add_option("--out,-o", common.out_path, "write the report here instead of stdout");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Ritt diagnostics: power and increment bounds, type, resolvent");
  std::string a_path, a_space = "hilbert";
  int a_n = 512;
  analyze->add_option("matrix", a_path, "matrix file")->required();
  analyze->add_option("--space", a_space, "space model")->capture_default_str();
  analyze->add_option("--N", a_n, "largest power examined (also run at 2N)")->capture_default_str()->check(
      CLI::PositiveNumber);

  // funcalc
  auto* fc = app.add_subcommand("funcalc", "phi(T) by contour quadrature on the boundary of a Stolz domain");
  std::string f_path, f_phi;
  double f_gamma = 1.4, f_beta = 0.0, f_tol = 1e-8;
  int f_mesh = stolz::MeshSpec{}.points_per_panel;
  fc->add_option("matrix", f_path, "matrix file")->required();
  fc->add_option("--phi", f_phi, "poly:c0,c1,... (ascending, complex as a+bi), frac:delta, sqrt, exp or cayley")
      ->required();
  fc->add_option("--gamma", f_gamma, "Stolz angle for the sup norm of phi")->capture_default_str();
  fc->add_option("--beta", f_beta, "contour angle (default: midway between the spectral type and gamma)");
  fc->add_option("--mesh", f_mesh, "Gauss points per panel")->capture_default_str()->check(CLI::PositiveNumber);
  fc->add_option("--tol", f_tol, "mesh-doubling tolerance")->capture_default_str();

  // sqfun
  auto* sf = app.add_subcommand("sqfun", "discrete square function ||x||_{T,m}");
  std::string s_path, s_space = "hilbert", s_x, s_side = "column";
  int s_m = 1, s_nmax = 20000, s_trials = 500;
  double s_tail = 1e-10;
  bool s_constant = false;
  sf->add_option("matrix", s_path, "matrix file")->required();
  sf->add_option("--m", s_m, "order")->capture_default_str()->check(CLI::PositiveNumber);
  sf->add_option("--space", s_space, "space model")->capture_default_str();
  sf->add_option("--tail-tol", s_tail, "stop when the tail bound is below this")->capture_default_str();
  sf->add_option("--n-max", s_nmax, "term cap")->capture_default_str()->check(CLI::PositiveNumber);
  sf->add_option("--x", s_x, "comma separated state vector (default: all ones)");
  sf->add_option("--side", s_side, "column or row (Schatten models)")
      ->capture_default_str()
      ->check(CLI::IsMember({"column", "row"}));
  sf->add_flag("--constant", s_constant, "also estimate the constant sup ||x||_{T,m} / ||x||");
  sf->add_option("--trials", s_trials, "random starts for the constant outside Hilbert space")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  // verify
  auto* vf = app.add_subcommand("verify", "run a verification suite");
  std::string v_suite;
  vf->add_option("suite", v_suite, "identities, contour, similarity, rad, gallery or all")
      ->required()
      ->check(CLI::IsMember({"identities", "contour", "similarity", "rad", "gallery", "all"}));

  // gallery
  auto* gl = app.add_subcommand("gallery", "build and analyze an example operator");
  std::string g_kind;
  int g_n = 0, g_terms = 3, g_cover = 0, g_big_n = 512;
  double g_delta = 0.1, g_p = 0.0, g_kappa = 1000.0;
  gl->add_option("kind", g_kind, "schur, markov, flip, c0 or conditional-basis")
      ->required()
      ->check(CLI::IsMember({"schur", "markov", "flip", "c0", "conditional-basis"}));
  gl->add_option("--n", g_n, "size (schur 4, markov 3, c0 9, conditional-basis 8)")->check(CLI::NonNegativeNumber);
  gl->add_option("--delta", g_delta, "schur: symbol entries in [-1 + delta, 1]")->capture_default_str();
  gl->add_option("--p", g_p, "Schatten exponent (schur 3, markov and flip 2)");
  gl->add_option("--terms", g_terms, "markov: number of unitaries")->capture_default_str();
  gl->add_option("--kappa", g_kappa, "conditional-basis: target condition number")
      ->capture_default_str()
      ->check(CLI::Range(1.0, 1e12));
  gl->add_option("--cover", g_cover, "c0: size of a repulsion covering (0: ternary family)")->capture_default_str();
  gl->add_option("--N", g_big_n, "largest power in the Ritt analysis")->capture_default_str()->check(
      CLI::PositiveNumber);

  // plotdata
  auto* pd = app.add_subcommand("plotdata", "extract a CSV series from a JSON report");
  std::string p_path, p_series;
  pd->add_option("report", p_path, "report file")->required();
  pd->add_option("--series", p_series, "series name (needed when the report has several)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const std::uint64_t seed = common.seed();
    const bool stamp = !common.no_timestamp;

    if (*analyze) {
      const ComplexMatrix t = load_square(a_path);
      const SpaceModel space = parse_space(a_space, t);
      ritt::RittConfig cfg;
      cfg.n_max = a_n;
      cfg.norm_opts.seed = seed;
      Json doc = report::envelope("analyze", seed, stamp);
      doc["config"] = Json{{"matrix", a_path},
                           {"space", a_space},
                           {"N", a_n},
                           {"stability_tol", cfg.stability_tol},
                           {"angle_margin", cfg.angle_margin},
                           {"norm_restarts", cfg.norm_opts.restarts}};
      doc["input"] = report::matrix_json(t);
      const ritt::RittReport r = ritt::ritt_verdict(t, space, cfg);
      doc["report"] = ritt_section(r, doc);
      emit(report::dump(doc), common, out);
      return kOk;
    }

    if (*fc) {
      const ComplexMatrix t = load_square(f_path);
      if (!(f_gamma > 0.0 && f_gamma < M_PI / 2)) throw UsageError("--gamma must lie in (0, pi/2)");
      const PhiSpec phi = parse_phi(f_phi, f_gamma);
      const double beta = f_beta > 0.0 ? f_beta : funcalc::default_beta(t, f_gamma);
      funcalc::ContourOptions opts;
      opts.mesh.points_per_panel = f_mesh;
      opts.tol = f_tol;
      Json doc = report::envelope("funcalc", seed, stamp);
      doc["config"] = Json{{"matrix", f_path}, {"phi", f_phi},     {"gamma", f_gamma}, {"beta", beta},
                           {"mesh", f_mesh},   {"tol", f_tol},     {"max_refinements", opts.max_refinements}};
      doc["input"] = report::matrix_json(t);
      funcalc::CalcReport calc;
      Json oracle;
      if (phi.frac) {
        const funcalc::FracPowerReport fr = funcalc::frac_power(t, *phi.frac, beta, opts);
        calc = fr.calc;
        if (fr.oracle_diff) oracle = Json{{"method", "eigendecomposition"}, {"diff", report::number(*fr.oracle_diff)}};
      } else {
        calc = funcalc::eval_contour(t, phi.fn, beta, opts);
        if (phi.fn.kind() == funcalc::HolomorphicFn::Kind::polynomial) {
          const double diff = numlin::norm2(calc.value - funcalc::eval_poly(t, phi.fn));
          oracle = Json{{"method", "horner"}, {"diff", report::number(diff)}};
        } else if (phi.fn.kind() == funcalc::HolomorphicFn::Kind::rational) {
          const double diff = numlin::norm2(calc.value - funcalc::eval_rational(t, phi.fn));
          oracle = Json{{"method", "rational"}, {"diff", report::number(diff)}};
        }
      }
      Json rep = report::to_json(calc);
      rep["hinf_norm"] = report::number(funcalc::hinf_norm(phi.fn, f_gamma));
      rep["norm"] = report::number(numlin::norm2(calc.value));
      if (!oracle.is_null()) rep["oracle"] = oracle;
      doc["report"] = rep;
      stolz::MeshSpec mesh = opts.mesh;
      for (int k = 0; k < calc.refinements; ++k) mesh = mesh.refined();
      const stolz::StolzContour c = stolz::boundary_contour(calc.beta, mesh);
      report::Series cs{"contour", {"node_re", "node_im", "weight", "tangent_re", "tangent_im"}, {}};
      for (std::size_t k = 0; k < c.size(); ++k)
        cs.rows.push_back({c.nodes[k].real(), c.nodes[k].imag(), c.weights[k], c.tangents[k].real(),
                           c.tangents[k].imag()});
      report::add_series(doc, cs);
      emit(report::dump(doc), common, out);
      return kOk;
    }

    if (*sf) {
      const ComplexMatrix t = load_square(s_path);
      const SpaceModel space = parse_space(s_space, t);
      ComplexVector x = ComplexVector::Ones(t.rows());
      if (!s_x.empty()) {
        const std::vector<Complex> v = parse_list(s_x, "--x");
        if (static_cast<Index>(v.size()) != t.rows())
          throw UsageError("--x has " + std::to_string(v.size()) + " entries, the matrix has " +
                           std::to_string(t.rows()) + " rows");
        x = Eigen::Map<const ComplexVector>(v.data(), t.rows());
      }
      sqfun::SFConfig cfg;
      cfg.m = s_m;
      cfg.n_max = s_nmax;
      cfg.tail_tol = s_tail;
      cfg.side = s_side == "row" ? sqfun::Side::row : sqfun::Side::column;
      Json doc = report::envelope("sqfun", seed, stamp);
      doc["config"] = Json{{"matrix", s_path}, {"space", s_space}, {"m", s_m},         {"tail_tol", s_tail},
                           {"n_max", s_nmax},  {"side", s_side},   {"constant", s_constant}, {"trials", s_trials}};
      doc["input"] = report::matrix_json(t);
      Json xs = Json::array();
      for (Index i = 0; i < x.size(); ++i) xs.push_back(report::complex_json(x(i)));
      doc["x"] = xs;
      const sqfun::SFReport r = sqfun::square_function(t, x, space, cfg);
      Json rep = report::to_json(r);
      rep["x_norm"] = report::number(numlin::vec_norm(x, space));
      if (s_constant) rep["constant"] = report::to_json(sqfun::sf_constant(t, s_m, space, seed, s_trials));
      doc["report"] = rep;
      report::Series ts{"terms", {"k", "term"}, {}};
      for (std::size_t k = 0; k < r.terms.size(); ++k) ts.rows.push_back({static_cast<double>(k + 1), r.terms[k]});
      report::add_series(doc, ts);
      emit(report::dump(doc), common, out);
      return kOk;
    }

    if (*vf) {
      const verify::Suite suite = *verify::parse_suite(v_suite);
      const verify::SuiteReport r = verify::run_suite(suite, seed);
      Json doc = report::envelope("verify", seed, stamp);
      doc["config"] = Json{{"suite", v_suite}, {"criteria", verify::criteria(suite)}};
      doc["report"] = verify::to_json(r, stamp);
      emit(report::dump(doc), common, out);
      return r.passed() ? kOk : kVerifyFailed;
    }

    if (*gl) {
      Json doc = report::envelope("gallery", seed, stamp);
      ritt::RittConfig cfg;
      cfg.n_max = g_big_n;
      cfg.norm_opts.seed = seed;
      auto analyzed = [&](const lab::GalleryInstance& g) {
        Json inst = report::to_json(g);
        inst["analysis"] = ritt_section(ritt::ritt_verdict(g.t, g.space, cfg), doc);
        return inst;
      };
      Json config{{"kind", g_kind}, {"N", g_big_n}};
      if (g_kind == "schur") {
        const int n = g_n > 0 ? g_n : 4;
        const double p = g_p > 0 ? g_p : 3.0;
        config["n"] = n, config["delta"] = g_delta, config["p"] = p;
        doc["config"] = config;
        doc["instance"] = analyzed(lab::gallery_schur(lab::schur_cosine(n, g_delta, seed), p));
      } else if (g_kind == "markov") {
        const int n = g_n > 0 ? g_n : 3;
        const double p = g_p > 0 ? g_p : 2.0;
        config["n"] = n, config["terms"] = g_terms, config["p"] = p;
        doc["config"] = config;
        doc["instance"] = analyzed(lab::gallery_markov(n, seed, g_terms, p));
      } else if (g_kind == "flip") {
        const double p = g_p > 0 ? g_p : 2.0;
        config["p"] = p;
        doc["config"] = config;
        doc["instance"] = analyzed(lab::gallery_flip(p));
      } else if (g_kind == "c0") {
        const int n = g_n > 0 ? g_n : 9;
        config["n"] = n, config["cover"] = g_cover;
        doc["config"] = config;
        doc["witness"] = report::to_json(lab::c0_growth_witness(n, g_cover, seed));
        report::Series rs{"ratio_vs_n", {"n", "ratio", "sqrt_n_over_2"}, {}};
        for (int k = 1; k <= n; ++k) {
          const lab::C0Witness w = lab::c0_growth_witness(k, g_cover, seed);
          rs.rows.push_back({static_cast<double>(k), w.ratio, std::sqrt(static_cast<double>(k)) / 2.0});
        }
        doc["instance"] = analyzed(lab::gallery_c0(n));
        report::add_series(doc, rs);
      } else {
        const int n = g_n > 0 ? g_n : 8;
        config["n"] = n, config["kappa"] = g_kappa;
        doc["config"] = config;
        const lab::ConditionalBasis cb = lab::conditional_basis_demo(n, g_kappa, seed);
        Json inst = report::to_json(cb);
        inst["analysis"] = ritt_section(ritt::ritt_verdict(cb.t, SpaceModel::hilbert(n), cfg), doc);
        doc["instance"] = inst;
        report::Series ks{"constants_vs_kappa", {"kappa", "basis_condition", "sf_constant", "equiv_ratio"}, {}};
        // Half decades from 1, then kappa itself.
        std::vector<double> grid;
        for (int i = 0; std::pow(10.0, i / 2.0) < g_kappa * (1 - 1e-12); ++i) grid.push_back(std::pow(10.0, i / 2.0));
        grid.push_back(g_kappa);
        for (double k : grid) {
          const lab::ConditionalBasis c = lab::conditional_basis_demo(n, k, seed);
          ks.rows.push_back({k, c.basis_condition, c.sf_constant, c.equiv_ratio});
        }
        report::add_series(doc, ks);
      }
      emit(report::dump(doc), common, out);
      return kOk;
    }

    if (*pd) {
      std::ifstream in(p_path, std::ios::binary);
      if (!in) throw IngestError("cannot open '" + p_path + "'");
      Json doc;
      try {
        doc = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw IngestError("'" + p_path + "' is not JSON: " + e.what());
      }
      std::string csv;
      try {
        csv = report::to_csv(doc, p_series);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      emit(csv, common, out);
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "rittcalc: " << e.what() << "\n";
    return kUsage;
  } catch (const IngestError& e) {
    err << "rittcalc: " << e.what() << "\n";
    return kIngest;
  } catch (const std::exception& e) {
    err << "rittcalc: " << e.what() << "\n";
    return kComputation;
  }
  return kUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace rittcalc::cli
