#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rittcalc/cli.hpp"
#include "rittcalc/funcalc.hpp"
#include "rittcalc/report.hpp"

using namespace rittcalc;
using report::Json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "rittcalc_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

const std::string kDiag = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 0.5\n2 2 0.9\n";
const std::string kTri = R"({"rows": 2, "cols": 2, "entries": [[0.5, 0], [0.3, 0], [0, 0], [0.2, 0]]})";

ComplexMatrix matrix_of(const Json& j) {
  ComplexMatrix m(j["rows"].get<Index>(), j["cols"].get<Index>());
  for (Index k = 0; k < m.size(); ++k) {
    const Json& e = j["entries"][static_cast<std::size_t>(k)];
    m(k / m.cols(), k % m.cols()) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

}  // namespace

TEST_CASE("analyze on diag(0.5, 0.9)") {
  const Result r = run({"analyze", write("diag.mtx", kDiag), "--no-timestamp"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["schema"] == "ritt-calc/1");
  CHECK(j["kind"] == "analyze");
  CHECK(j["seed"] == "0xC0FFEE");
  CHECK_FALSE(j.contains("timestamp"));
  CHECK(j["config"]["N"] == 512);
  CHECK(j["report"]["verdict"] == "ritt");
  CHECK(j["report"]["type_alpha"] == Json(0.0));
  CHECK(j["report"]["power_bound"] == Json(1.0));
}

TEST_CASE("funcalc z - z^2 on the triangular example") {
  const Result r = run({"funcalc", write("tri.json", kTri), "--phi", "poly:0,1,-1", "--no-timestamp"});
  REQUIRE(r.code == 0);
  const Json rep = r.json()["report"];
  ComplexMatrix t(2, 2);
  t << 0.5, 0.3, 0.0, 0.2;
  const ComplexMatrix exact = t - t * t;
  CHECK(numlin::norm2(matrix_of(rep["value"]) - exact) <= rep["error_estimate"].get<double>());
  CHECK(rep["oracle"]["method"] == "horner");
  CHECK(rep["oracle"]["diff"].get<double>() <= rep["error_estimate"].get<double>());
  CHECK(rep["converged"] == true);

  // Complex coefficients: i z - i z^2.
  const Result c = run({"funcalc", write("tri.json", kTri), "--phi", "poly:0,i,-1i", "--no-timestamp"});
  REQUIRE(c.code == 0);
  CHECK(numlin::norm2(matrix_of(c.json()["report"]["value"]) - Complex(0.0, 1.0) * exact) <= 1e-8);

  const Result f = run({"funcalc", write("diag.mtx", kDiag), "--phi", "frac:0.5", "--no-timestamp"});
  REQUIRE(f.code == 0);
  const ComplexMatrix h = matrix_of(f.json()["report"]["value"]);
  CHECK(std::abs(h(0, 0) - std::sqrt(0.5)) <= 1e-8);
  CHECK(std::abs(h(1, 1) - std::sqrt(0.1)) <= 1e-8);
  CHECK(f.json()["report"]["oracle"]["method"] == "eigendecomposition");

  const Result csv = run({"funcalc", write("tri.json", kTri), "--phi", "cayley", "-o",
                          (scratch() / "cayley.json").string()});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.empty());
  const Result pd = run({"plotdata", (scratch() / "cayley.json").string()});
  REQUIRE(pd.code == 0);
  CHECK(pd.out.rfind("node_re,node_im,weight,tangent_re,tangent_im\n", 0) == 0);
}

TEST_CASE("sqfun reports, constants and the terms series") {
  const std::string half = write("half.json", R"({"rows": 2, "cols": 2, "entries": [0.5, 0, 0, 0.5]})");
  const Result r = run({"sqfun", half, "--constant", "--x", "1,0", "--no-timestamp", "-o",
                        (scratch() / "sq.json").string()});
  REQUIRE(r.code == 0);
  std::ifstream in(scratch() / "sq.json");
  const Json j = Json::parse(in);
  CHECK(std::abs(j["report"]["value"].get<double>() - 2.0 / 3.0) <= 1e-10);
  CHECK(std::abs(j["report"]["constant"]["value"].get<double>() - 2.0 / 3.0) <= 1e-10);
  CHECK(j["report"]["constant"]["exact"] == true);
  const Result pd = run({"plotdata", (scratch() / "sq.json").string()});
  REQUIRE(pd.code == 0);
  std::istringstream lines(pd.out);
  std::string line;
  int count = 0;
  std::getline(lines, line);
  CHECK(line == "k,term");
  std::getline(lines, line);
  CHECK(line == "1.0,0.5");
  for (++count; std::getline(lines, line);) ++count;
  CHECK(count == j["report"]["n_used"].get<int>());
}

TEST_CASE("verify identities passes") {
  const Result r = run({"verify", "identities", "--no-timestamp"});
  CHECK(r.code == 0);
  const Json j = r.json();
  CHECK(j["report"]["passed"] == true);
  CHECK(j["report"]["criteria"][0]["id"] == 1);
  CHECK_FALSE(j["report"]["criteria"][0].contains("seconds"));
}

TEST_CASE("determinism and seeds") {
  const std::string m = write("diag.mtx", kDiag);
  CHECK(run({"verify", "rad", "--no-timestamp"}).out == run({"verify", "rad", "--no-timestamp"}).out);
  CHECK(run({"gallery", "markov", "--N", "64", "--no-timestamp"}).out ==
        run({"gallery", "markov", "--N", "64", "--no-timestamp"}).out);
  CHECK(run({"sqfun", m, "--space", "lp:3", "--constant", "--trials", "20", "--no-timestamp"}).out ==
        run({"sqfun", m, "--space", "lp:3", "--constant", "--trials", "20", "--no-timestamp"}).out);
  const Json stamped = run({"analyze", m, "--N", "16"}).json();
  CHECK(stamped.contains("timestamp"));
  CHECK(run({"--seed", "42", "analyze", m, "--N", "16"}).json()["seed"] == "0x2A");
  CHECK(run({"analyze", m, "--N", "16", "--seed", "0x2a"}).json()["seed"] == "0x2A");
  CHECK(run({"gallery", "markov", "--seed", "1", "--N", "16", "--no-timestamp"}).out !=
        run({"gallery", "markov", "--seed", "2", "--N", "16", "--no-timestamp"}).out);
}

TEST_CASE("gallery instances") {
  const Json flip = run({"gallery", "flip", "--N", "64", "--no-timestamp"}).json();
  CHECK(flip["instance"]["flags"][0] == "minus-one-eigenvalue");
  CHECK(flip["instance"]["analysis"]["verdict"] == "not-ritt");
  const Json mk = run({"gallery", "markov", "--n", "2", "--N", "64", "--no-timestamp"}).json();
  CHECK(mk["instance"]["checks"]["unital"].get<double>() <= 1e-12);
  const Json c0 = run({"gallery", "c0", "--n", "4", "--N", "64", "--no-timestamp"}).json();
  CHECK(c0["witness"]["ratio"] == Json(2.0));
  CHECK(c0["series"]["ratio_vs_n"]["rows"].size() == 4);
  const Json sc = run({"gallery", "schur", "--n", "2", "--N", "64", "--no-timestamp"}).json();
  CHECK(sc["instance"]["space"]["model"] == "schatten");
  CHECK(sc["instance"]["analysis"]["verdict"] == "ritt");
  const Json cb = run({"gallery", "conditional-basis", "--kappa", "100", "--N", "64", "--no-timestamp"}).json();
  CHECK(cb["series"]["constants_vs_kappa"]["rows"].size() == 5);
  CHECK(cb["instance"]["equiv_ratio"].get<double>() > 100.0);
}

TEST_CASE("exit codes") {
  const std::string m = write("diag.mtx", kDiag);
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"analyze"}).code == 2);
  CHECK(run({"analyze", m, "--space", "banach"}).code == 2);
  CHECK(run({"analyze", m, "--space", "schatten:2"}).code == 2);
  CHECK(run({"analyze", m, "--N", "0"}).code == 2);
  CHECK(run({"funcalc", m, "--phi", "weird"}).code == 2);
  CHECK(run({"funcalc", m, "--phi", "poly:1,x"}).code == 2);
  CHECK(run({"sqfun", m, "--x", "1,2,3"}).code == 2);
  CHECK(run({"verify", "everything"}).code == 2);
  CHECK(run({"gallery", "conditional-basis", "--kappa", "0.5"}).code == 2);
  CHECK(run({"analyze", m, "--seed", "seven"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"plotdata", write("diag.json", run({"analyze", m, "--N", "8"}).out)}).code == 2);

  CHECK(run({"analyze", (scratch() / "missing.mtx").string()}).code == 3);
  CHECK(run({"analyze", write("rect.json", R"({"rows": 1, "cols": 2, "entries": [1, 2]})")}).code == 3);
  CHECK(run({"analyze", write("bad.json", "{\"rows\": 2")}).code == 3);
  CHECK(run({"plotdata", write("bad.txt", "not json")}).code == 3);

  // Jordan block at 1: the square function diverges.
  const Result j = run({"sqfun", write("jordan.json", R"({"rows": 2, "cols": 2, "entries": [1, 1, 0, 1]})")});
  CHECK(j.code == 4);
  CHECK_FALSE(j.err.empty());
}
