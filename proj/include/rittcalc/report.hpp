#pragma once

// JSON reports (schema "ritt-calc/1") and CSV extraction of their series.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rittcalc/funcalc.hpp"
#include "rittcalc/lab.hpp"
#include "rittcalc/ritt.hpp"
#include "rittcalc/sqfun.hpp"

namespace rittcalc::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "ritt-calc/1";

// Finite values as numbers; inf, -inf and nan as strings.
Json number(double v);
// [re, im]
Json complex_json(Complex z);
// {rows, cols, entries: [[re, im], ...]} in row-major order, the same layout
// the JSON matrix reader accepts.
Json matrix_json(const ComplexMatrix& m);
Json space_json(const numlin::SpaceModel& space);

// A table for plotting: named columns and numeric rows.
struct Series {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Json series_json(const Series& s);

// {schema, kind, seed[, timestamp]}; the rest of the report is appended.
Json envelope(const std::string& kind, std::uint64_t seed, bool timestamp);
// Seed as a hex string, 0x-prefixed.
std::string seed_string(std::uint64_t seed);

Json to_json(const ritt::RittReport& r);
Json to_json(const funcalc::CalcReport& r);
Json to_json(const sqfun::SFReport& r);
Json to_json(const sqfun::SFConstant& c);
Json to_json(const sqfun::RadEstimate& r);
Json to_json(const lab::SimilarityReport& r);
Json to_json(const lab::GalleryInstance& g);
Json to_json(const lab::C0Witness& w);
Json to_json(const lab::ConditionalBasis& c);

// Attach series under report["series"][name].
void add_series(Json& report, const Series& s);

// CSV of one series. An empty name picks the only series, and fails with the
// list of names when there are several.
std::string to_csv(const Json& report, const std::string& name = "");

// Two-space indented, arrays of scalars on one line, "series" last, trailing
// newline.
std::string dump(const Json& j);

}  // namespace rittcalc::report
