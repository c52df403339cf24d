#pragma once

// JSON file formats. Complex entries are [re, im] pairs, matrices row-major;
// nlohmann emits shortest-round-trip decimals and sorted keys, so writing is
// deterministic and read/write round trips are value-exact.

#include <optional>
#include <string>

#include <json.hpp>

#include "vesselkit/grid.hpp"
#include "vesselkit/report.hpp"
#include "vesselkit/series.hpp"
#include "vesselkit/vessel.hpp"

namespace vesselkit {
namespace io {

using Json = nlohmann::json;

struct ProblemFile {
  int d = 0;
  int dim_h = 0;
  std::vector<Matrix> A;
  std::optional<Vessel> vessel;
  std::optional<GridSpec> grid;
  std::optional<Tolerances> tol;
};

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json problem_to_json(const ProblemFile& p);
ProblemFile problem_from_json(const Json& j);

Json vessel_to_json(const Vessel& v);
Vessel vessel_from_json(const Json& j, int dim_h, int d,
                        const std::vector<Matrix>& a);

Json signal_to_json(const SampledSignal& f);
SampledSignal signal_from_json(const Json& j);

// Series table keyed by "n1,n2,...,nd" strings.
Json series_to_json(const PowerSeriesSolution& sol);

Json report_entries_to_json(const ConditionReport& report);

// FNV-1a over the raw bytes, hex string.
std::string digest_bytes(const std::string& bytes);

Json read_json_file(const std::string& path);       // throws ParseError
void write_json_file(const std::string& path, const Json& j);
std::string read_file_bytes(const std::string& path);

}  // namespace io
}  // namespace vesselkit
