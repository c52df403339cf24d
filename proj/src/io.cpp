#include "vesselkit/io.hpp"

#include <fstream>
#include <sstream>

namespace vesselkit {
namespace io {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array())
    throw Error(ErrorCode::ParseError, "matrix: expected array of rows");
  const auto rows = j.size();
  if (rows == 0) return Matrix(0, 0);
  const auto cols = j.at(0).size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j.at(r);
    if (row.size() != cols)
      throw Error(ErrorCode::ParseError, "matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& cell = row.at(c);
      if (!cell.is_array() || cell.size() != 2)
        throw Error(ErrorCode::ParseError,
                    "matrix: entries must be [re, im] pairs");
      m(r, c) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return m;
}

Json vessel_to_json(const Vessel& v) {
  Json j;
  j["dim_e"] = v.dim_e;
  j["Phi"] = matrix_to_json(v.Phi);
  Json sig = Json::array();
  for (const auto& s : v.sigma) sig.push_back(matrix_to_json(s));
  j["sigma"] = std::move(sig);
  Json gam = Json::array(), gam_star = Json::array();
  for (int a = 0; a < v.d; ++a)
    for (int b = a + 1; b < v.d; ++b) {
      gam.push_back(Json{{"j", a + 1},
                         {"k", b + 1},
                         {"mat", matrix_to_json(v.gamma.stored(a, b))}});
      gam_star.push_back(
          Json{{"j", a + 1},
               {"k", b + 1},
               {"mat", matrix_to_json(v.gamma_star.stored(a, b))}});
    }
  j["gamma"] = std::move(gam);
  j["gamma_star"] = std::move(gam_star);
  if (v.degenerate_signal_space) j["degenerate_signal_space"] = true;
  return j;
}

Vessel vessel_from_json(const Json& j, int dim_h, int d,
                        const std::vector<Matrix>& a) {
  Vessel v;
  v.d = d;
  v.dim_h = dim_h;
  v.A = a;
  v.dim_e = j.at("dim_e").get<int>();
  v.Phi = matrix_from_json(j.at("Phi"));
  for (const auto& s : j.at("sigma")) v.sigma.push_back(matrix_from_json(s));
  v.gamma = GammaTable(d, v.dim_e);
  v.gamma_star = GammaTable(d, v.dim_e);
  auto load_gamma = [&](const Json& arr, GammaTable& table) {
    for (const auto& entry : arr) {
      int jj = entry.at("j").get<int>() - 1;
      int kk = entry.at("k").get<int>() - 1;
      if (jj < 0 || kk <= jj || kk >= d)
        throw Error(ErrorCode::ParseError, "gamma: indices must satisfy j < k");
      table.set(jj, kk, matrix_from_json(entry.at("mat")));
    }
  };
  load_gamma(j.at("gamma"), v.gamma);
  load_gamma(j.at("gamma_star"), v.gamma_star);
  v.degenerate_signal_space = j.value("degenerate_signal_space", false);
  v.require_shapes();
  return v;
}

Json problem_to_json(const ProblemFile& p) {
  Json j;
  j["schema"] = "vesselkit-problem/1";
  j["d"] = p.d;
  j["dim_h"] = p.dim_h;
  Json ops = Json::array();
  for (const auto& a : p.A) ops.push_back(matrix_to_json(a));
  j["A"] = std::move(ops);
  if (p.vessel) j["vessel"] = vessel_to_json(*p.vessel);
  if (p.grid) j["grid"] = Json{{"N", p.grid->n}, {"L", p.grid->half_width}};
  if (p.tol)
    j["tol"] = Json{{"identity", p.tol->identity},
                    {"psd", p.tol->psd},
                    {"rank", p.tol->rank},
                    {"commute", p.tol->commute}};
  return j;
}

ProblemFile problem_from_json(const Json& j) {
  ProblemFile p;
  try {
    p.d = j.at("d").get<int>();
    p.dim_h = j.at("dim_h").get<int>();
    for (const auto& a : j.at("A")) p.A.push_back(matrix_from_json(a));
    if (static_cast<int>(p.A.size()) != p.d)
      throw Error(ErrorCode::ParseError, "problem: A count != d");
    for (const auto& a : p.A)
      if (a.rows() != p.dim_h || a.cols() != p.dim_h)
        throw Error(ErrorCode::ParseError, "problem: A shape != dim_h");
    if (j.contains("vessel"))
      p.vessel = vessel_from_json(j.at("vessel"), p.dim_h, p.d, p.A);
    if (j.contains("grid"))
      p.grid = GridSpec(j.at("grid").at("N").get<int>(),
                        j.at("grid").at("L").get<double>());
    if (j.contains("tol")) {
      Tolerances t;
      t.identity = j.at("tol").value("identity", t.identity);
      t.psd = j.at("tol").value("psd", t.psd);
      t.rank = j.at("tol").value("rank", t.rank);
      t.commute = j.at("tol").value("commute", t.commute);
      p.tol = t;
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("problem file: ") + e.what());
  }
  return p;
}

Json signal_to_json(const SampledSignal& f) {
  Json j;
  j["schema"] = "vesselkit-signal/1";
  j["grid"] = Json{{"N", f.grid.n}, {"L", f.grid.half_width}};
  Json values = Json::array();
  for (const auto& v : f.values) {
    Json node = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
      node.push_back(Json::array({v(i).real(), v(i).imag()}));
    values.push_back(std::move(node));
  }
  j["values"] = std::move(values);
  return j;
}

SampledSignal signal_from_json(const Json& j) {
  try {
    GridSpec grid(j.at("grid").at("N").get<int>(),
                  j.at("grid").at("L").get<double>());
    const Json& values = j.at("values");
    if (static_cast<int>(values.size()) != grid.n)
      throw Error(ErrorCode::ParseError, "signal: node count != N");
    int dim = values.empty() ? 0 : static_cast<int>(values.at(0).size());
    SampledSignal f(grid, dim);
    for (int k = 0; k < grid.n; ++k) {
      const Json& node = values.at(k);
      for (int i = 0; i < dim; ++i)
        f.values[k](i) = Complex(node.at(i).at(0).get<double>(),
                                 node.at(i).at(1).get<double>());
    }
    return f;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("signal file: ") + e.what());
  }
}

Json series_to_json(const PowerSeriesSolution& sol) {
  Json j;
  j["schema"] = "vesselkit-series/1";
  j["d"] = sol.d;
  j["degree"] = sol.degree;
  j["dim_e"] = sol.dim_e;
  Json table = Json::object();
  for (int r = 0; r < sol.support.size(); ++r) {
    const auto& n = sol.support.at(r);
    std::ostringstream key;
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (i) key << ",";
      key << n[i];
    }
    Json coeff = Json::array();
    for (Eigen::Index i = 0; i < sol.coefficients[r].size(); ++i)
      coeff.push_back(Json::array({sol.coefficients[r](i).real(),
                                   sol.coefficients[r](i).imag()}));
    table[key.str()] = std::move(coeff);
  }
  j["coefficients"] = std::move(table);
  return j;
}

Json report_entries_to_json(const ConditionReport& report) {
  Json checks = Json::array();
  for (const auto& e : report.entries()) {
    Json entry{{"name", e.name},
               {"residual", e.residual},
               {"tolerance", e.tolerance},
               {"pass", e.pass}};
    if (e.redundant) entry["redundant"] = true;
    if (!e.note.empty()) entry["note"] = e.note;
    checks.push_back(std::move(entry));
  }
  return checks;
}

std::string digest_bytes(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << "fnv1a:" << std::hex << hash;
  return os.str();
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json read_json_file(const std::string& path) {
  std::string bytes = read_file_bytes(path);
  Json j = Json::parse(bytes, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::ParseError, "malformed JSON in " + path);
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace io
}  // namespace vesselkit
