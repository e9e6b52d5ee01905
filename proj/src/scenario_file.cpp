#include "qpath/scenario_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qpath/models.hpp"

namespace qpath {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  raise(Errc::parse_error, where + ": " + what);
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  return j.get<double>();
}

complexd get_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    bad(where, "expected a [re, im] pair");
  return complexd(get_number(j[0], where + "[0]"),
                  get_number(j[1], where + "[1]"));
}

CMatrix get_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) bad(where, "expected a non-empty array");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  CMatrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j[i];
    std::string rw = where + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.empty()) bad(rw, "expected a non-empty row");
    if (i == 0) {
      cols = row.size();
      m.resize(rows, cols);
    } else if (row.size() != cols) {
      bad(rw, "row length differs from the first row");
    }
    for (std::size_t k = 0; k < cols; ++k)
      m(i, k) = get_complex(row[k], rw + "[" + std::to_string(k) + "]");
  }
  return m;
}

std::vector<int> get_dims(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    bad(where, "expected a non-empty array of dimensions");
  std::vector<int> dims;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    std::string ew = where + "[" + std::to_string(i) + "]";
    if (!e.is_number_integer() || e.get<std::int64_t>() < 1)
      bad(ew, "expected a positive integer");
    dims.push_back(static_cast<int>(e.get<std::int64_t>()));
  }
  return dims;
}

/// Unitaries in the file are cumulative (initial time to time n) unless
/// the options block sets "incremental_unitaries": true, in which case
/// each entry is the step from the previous time and gets composed here.
bool get_incremental(const json& root) {
  if (!root.contains("options") || !root["options"].is_object()) return false;
  const json& o = root["options"];
  if (!o.contains("incremental_unitaries")) return false;
  if (!o["incremental_unitaries"].is_boolean())
    bad("options.incremental_unitaries", "expected a boolean");
  return o["incremental_unitaries"].get<bool>();
}

Tolerances get_options(const json& root) {
  Tolerances tol;
  if (!root.contains("options")) return tol;
  const json& o = root["options"];
  if (!o.is_object()) bad("options", "expected an object");
  auto num = [&](const char* key, double& out) {
    if (o.contains(key)) out = get_number(o[key], std::string("options.") + key);
  };
  num("tol_herm", tol.herm);
  num("tol_trace", tol.trace);
  num("tol_psd", tol.psd);
  num("tol_unitary", tol.unitary);
  num("tol_orth", tol.orth);
  num("degeneracy_tol", tol.degeneracy);
  num("pop_cutoff", tol.pop_cutoff);
  num("bin_tol", tol.bin_tol);
  auto integer = [&](const char* key, std::int64_t& out) {
    if (!o.contains(key)) return;
    if (!o[key].is_number_integer() || o[key].get<std::int64_t>() < 1)
      bad(std::string("options.") + key, "expected a positive integer");
    out = o[key].get<std::int64_t>();
  };
  integer("dim_cap", tol.dim_cap);
  integer("enumeration_cap", tol.enumeration_cap);
  return tol;
}

CMatrix build_named_unitary(const std::string& name, const json* spec,
                            int dim, const std::vector<int>& dims,
                            const std::string& where) {
  if (name == "identity") return CMatrix::Identity(dim, dim);
  if (name == "partial_swap") {
    if (dims.size() != 2 || dims[0] != dims[1])
      bad(where, "partial_swap needs two equal subsystem dimensions");
    const int d0 = dims[0];
    CMatrix s = CMatrix::Zero(dim, dim);
    for (int i = 0; i < d0; ++i)
      for (int j = 0; j < d0; ++j) s(i * d0 + j, j * d0 + i) = 1.0;
    return (CMatrix::Identity(dim, dim) + complexd(0, 1) * s) /
           std::sqrt(2.0);
  }
  if (name == "adiabatic_phase" || name == "phase") {
    if (dim != 2) bad(where, name + " is defined for dimension 2");
    double phi = 0.0;
    if (spec && spec->contains("phi"))
      phi = get_number((*spec)["phi"], where + ".phi");
    CMatrix u = CMatrix::Zero(2, 2);
    u(0, 0) = std::exp(complexd(0, -phi));
    u(1, 1) = std::exp(complexd(0, phi));
    return u;
  }
  bad(where, "unknown unitary name '" + name + "'");
}

CMatrix parse_unitary(const json& j, int dim, const std::vector<int>& dims,
                      const std::string& where) {
  if (j.is_string())
    return build_named_unitary(j.get<std::string>(), nullptr, dim, dims,
                               where);
  if (j.is_object()) {
    if (j.contains("matrix")) return get_matrix(j["matrix"], where + ".matrix");
    if (j.contains("name"))
      return build_named_unitary(j["name"].get<std::string>(), &j, dim,
                                 dims, where);
    bad(where, "expected 'name' or 'matrix'");
  }
  bad(where, "expected a string or an object");
}

CMatrix parse_basis(const json& j, int dim, const std::vector<int>& dims,
                    const std::string& where) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "computational") return CMatrix::Identity(dim, dim);
    if (name == "sigma_z_product") {
      for (int d : dims)
        if (d != 2) bad(where, "sigma_z_product needs qubit subsystems");
      return CMatrix::Identity(dim, dim);
    }
    bad(where, "unknown basis name '" + name + "'");
  }
  if (j.is_object() && j.contains("vectors")) {
    // Rows of the array are the basis vectors; transpose to columns.
    CMatrix rows = get_matrix(j["vectors"], where + ".vectors");
    return rows.transpose();
  }
  bad(where, "expected a basis name or {\"vectors\": ...}");
}

struct ParsedTimes {
  std::vector<std::string> labels;
  std::vector<CMatrix> unitaries;
  std::vector<CMatrix> bases;
};

ParsedTimes parse_times(const json& j, int dim, const std::vector<int>& dims,
                        bool incremental) {
  if (!j.is_array() || j.empty())
    bad("times", "expected a non-empty array");
  ParsedTimes out;
  for (std::size_t n = 0; n < j.size(); ++n) {
    const json& e = j[n];
    std::string ew = "times[" + std::to_string(n) + "]";
    if (!e.is_object()) bad(ew, "expected an object");
    std::string label = "t" + std::to_string(n);
    if (e.contains("label")) {
      if (!e["label"].is_string()) bad(ew + ".label", "expected a string");
      label = e["label"].get<std::string>();
    }
    CMatrix u;
    if (e.contains("unitary")) {
      u = parse_unitary(e["unitary"], dim, dims, ew + ".unitary");
    } else if (n == 0) {
      u = CMatrix::Identity(dim, dim);  // time 0 defaults to no evolution
    } else {
      bad(ew, "missing 'unitary' (only time 0 defaults to identity)");
    }
    CMatrix b = e.contains("basis")
                    ? parse_basis(e["basis"], dim, dims, ew + ".basis")
                    : CMatrix::Identity(dim, dim);
    out.labels.push_back(std::move(label));
    out.unitaries.push_back(std::move(u));
    out.bases.push_back(std::move(b));
  }
  if (incremental)
    for (std::size_t n = 1; n < out.unitaries.size(); ++n)
      out.unitaries[n] = out.unitaries[n] * out.unitaries[n - 1];
  return out;
}

double param_or(const json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  return get_number(p[key], std::string("rho.params.") + key);
}

}  // namespace

Scenario parse_scenario(const std::string& text,
                        const std::string& source_name,
                        const FileOverrides& ov) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    raise(Errc::parse_error, source_name + " line " + std::to_string(line) +
                                 ": " + e.what());
  }
  try {
    if (!root.is_object()) bad("document", "expected a JSON object");
    if (root.contains("version") &&
        (!root["version"].is_number_integer() ||
         root["version"].get<std::int64_t>() != 1))
      bad("version", "unsupported version (expected 1)");
    if (!root.contains("rho")) bad("document", "missing 'rho'");
    const json& rho_j = root["rho"];
    if (!rho_j.is_object()) bad("rho", "expected an object");

    Tolerances tol = get_options(root);
    if (ov.tol) {
      tol.herm = tol.trace = tol.psd = tol.unitary = tol.orth = *ov.tol;
    }
    if (ov.dim_cap) tol.dim_cap = *ov.dim_cap;

    if (rho_j.contains("model")) {
      if (!rho_j["model"].is_string()) bad("rho.model", "expected a string");
      std::string name = rho_j["model"].get<std::string>();
      json params = rho_j.contains("params") ? rho_j["params"]
                                             : json::object();
      if (!params.is_object()) bad("rho.params", "expected an object");
      Scenario sc;
      if (name == "coherent_qubit") {
        CoherentQubitParams prm;
        prm.beta = param_or(params, "beta", prm.beta);
        prm.g0 = param_or(params, "g0", prm.g0);
        prm.g1 = param_or(params, "g1", prm.g1);
        prm.a = param_or(params, "a", prm.a);
        prm.phase = param_or(params, "phase", prm.phase);
        sc = coherent_qubit_scenario(prm, tol);
      } else if (name == "qubit_pair") {
        QubitPairParams prm;
        prm.beta_a = param_or(params, "beta_a", prm.beta_a);
        prm.beta_b = param_or(params, "beta_b", prm.beta_b);
        prm.a = param_or(params, "a", prm.a);
        sc = pair_scenario(prm, tol);
      } else {
        bad("rho.model", "unknown model '" + name + "'");
      }
      if (root.contains("times")) {
        // Keep the model's state, replace the time points.
        ParsedTimes pt = parse_times(root["times"], sc.dim, sc.dims,
                                     get_incremental(root));
        std::optional<ModelInfo> info = sc.model;
        Scenario redone =
            Scenario::make(sc.dims, sc.rho.op, std::move(pt.labels),
                           std::move(pt.unitaries), std::move(pt.bases), tol);
        redone.model = std::move(info);
        return redone;
      }
      return sc;
    }

    if (!rho_j.contains("matrix"))
      bad("rho", "expected 'matrix' or 'model'");
    CMatrix rho = get_matrix(rho_j["matrix"], "rho.matrix");
    std::vector<int> dims =
        root.contains("dims")
            ? get_dims(root["dims"], "dims")
            : std::vector<int>{static_cast<int>(rho.rows())};
    if (!root.contains("times")) bad("document", "missing 'times'");
    std::int64_t total = 1;
    for (int d : dims) {
      if (total > tol.dim_cap / d)
        raise(Errc::dimension_overflow,
              "dims multiply past cap " + std::to_string(tol.dim_cap));
      total *= d;
    }
    ParsedTimes pt = parse_times(root["times"], static_cast<int>(total),
                                 dims, get_incremental(root));
    return Scenario::make(std::move(dims), rho, std::move(pt.labels),
                          std::move(pt.unitaries), std::move(pt.bases), tol);
  } catch (const json::exception& e) {
    raise(Errc::parse_error, source_name + ": " + e.what());
  }
}

Scenario load_scenario_file(const std::string& path,
                            const FileOverrides& ov) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::parse_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path, ov);
}

}  // namespace qpath
