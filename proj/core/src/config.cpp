// SPDX-License-Identifier: Apache-2.0
#include "qpmax/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>

namespace qpmax {

using nlohmann::json;

std::string command_name(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::CheckMaterial: return "check-material";
    case Command::ScanK: return "scan-k";
    case Command::Audit: return "audit";
    case Command::OracleCompare: return "oracle-compare";
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  if (name == "solve") return Command::Solve;
  if (name == "check-material") return Command::CheckMaterial;
  if (name == "scan-k") return Command::ScanK;
  if (name == "audit") return Command::Audit;
  if (name == "oracle-compare") return Command::OracleCompare;
  throw std::runtime_error("unknown command: " + name);
}

MaterialProfile MaterialConfig::make() const {
  if (family == "uniform") return uniform_profile(h);
  if (family == "bump") return bump_profile(lambda, h1, h2, h);
  if (family == "smoothed_bump") return smoothed_bump_profile(lambda, h1, h2, h);
  if (family == "slab") return slab_profile(eps_r, t, h);
  if (family == "graded_linear") return graded_linear_profile(a0, zeta, h);
  if (family == "trapping_slab") return trapping_slab_profile(eps_r, z0, z1, h);
  if (family == "grid") return load_grid_profile(grid_path);
  throw std::runtime_error("unknown material family: " + family);
}

namespace {

[[noreturn]] void fail_at(const std::string& pointer, const std::string& what) {
  throw std::runtime_error("config error at " + pointer + ": " + what);
}

double need_positive(const json& j, const std::string& ptr, double v) {
  (void)j;
  if (!(v > 0.0)) fail_at(ptr, "must be positive");
  return v;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

Vec3d get_vec3(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 3) fail_at(ptr, "expected an array of 3 numbers");
  return Vec3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

} // namespace

RunConfig load_config(const std::string& path, Command command) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }

  RunConfig cfg;
  cfg.command = command;

  if (doc.contains("schema_version") && doc["schema_version"].get<int>() != schema_version)
    fail_at("/schema_version", "unsupported schema version");

  if (doc.contains("source")) {
    const json& s = doc["source"];
    if (s.contains("d")) cfg.source.d = get_vec3(s["d"], "/source/d");
    if (s.contains("p")) cfg.source.p = get_vec3(s["p"], "/source/p");
    cfg.source.omega = get_or(s, "omega", cfg.source.omega);
    cfg.source.eps0 = get_or(s, "eps0", cfg.source.eps0);
    cfg.source.mu0 = get_or(s, "mu0", cfg.source.mu0);
    need_positive(s, "/source/omega", cfg.source.omega);
    need_positive(s, "/source/eps0", cfg.source.eps0);
    need_positive(s, "/source/mu0", cfg.source.mu0);
    if (!(cfg.source.d.z() < 0.0)) fail_at("/source/d", "third component must be negative");
    // Full physical validation (dispersion relation, orthogonality) happens
    // in make_source; surface it here so bad configs fail before any compute.
    try {
      cfg.source.make();
    } catch (const std::exception& e) {
      fail_at("/source", e.what());
    }
  }

  if (doc.contains("material")) {
    const json& mj = doc["material"];
    cfg.material.family = get_or<std::string>(mj, "family", cfg.material.family);
    cfg.material.h = need_positive(mj, "/material/h", get_or(mj, "h", cfg.material.h));
    cfg.material.lambda = get_or(mj, "lambda", cfg.material.lambda);
    cfg.material.h1 = get_or(mj, "h1", cfg.material.h1);
    cfg.material.h2 = get_or(mj, "h2", cfg.material.h2);
    cfg.material.eps_r = get_or(mj, "eps_r", cfg.material.eps_r);
    cfg.material.t = get_or(mj, "t", cfg.material.t);
    cfg.material.a0 = get_or(mj, "a0", cfg.material.a0);
    cfg.material.zeta = get_or(mj, "zeta", cfg.material.zeta);
    cfg.material.z0 = get_or(mj, "z0", cfg.material.z0);
    cfg.material.z1 = get_or(mj, "z1", cfg.material.z1);
    cfg.material.grid_path = get_or<std::string>(mj, "path", cfg.material.grid_path);
    try {
      cfg.material.make();
    } catch (const std::exception& e) {
      fail_at("/material", e.what());
    }
  }

  if (doc.contains("discretization")) {
    const json& dj = doc["discretization"];
    cfg.discretization.modes = get_or(dj, "modes", cfg.discretization.modes);
    cfg.discretization.elements = get_or(dj, "elements", cfg.discretization.elements);
    cfg.discretization.quadrature_order =
        get_or(dj, "quadrature_order", cfg.discretization.quadrature_order);
    if (cfg.discretization.modes < 0) fail_at("/discretization/modes", "must be >= 0");
    if (cfg.discretization.elements < 1) fail_at("/discretization/elements", "must be >= 1");
    if (cfg.discretization.quadrature_order < 2 || cfg.discretization.quadrature_order > 5)
      fail_at("/discretization/quadrature_order", "must be in 2..5");
  }

  if (doc.contains("rho")) {
    const json& rj = doc["rho"];
    cfg.rho.rule = get_or<std::string>(rj, "rule", cfg.rho.rule);
    cfg.rho.re = get_or(rj, "re", cfg.rho.re);
    cfg.rho.im = get_or(rj, "im", cfg.rho.im);
    if (cfg.rho.rule != "default" && cfg.rho.rule != "explicit")
      fail_at("/rho/rule", "must be 'default' or 'explicit'");
    if (cfg.rho.rule == "explicit" && (!(cfg.rho.re > 0.0) || !(cfg.rho.im < 0.0)))
      fail_at("/rho", "explicit rho requires re > 0 and im < 0");
  }

  if (doc.contains("scan")) {
    const json& sj = doc["scan"];
    cfg.scan.k_min = get_or(sj, "k_min", cfg.scan.k_min);
    cfg.scan.k_max = get_or(sj, "k_max", cfg.scan.k_max);
    cfg.scan.count = get_or(sj, "count", cfg.scan.count);
    if (!(cfg.scan.k_min > 0.0)) fail_at("/scan/k_min", "must be positive");
    if (cfg.scan.count < 0) fail_at("/scan/count", "must be >= 0");
    if (cfg.scan.count > 1 && !(cfg.scan.k_max > cfg.scan.k_min))
      fail_at("/scan/k_max", "must exceed k_min");
  }

  if (doc.contains("audit")) {
    const json& aj = doc["audit"];
    cfg.audit.trials = get_or(aj, "trials", cfg.audit.trials);
    cfg.audit.poincare_samples = get_or(aj, "poincare_samples", cfg.audit.poincare_samples);
    cfg.audit.garding_samples = get_or(aj, "garding_samples", cfg.audit.garding_samples);
    if (cfg.audit.trials < 1) fail_at("/audit/trials", "must be >= 1");
  }

  if (doc.contains("output")) {
    const json& oj = doc["output"];
    if (oj.contains("field_grid")) {
      const json& fg = oj["field_grid"];
      if (!fg.is_array() || fg.size() != 3) fail_at("/output/field_grid", "expected [nx, ny, nz]");
      cfg.output.field_nx = fg[0].get<int>();
      cfg.output.field_ny = fg[1].get<int>();
      cfg.output.field_nz = fg[2].get<int>();
      if (cfg.output.field_nx < 1 || cfg.output.field_ny < 1 || cfg.output.field_nz < 2)
        fail_at("/output/field_grid", "need nx, ny >= 1 and nz >= 2");
    }
    cfg.output.write_field = get_or(oj, "write_field", cfg.output.write_field);
  }

  cfg.seed = get_or<std::uint64_t>(doc, "seed", cfg.seed);
  cfg.threads = get_or(doc, "threads", cfg.threads);
  if (cfg.threads < 1) fail_at("/threads", "must be >= 1");
  return cfg;
}

std::string RunConfig::to_json() const {
  json doc;
  doc["schema_version"] = schema_version;
  doc["command"] = command_name(command);
  doc["source"] = {{"d", {source.d.x(), source.d.y(), source.d.z()}},
                   {"p", {source.p.x(), source.p.y(), source.p.z()}},
                   {"omega", source.omega},
                   {"eps0", source.eps0},
                   {"mu0", source.mu0}};
  json mj = {{"family", material.family}, {"h", material.h}};
  if (material.family == "bump" || material.family == "smoothed_bump") {
    mj["lambda"] = material.lambda;
    mj["h1"] = material.h1;
    mj["h2"] = material.h2;
  } else if (material.family == "slab") {
    mj["eps_r"] = material.eps_r;
    mj["t"] = material.t;
  } else if (material.family == "graded_linear") {
    mj["a0"] = material.a0;
    mj["zeta"] = material.zeta;
  } else if (material.family == "trapping_slab") {
    mj["eps_r"] = material.eps_r;
    mj["z0"] = material.z0;
    mj["z1"] = material.z1;
  } else if (material.family == "grid") {
    mj["path"] = material.grid_path;
  }
  doc["material"] = mj;
  doc["discretization"] = {{"modes", discretization.modes},
                           {"elements", discretization.elements},
                           {"quadrature_order", discretization.quadrature_order}};
  doc["rho"] = {{"rule", rho.rule}, {"re", rho.re}, {"im", rho.im}};
  doc["scan"] = {{"k_min", scan.k_min}, {"k_max", scan.k_max}, {"count", scan.count}};
  doc["audit"] = {{"trials", audit.trials},
                  {"poincare_samples", audit.poincare_samples},
                  {"garding_samples", audit.garding_samples}};
  doc["output"] = {{"field_grid", {output.field_nx, output.field_ny, output.field_nz}},
                   {"write_field", output.write_field}};
  doc["seed"] = seed;
  doc["threads"] = threads;
  return doc.dump(2);
}

} // namespace qpmax
