// SPDX-License-Identifier: Apache-2.0
#include "qpmax/run.hpp"

#include "qpmax/audit.hpp"
#include "qpmax/layered.hpp"
#include "qpmax/postprocess.hpp"
#include "qpmax/solver.hpp"

#include <nlohmann/json.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace qpmax {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json complex_json(const cplx& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json vec3c_json(const Vec3c& v) {
  return json::array({complex_json(v.x()), complex_json(v.y()), complex_json(v.z())});
}

void write_manifest(const RunConfig& cfg, const fs::path& dir) {
  json doc = json::parse(cfg.to_json());
  doc["artifact"] = "qpmax";
  doc["outputs_schema_version"] = schema_version;
  write_text(dir / "manifest.json", doc.dump(2) + "\n");
}

VerticalMesh mesh_for(const RunConfig& cfg, const MaterialProfile& m) {
  std::vector<double> req = m.interface_points;
  if (m.collar < m.h) req.push_back(m.h - m.collar);
  return make_vertical_mesh(cfg.discretization.elements, m.h, req,
                            cfg.discretization.quadrature_order);
}

json rayleigh_json(const TraceCoefficients& tr) {
  json rows = json::array();
  for (int m = 0; m < tr.lattice.count(); ++m) {
    const cplx beta = tr.lattice.beta[static_cast<size_t>(m)];
    const ModeFlags flags = classify_mode(beta);
    rows.push_back({{"n1", tr.lattice.modes[static_cast<size_t>(m)].x()},
                    {"n2", tr.lattice.modes[static_cast<size_t>(m)].y()},
                    {"beta", complex_json(beta)},
                    {"coefficient", vec3c_json(tr.values.col(m))},
                    {"propagating", flags.propagating},
                    {"threshold", flags.threshold}});
  }
  return json{{"schema_version", schema_version}, {"modes", rows}};
}

std::string flux_csv(const EnergyReport& rep) {
  std::string text = "n1,n2,beta_re,beta_im,amp1_re,amp1_im,amp2_re,amp2_im,amp3_re,amp3_im,"
                     "flux,propagating,threshold\n";
  for (const auto& row : rep.rows) {
    text += std::to_string(row.n.x()) + "," + std::to_string(row.n.y()) + "," +
            fmt(row.beta.real()) + "," + fmt(row.beta.imag());
    for (int c = 0; c < 3; ++c)
      text += "," + fmt(row.amplitude(c).real()) + "," + fmt(row.amplitude(c).imag());
    text += "," + fmt(row.flux) + "," + std::to_string(row.flags.propagating ? 1 : 0) + "," +
            std::to_string(row.flags.threshold ? 1 : 0) + "\n";
  }
  return text;
}

void write_field(const FieldGrid& grid, const fs::path& dir) {
  json header = {{"schema_version", schema_version},
                 {"dims", {grid.nx, grid.ny, grid.nz}},
                 {"z_range", {grid.z0, grid.z1}},
                 {"alpha", {grid.alpha.x(), grid.alpha.y()}},
                 {"layout", "component-major, z, y, x; little-endian float64 re/im interleaved"},
                 {"binary", "field.bin"}};
  write_text(dir / "field.json", header.dump(2) + "\n");
  std::ofstream bin(dir / "field.bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot write field.bin");
  for (const cplx& z : grid.values) {
    const double re = z.real(), im = z.imag();
    bin.write(reinterpret_cast<const char*>(&re), sizeof(double));
    bin.write(reinterpret_cast<const char*>(&im), sizeof(double));
  }
}

json conditions_json(const ConditionReport& rep) {
  return json{{"schema_version", schema_version},
              {"cond_a", {{"pass", rep.cond_a}, {"max_d3_inv_eps", rep.max_d3}}},
              {"cond_b",
               {{"pass", rep.cond_b},
                {"margin", rep.margin_b},
                {"ball_center", {rep.ball_center.x(), rep.ball_center.y(), rep.ball_center.z()}},
                {"ball_radius", rep.ball_radius}}},
              {"cond_c",
               {{"pass", rep.cond_c},
                {"best_delta", rep.best_delta},
                {"lhs", rep.lhs_c},
                {"rhs", rep.rhs_c}}},
              {"sup_grad_T", rep.sup_grad_T},
              {"sup_d3", rep.sup_d3},
              {"min_inv_eps", rep.min_inv_eps},
              {"all_pass", rep.all_pass()}};
}

json audit_json(const AuditResult& r) {
  return json{{"identity", r.identity},
              {"left", complex_json(r.left)},
              {"right", complex_json(r.right)},
              {"residual", r.residual},
              {"resolution", r.resolution}};
}

int run_solve(const RunConfig& cfg, const fs::path& dir) {
  const PlaneWaveSource source = cfg.source.make();
  const MaterialProfile m = cfg.material.make();
  const VerticalMesh mesh = mesh_for(cfg, m);
  const ModeLattice lattice = build_lattice(cfg.discretization.modes, source.alpha, source.k);

  DiscreteSystem sys = assemble_system(m, lattice, mesh, cfg.rho.make().resolve(m));
  sys.rhs = assemble_rhs(source, m, lattice, mesh);
  const SolveReport rep = solve(sys);

  const TraceCoefficients tr = rayleigh_coefficients(rep.field);
  const EnergyReport energy = energy_report(rep.field, source);

  write_text(dir / "rayleigh.json", rayleigh_json(tr).dump(2) + "\n");
  write_text(dir / "flux.csv", flux_csv(energy));
  json report = {{"schema_version", schema_version},
                 {"method", rep.method},
                 {"dim", rep.dim},
                 {"linear_residual", rep.linear_residual},
                 {"div_residual", rep.div_residual},
                 {"dtn_residual", rep.dtn_residual},
                 {"scattered_l2_norm", std::sqrt(l2_norm_sq(rep.field))},
                 {"energy_balance", energy.balance_ratio}};
  write_text(dir / "solve_report.json", report.dump(2) + "\n");
  if (cfg.output.write_field) {
    const FieldGrid grid =
        field_export(rep.field, cfg.output.field_nx, cfg.output.field_ny, cfg.output.field_nz);
    write_field(grid, dir);
  }
  return 0;
}

int run_check_material(const RunConfig& cfg, const fs::path& dir) {
  const MaterialProfile m = cfg.material.make();
  const ConditionReport rep = check_conditions(m);
  write_text(dir / "conditions.json", conditions_json(rep).dump(2) + "\n");
  return 0;
}

int run_scan(const RunConfig& cfg, const fs::path& dir) {
  const MaterialProfile m = cfg.material.make();
  ScanOptions opt;
  opt.alpha = Vec2d(cfg.source.d.x(), cfg.source.d.y());
  opt.rho = cfg.rho.make();
  opt.threads = cfg.threads;
  const ScanCurve curve = scan_k(cfg.scan.k_min, cfg.scan.k_max, cfg.scan.count, m,
                                 cfg.discretization.modes, cfg.discretization.elements, opt);
  std::string text = "k,sigma_min,threshold_flag\n";
  for (size_t i = 0; i < curve.k.size(); ++i)
    text += fmt(curve.k[i]) + "," + fmt(curve.sigma_min[i]) + "," +
            std::to_string(curve.threshold_flag[i]) + "\n";
  write_text(dir / "scan.csv", text);
  return 0;
}

int run_audit(const RunConfig& cfg, const fs::path& dir) {
  std::mt19937_64 rng(cfg.seed);
  json audits = json::array();

  // Pointwise curl decomposition on random band-limited fields.
  double worst_curl = 0.0;
  for (int t = 0; t < cfg.audit.trials; ++t) {
    const TrigField F = random_trig_field(3, Vec2d(0.3, -0.1), rng);
    const AuditResult r = audit_curl_decomposition(F, 1.0);
    worst_curl = std::max(worst_curl, r.residual);
    if (t == 0) audits.push_back(audit_json(r));
  }
  audits.push_back({{"identity", "curl_decomposition_suite"},
                    {"trials", cfg.audit.trials},
                    {"max_residual", worst_curl}});

  // Integration-by-parts identities across a mesh-width sweep.
  const MaterialProfile smooth = smoothed_bump_profile(0.35, 0.3, 0.6, 1.0);
  const MaterialProfile vacuum = uniform_profile(1.0);
  std::mt19937_64 rng_fields(cfg.seed + 1);
  const TrigField H = random_trig_field(2, Vec2d(0.2, 0.0), rng_fields);
  for (const auto* mat : {&vacuum, &smooth}) {
    json sweep = json::array();
    for (int elements : {16, 32, 64}) {
      AuditQuadrature q;
      q.elements = elements;
      q.resolution = std::max(32, 2 * elements);
      sweep.push_back(audit_json(audit_lemma_weighted_curl(H, *mat, q)));
      sweep.push_back(audit_json(audit_lemma_vertical_shear(H, *mat, q)));
    }
    audits.push_back({{"identity", "lemma_sweep"}, {"material", mat->family}, {"runs", sweep}});
  }

  // Vertical Poincare bound: analytic profiles and random nodal fields.
  audits.push_back(audit_json(audit_poincare([](double z) { return z; },
                                             [](double) { return 1.0; }, 1.0)));
  audits.push_back(audit_json(audit_poincare(
      [](double z) { return std::sin(0.5 * pi * z); },
      [](double z) { return 0.5 * pi * std::cos(0.5 * pi * z); }, 1.0)));
  {
    const VerticalMesh mesh = make_vertical_mesh(32, 1.0);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < cfg.audit.poincare_samples; ++s) {
      std::vector<cplx> nodal(static_cast<size_t>(mesh.node_count()));
      nodal[0] = 0.0;
      for (size_t j = 1; j < nodal.size(); ++j) nodal[j] = cplx(uni(rng), uni(rng));
      worst = std::max(worst, audit_poincare(nodal, mesh).left.real());
    }
    audits.push_back({{"identity", "poincare_random_suite"},
                      {"samples", cfg.audit.poincare_samples},
                      {"max_ratio", worst}});
  }

  // Coercivity fit across wave numbers on the configured material.
  {
    const MaterialProfile m = cfg.material.make();
    json garding = json::array();
    for (double k : {0.5, 1.0, 2.3, 4.0}) {
      const ModeLattice lat = build_lattice(1, Vec2d(0.0, 0.0), k);
      const VerticalMesh mesh = mesh_for(cfg, m);
      const DiscreteSystem sys = assemble_system(m, lat, mesh, cfg.rho.make().resolve(m));
      const auto samples = garding_samples(sys, cfg.audit.garding_samples, rng);
      const GardingFit fit = fit_garding(samples);
      garding.push_back({{"k", k},
                         {"c1", fit.c1},
                         {"c2", fit.c2},
                         {"worst_margin", fit.worst_margin},
                         {"pass", fit.pass}});
    }
    audits.push_back({{"identity", "garding_fit"}, {"runs", garding}});
  }

  // Rellich combination: zero field (exact) and a random field as the
  // negative control documenting that the identity characterizes solutions.
  {
    const MaterialProfile m = smoothed_bump_profile(0.35, 0.3, 0.6, 1.0);
    const ModeLattice lat = build_lattice(1, Vec2d(0.0, 0.0), 1.3);
    const VerticalMesh mesh = make_vertical_mesh(24, 1.0, {0.3, 0.6});
    DiscreteField zero(lat, mesh);
    audits.push_back(audit_json(rellich_residual(zero, m)));
    const DiscreteField rnd = random_field(lat, mesh, rng);
    json negative = audit_json(rellich_residual(rnd, m));
    negative["note"] = "negative control (random non-solution)";
    audits.push_back(negative);
  }

  write_text(dir / "audits.json",
             json{{"schema_version", schema_version}, {"audits", audits}}.dump(2) + "\n");
  return 0;
}

int run_oracle_compare(const RunConfig& cfg, const fs::path& dir) {
  const PlaneWaveSource source = cfg.source.make();
  const MaterialProfile m = cfg.material.make();
  if (!m.laterally_uniform)
    throw std::runtime_error("oracle-compare requires a laterally uniform material");

  const VerticalMesh mesh = mesh_for(cfg, m);
  const ModeLattice lattice = build_lattice(cfg.discretization.modes, source.alpha, source.k);
  DiscreteSystem sys = assemble_system(m, lattice, mesh, cfg.rho.make().resolve(m));
  sys.rhs = assemble_rhs(source, m, lattice, mesh);
  const SolveReport rep = solve(sys);
  const TraceCoefficients tr = rayleigh_coefficients(rep.field);
  const EnergyReport solver_energy = energy_report(rep.field, source);

  const OracleResult oracle =
      layered_solve(layered_from(m), source, 10000, cfg.discretization.modes);

  const int excited = lattice.index_of(0, 0);
  const Vec3c solver_coeff = tr.values.col(excited);
  const Vec3c oracle_coeff = oracle.scattered_at_h.col(excited);
  const double denom = std::max(1e-300, oracle_coeff.norm());
  const double rel = (solver_coeff - oracle_coeff).norm() / denom;

  json doc = {{"schema_version", schema_version},
              {"excited_mode", {0, 0}},
              {"solver_coefficient", vec3c_json(solver_coeff)},
              {"oracle_coefficient", vec3c_json(oracle_coeff)},
              {"relative_difference", rel},
              {"solver_energy_balance", solver_energy.balance_ratio},
              {"oracle_energy_balance", oracle.energy.balance_ratio},
              {"oracle_grid_points", oracle.grid_points},
              {"solver_dim", rep.dim}};
  write_text(dir / "oracle_compare.json", doc.dump(2) + "\n");
  write_text(dir / "flux.csv", flux_csv(solver_energy));
  return 0;
}

} // namespace

RunResult run(const RunConfig& cfg) {
  RunResult result;
  fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    result.exit_code = 2;
    result.message = "cannot create output directory " + dir.string();
    return result;
  }

  try {
    write_manifest(cfg, dir);
    switch (cfg.command) {
      case Command::Solve: result.exit_code = run_solve(cfg, dir); break;
      case Command::CheckMaterial: result.exit_code = run_check_material(cfg, dir); break;
      case Command::ScanK: result.exit_code = run_scan(cfg, dir); break;
      case Command::Audit: result.exit_code = run_audit(cfg, dir); break;
      case Command::OracleCompare: result.exit_code = run_oracle_compare(cfg, dir); break;
    }
    result.message = command_name(cfg.command) + ": ok, outputs in " + dir.string();
  } catch (const std::exception& e) {
    // Leave a diagnostic trail next to whatever partial outputs exist.
    json diag = {{"schema_version", schema_version}, {"error", e.what()}};
    std::ofstream out(dir / "error.json", std::ios::binary);
    if (out) out << diag.dump(2) << "\n";
    result.exit_code = 1;
    result.message = std::string("failed: ") + e.what();
  }
  return result;
}

} // namespace qpmax
