// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: a single JSON document validated up front, with all
// defaults resolved so the manifest alone reproduces a run.
#pragma once

#include "qpmax/assembly.hpp"
#include "qpmax/incident.hpp"
#include "qpmax/material.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace qpmax {

inline constexpr int schema_version = 1;

enum class Command { Solve, CheckMaterial, ScanK, Audit, OracleCompare };

std::string command_name(Command c);
Command parse_command(const std::string& name);

struct SourceConfig {
  Vec3d d{0.0, 0.0, -1.0};
  Vec3d p{1.0, 0.0, 0.0};
  double omega = 1.0;
  double eps0 = 1.0;
  double mu0 = 1.0;

  PlaneWaveSource make() const { return make_source(d, p, omega, eps0, mu0); }
};

struct MaterialConfig {
  std::string family = "uniform";
  double h = 1.0;
  double lambda = 0.01, h1 = 0.3, h2 = 0.6;      // bump families
  double eps_r = 4.0, t = 0.3;                   // slab
  double a0 = 0.5, zeta = 0.3;                   // graded_linear
  double z0 = 0.2, z1 = 0.5;                     // trapping_slab
  std::string grid_path;                         // grid

  MaterialProfile make() const;
};

struct DiscretizationConfig {
  int modes = 2;     // lattice truncation order N
  int elements = 32; // vertical elements M
  int quadrature_order = 3;
};

struct ScanConfig {
  double k_min = 0.5;
  double k_max = 3.5;
  int count = 50;
};

struct AuditConfig {
  int trials = 20;        // random manufactured fields per identity
  int poincare_samples = 200;
  int garding_samples = 40;
};

struct OutputConfig {
  int field_nx = 16, field_ny = 16, field_nz = 9;
  bool write_field = true;
};

struct RhoConfig {
  std::string rule = "default"; // or "explicit"
  double re = 1.0, im = -1.0;

  RhoRule make() const {
    if (rule == "default") return RhoRule{};
    return RhoRule{RhoRule::Kind::Explicit, cplx(re, im)};
  }
};

struct RunConfig {
  Command command = Command::Solve;
  SourceConfig source;
  MaterialConfig material;
  DiscretizationConfig discretization;
  RhoConfig rho;
  ScanConfig scan;
  AuditConfig audit;
  OutputConfig output;
  std::uint64_t seed = 1234;
  int threads = 1;
  std::string out_dir = "out";

  /// Fully resolved configuration as a JSON string (manifest payload).
  std::string to_json() const;
};

/// Parse and validate a configuration file. Throws std::runtime_error with a
/// position-precise message (JSON pointer for semantic errors, byte offset
/// for syntax errors).
RunConfig load_config(const std::string& path, Command command);

} // namespace qpmax
