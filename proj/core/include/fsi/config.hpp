#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsi/compat.hpp"
#include "fsi/fixed_point.hpp"
#include "fsi/inequalities.hpp"
#include "fsi/mesh.hpp"

namespace fsi {

/// Where the initial data come from. `family` is one of the generated
/// families or "flux-violating"; the three paths, when set, replace the
/// generated u0, u1, v0 by nodal values read from plain text files.
struct DataSpec {
  std::string family = "tangential-swirl";
  double amplitude = 0.01;
  std::string u0_file, u1_file, v0_file;
  bool from_files() const { return !u0_file.empty(); }
};

struct OutputSpec {
  std::string directory = "out";
  bool vtk = false;
  bool csv = true;
  bool iteration_dumps = false;
};

struct MmsSpec {
  std::vector<double> h{0.25, 0.125, 0.0625};
  double T = 0.5;
  double dt_over_h = 0.5;
};

struct DependenceSpec {
  std::string perturbation = "tangential-swirl";
  double perturbation_amplitude = 1.0;
  std::vector<double> eps{0.004, 0.002, 0.001};
};

struct InequalitySpec {
  std::vector<LemmaId> lemmas{LemmaId::I1, LemmaId::I2, LemmaId::TSIGMA, LemmaId::HOLDER_ST};
  InequalityParams params;
  int samples = 100;
  std::vector<double> T_grid{0.25, 0.5, 1.0};
};

struct RunConfig {
  GeometrySpec geometry;
  MaterialParams material{0.1, 1.0, 2.0, 1.0, 0.5};
  FixedPointConfig fixed_point;  // carries time.T and time.dt
  DataSpec data;
  OutputSpec output;
  MmsSpec mms;
  DependenceSpec dependence;
  InequalitySpec inequalities;
  std::uint64_t seed = 1;
  bool deterministic = true;
  /// Canonical "section.key = value" listing of every setting; input of the hash.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
};

/// Parses the sectioned key = value format. Unknown sections or keys, bad
/// values and missing data files raise ConfigError. Relative data paths are
/// resolved against the config file's directory.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

/// Nodal values of a field, one per line, dof-major.
FieldSnapshot read_field_file(const std::string& path, const SpacePtr& space, int components);
void write_field_file(const std::string& path, const FieldSnapshot& f);

}  // namespace fsi
