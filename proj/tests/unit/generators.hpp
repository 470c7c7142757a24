#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "fsi/field.hpp"
#include "fsi/mesh.hpp"
#include "fsi/tensor.hpp"

namespace fsi::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0xF51);
  return gen;
}

inline double uniform(double a = -1.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline Tensor2 random_tensor(int d, double scale = 1.0) {
  Tensor2 A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = scale * uniform();
  return A;
}

/// Invertible matrix near the identity: I + small perturbation, det > 0.
inline Tensor2 random_deformation(int d, double spread = 0.4) {
  return identity(d) + random_tensor(d, spread / d);
}

inline FieldSnapshot random_field(const SpacePtr& s, int ncomp, double t = 0.0, double scale = 1.0) {
  FieldSnapshot f(s, ncomp, t);
  for (int i = 0; i < f.values.size(); ++i) f.values(i) = scale * uniform();
  return f;
}

inline MeshPtr small_annulus(double h = 0.5) {
  GeometrySpec g;
  g.h = h;
  return build_reference_mesh(g);
}

}  // namespace fsi::testing
