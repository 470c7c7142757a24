#pragma once

#include <Eigen/Core>

namespace fsi {

/// Small dense d x d matrix, d in {2, 3}; stack allocated.
using Tensor2 = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
/// Small dense d-vector, d in {2, 3}.
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;

inline Tensor2 identity(int dim) { return Tensor2::Identity(dim, dim); }

inline Tensor2 sym(const Tensor2& a) { return 0.5 * (a + a.transpose()); }

/// Double contraction A : B = sum_ij A_ij B_ij.
inline double ddot(const Tensor2& a, const Tensor2& b) { return (a.array() * b.array()).sum(); }

}  // namespace fsi
