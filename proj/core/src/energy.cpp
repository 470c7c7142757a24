#include "fsi/energy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <tuple>
#include <sstream>

#include "fsi/errors.hpp"
#include "fsi/quadrature.hpp"

namespace fsi {

namespace {

double dissipation_rate(const FieldSnapshot& v, const FieldSnapshot* cof, double mu) {
  const FunctionSpace& s = *v.space;
  const int d = s.dim();
  const auto& rule = simplex_rule(d, default_quadrature_points());
  LocalEval ev, evc;
  double sum = 0.0;
  for (int e = 0; e < s.num_elements(); ++e) {
    CellGeometry g = cell_geometry(s.mesh(), space_cell(s, e));
    int ce = cof ? cof->space->element_of(space_cell(s, e)) : -1;
    for (int q = 0; q < rule.size(); ++q) {
      eval_local(d, s.degree(), rule.barycentric[q], g.grad_lambda, ev);
      Eigen::MatrixXd G = field_gradient(v, e, ev);
      if (cof) {
        shape::values(d, cof->space->degree(), rule.barycentric[q], evc.phi);
        Eigen::VectorXd c = field_value(*cof, ce, evc);
        Eigen::MatrixXd C(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) C(i, j) = c(i * d + j);
        G = G * C.transpose();
      }
      Eigen::MatrixXd D = 0.5 * (G + G.transpose());
      sum += rule.weights[q] * g.volume * D.squaredNorm();
    }
  }
  return 2.0 * mu * sum;
}

struct EnergyMatrices {
  SpMat Kdiv, Kstr, M;
};

// Matrices are reused across the many reports of one fixed-point run.
const EnergyMatrices& matrices_for(const SpacePtr& s, double lambda, double mu_hat, bool solid) {
  using Key = std::tuple<const FunctionSpace*, double, double, bool>;
  static std::map<Key, std::pair<std::weak_ptr<const FunctionSpace>, EnergyMatrices>> cache;
  Key key{s.get(), lambda, mu_hat, solid};
  auto it = cache.find(key);
  if (it != cache.end() && it->second.first.lock() == s) return it->second.second;
  EnergyMatrices m;
  m.M = expand_components(mass_matrix(*s), s->dim());
  if (solid) {
    m.Kdiv = elasticity_matrix(*s, lambda, 0.0);
    m.Kstr = elasticity_matrix(*s, 0.0, mu_hat);
  }
  auto& slot = cache[key];
  slot = {s, std::move(m)};
  return slot.second;
}

}  // namespace

double EnergyReport::scale() const {
  double s = 0.0;
  for (int n = 0; n < num_levels(); ++n) s = std::max(s, total[n] + dissipation[n]);
  return s;
}

std::string EnergyReport::to_csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "t,kinetic_fluid,kinetic_solid,elastic_div,elastic_strain,dissipation,residual\n";
  for (int n = 0; n < num_levels(); ++n)
    os << time[n] << ',' << kinetic_fluid[n] << ',' << kinetic_solid[n] << ',' << elastic_div[n] << ','
       << elastic_strain[n] << ',' << dissipation[n] << ',' << balance_residual[n] << '\n';
  return os.str();
}

EnergyReport energy_report(const SolidTrajectory& solid, const FluidTrajectory& fluid, const MaterialParams& mat,
                           const DeformationTrajectory* def) {
  const bool has_s = !solid.u.empty(), has_f = !fluid.v.empty();
  if (!has_s && !has_f) throw ShapeError("energy report needs at least one trajectory");
  const Trajectory& ref = has_s ? solid.u : fluid.v;
  const int N = ref.num_levels();
  const double dt = ref.dt, t0 = ref.t0;
  auto same_grid = [&](const Trajectory& tr) {
    return tr.num_levels() == N && std::abs(tr.dt - dt) <= 1e-12 * dt && std::abs(tr.t0 - t0) <= 1e-12 * (1 + dt);
  };
  if (has_s && (!same_grid(solid.u_t) || !same_grid(solid.u))) throw ShapeError("solid trajectories off the time grid");
  if (has_f && !same_grid(fluid.v)) throw ShapeError("fluid and solid trajectories use different time grids");
  if (def && has_f && def->num_levels() != N) throw ShapeError("deformation trajectory off the time grid");

  EnergyReport r;
  r.time.resize(N);
  r.kinetic_fluid.assign(N, 0.0);
  r.kinetic_solid.assign(N, 0.0);
  r.elastic_div.assign(N, 0.0);
  r.elastic_strain.assign(N, 0.0);
  r.dissipation_rate.assign(N, 0.0);
  std::vector<double> mid_rate(std::max(N - 1, 0), 0.0);
  for (int n = 0; n < N; ++n) r.time[n] = t0 + n * dt;

  if (has_s) {
    const auto& em = matrices_for(solid.u[0].space, mat.lambda, mat.mu_hat, true);
    const SpMat &Kdiv = em.Kdiv, &Kstr = em.Kstr, &M = em.M;
    for (int n = 0; n < N; ++n) {
      const Eigen::VectorXd& u = solid.u[n].values;
      const Eigen::VectorXd& ut = solid.u_t[n].values;
      r.kinetic_solid[n] = 0.5 * mat.rho_B * ut.dot(M * ut);
      r.elastic_div[n] = 0.5 * u.dot(Kdiv * u);
      r.elastic_strain[n] = 0.5 * u.dot(Kstr * u);
    }
  }
  if (has_f) {
    const SpMat& M = matrices_for(fluid.v[0].space, 0.0, 0.0, false).M;
    for (int n = 0; n < N; ++n) {
      const Eigen::VectorXd& v = fluid.v[n].values;
      r.kinetic_fluid[n] = 0.5 * mat.rho_L * v.dot(M * v);
      r.dissipation_rate[n] = dissipation_rate(fluid.v[n], def ? &(*def)[n].cof : nullptr, mat.mu);
    }
    // Midpoint rule over each step, the quadrature under which Crank-Nicolson
    // dissipates exactly.
    for (int n = 0; n + 1 < N; ++n) {
      FieldSnapshot vm = fluid.v[n];
      vm.values = 0.5 * (fluid.v[n].values + fluid.v[n + 1].values);
      if (def) {
        FieldSnapshot cm = (*def)[n].cof;
        cm.values = 0.5 * ((*def)[n].cof.values + (*def)[n + 1].cof.values);
        mid_rate[n] = dissipation_rate(vm, &cm, mat.mu);
      } else {
        mid_rate[n] = dissipation_rate(vm, nullptr, mat.mu);
      }
    }
  }
  r.total.resize(N);
  r.dissipation.assign(N, 0.0);
  for (int n = 0; n < N; ++n) {
    r.total[n] = r.kinetic_fluid[n] + r.kinetic_solid[n] + r.elastic_div[n] + r.elastic_strain[n];
    if (n > 0) r.dissipation[n] = r.dissipation[n - 1] + dt * mid_rate[n - 1];
  }
  r.balance_residual.assign(N, 0.0);
  if (N >= 2) {
    for (int n = 0; n < N; ++n) {
      double dE;
      if (n == 0)
        dE = (r.total[1] - r.total[0]) / dt;
      else if (n == N - 1)
        dE = (r.total[N - 1] - r.total[N - 2]) / dt;
      else
        dE = (r.total[n + 1] - r.total[n - 1]) / (2 * dt);
      r.balance_residual[n] = dE + r.dissipation_rate[n];
    }
  }
  r.integrated_residual = r.total[N - 1] - r.total[0] + r.dissipation[N - 1];
  return r;
}

}  // namespace fsi
