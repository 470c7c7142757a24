#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fsi {

/// Space-time sample f(x, t) = sum_k cos(k x) g_k(t) on the periodic interval,
/// with g_k(t) = sum_j a_kj c_j(t) + b_kj sin(j pi t). c_j = cos(j pi t), or
/// cos(j pi t) - 1 (no j = 0 term) for samples vanishing at t = 0. Spatial
/// H^m norms use the Fourier weights (1 + k^2)^m.
class SpectralSample {
 public:
  SpectralSample(Eigen::MatrixXd a, Eigen::MatrixXd b, bool vanish_at_zero);

  int num_modes() const { return static_cast<int>(a_.rows()); }
  /// d^order/dt^order g_k at t (order 0..2).
  double mode(int k, double t, int order = 0) const;

  /// ||f||_{H^theta(0, T; H^m)}, 0 <= theta <= 2 (Sobolev-Slobodeckij in time).
  double time_sobolev(double theta, double m, double T) const;
  /// ||f||_{L^p(0, T; H^s)}, p in [1, inf] (p = inf as INFINITY).
  double time_lebesgue(double p, double s, double T) const;

 private:
  Eigen::MatrixXd a_, b_;
  bool vanish_;
};

/// Gaussian random sample with `modes` spatial modes and time frequencies 0..freqs.
SpectralSample random_sample(std::mt19937_64& rng, int modes, int freqs, bool vanish_at_zero);

/// Scalar Sobolev-Slobodeckij norm on (0, T) of g with derivatives dg, d2g.
/// Exposed for closed-form checks.
double scalar_time_sobolev(const std::function<double(double)>& g, const std::function<double(double)>& dg,
                           const std::function<double(double)>& d2g, double theta, double T);

enum class LemmaId { I1, I2, TSIGMA, HOLDER_ST };
LemmaId parse_lemma_id(const std::string& s);
std::string to_string(LemmaId id);

struct InequalityParams {
  double theta = 0.5;
  double m1 = 0.0, m2 = 1.0;  // I1, I2 spatial orders
  double s = 0.5, sigma = 1.0;  // TSIGMA time orders; HOLDER_ST uses s1, s2
  double p = 2.0, q = 2.0;    // HOLDER_ST time exponents (INFINITY allowed)
  double s1 = 0.0, s2 = 1.0;
  /// Derived exponent for HOLDER_ST: 1/r = theta/p + (1 - theta)/q.
  double r() const;
  std::string to_string(LemmaId id) const;
};

/// Throws ConfigError outside each lemma's stated parameter range.
void validate_params(LemmaId id, const InequalityParams& params, double T);

struct InequalitySample {
  LemmaId lemma;
  InequalityParams params;
  double T = 0.0;
  double lhs = 0.0;
  double rhs_without_constant = 0.0;
  double ratio = 0.0;
};

/// One sample's lhs and constant-free right side.
InequalitySample evaluate_inequality(LemmaId id, const InequalityParams& params, const SpectralSample& f, double T);

struct InequalityResult {
  LemmaId lemma;
  InequalityParams params;
  std::vector<double> T_grid;
  std::vector<double> max_ratio;   // per T
  double fitted_exponent = 0.0;    // TSIGMA: mean log-log slope of ||f||_{H^s} / ||f||_{H^sigma} in T
  int n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<InequalitySample> samples;
  double overall_max() const;
  /// Rows "lemma,params,T,max_ratio,fitted_exponent,seed".
  std::string to_csv(bool header = true) const;
};

/// Draws n_samples random samples (deterministic in `seed`) and evaluates
/// them on every T of T_grid. TSIGMA samples vanish at t = 0.
InequalityResult inequality_harness(LemmaId id, const InequalityParams& params, int n_samples,
                                    const std::vector<double>& T_grid, std::uint64_t seed = 1);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fsi
