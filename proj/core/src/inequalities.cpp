#include "fsi/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fsi/errors.hpp"
#include "fsi/quadrature.hpp"

namespace fsi {

namespace {

constexpr int kNodes = 40;
constexpr double kPi = 3.14159265358979323846;

// Evaluates all modes (or derivative `order` of them) at t.
using ModeEval = std::function<void(double t, int order, Eigen::VectorXd& out)>;

const std::vector<double>& gl_x() {
  static std::vector<double> x, w;
  if (x.empty()) gauss_legendre_01(kNodes, x, w);
  return x;
}
const std::vector<double>& gl_w() {
  static std::vector<double> x, w;
  if (x.empty()) gauss_legendre_01(kNodes, x, w);
  return w;
}

double weighted_sq(const Eigen::VectorXd& v, const Eigen::VectorXd& w) { return (w.array() * v.array().square()).sum(); }

// int_0^T sum_k w_k |d^order g_k|^2 dt
double l2_sq(const ModeEval& g, const Eigen::VectorXd& w, double T, int order) {
  const auto &x = gl_x(), &wt = gl_w();
  Eigen::VectorXd v;
  double s = 0.0;
  for (int i = 0; i < kNodes; ++i) {
    g(T * x[i], order, v);
    s += wt[i] * T * weighted_sq(v, w);
  }
  return s;
}

// int int |h(t) - h(tau)|^2 / |t - tau|^(1 + 2 theta), h = d^order g, 0 < theta < 1,
// written as 2 int_0^T int_0^t with tau = t - s and s = t u^alpha, alpha = 1/(1 - theta),
// which leaves a smooth integrand in u.
double slobodeckij_sq(const ModeEval& g, const Eigen::VectorXd& w, double T, double theta, int order) {
  const auto &x = gl_x(), &wt = gl_w();
  const double alpha = 1.0 / (1.0 - theta);
  Eigen::VectorXd a, b, q;
  double total = 0.0;
  for (int i = 0; i < kNodes; ++i) {
    const double t = T * x[i];
    g(t, order, a);
    double inner = 0.0;
    for (int j = 0; j < kNodes; ++j) {
      const double u = x[j];
      const double s = t * std::pow(u, alpha);
      if (s < 1e-7 * std::max(t, 1e-300)) {
        g(t - 0.5 * s, order + 1, q);
      } else {
        g(t - s, order, b);
        q = (a - b) / s;
      }
      inner += wt[j] * alpha * std::pow(t, 2.0 - 2.0 * theta) * u * weighted_sq(q, w);
    }
    total += wt[i] * T * inner;
  }
  return 2.0 * total;
}

double sobolev_sq(const ModeEval& g, const Eigen::VectorXd& w, double theta, double T) {
  if (theta < 0 || theta > 2) throw ConfigError("time order must lie in [0, 2]");
  double s = l2_sq(g, w, T, 0);
  if (theta == 0) return s;
  if (theta < 1) return s + slobodeckij_sq(g, w, T, theta, 0);
  s += l2_sq(g, w, T, 1);
  if (theta == 1) return s;
  if (theta < 2) return s + slobodeckij_sq(g, w, T, theta - 1, 1);
  return s + l2_sq(g, w, T, 2);
}

Eigen::VectorXd fourier_weights(int modes, double m) {
  Eigen::VectorXd w(modes);
  for (int k = 0; k < modes; ++k) w(k) = std::pow(1.0 + double(k) * k, m);
  return w;
}

}  // namespace

SpectralSample::SpectralSample(Eigen::MatrixXd a, Eigen::MatrixXd b, bool vanish_at_zero)
    : a_(std::move(a)), b_(std::move(b)), vanish_(vanish_at_zero) {
  if (a_.rows() != b_.rows() || a_.cols() != b_.cols() || a_.size() == 0)
    throw ShapeError("sample coefficient arrays must be non-empty and equally shaped");
}

double SpectralSample::mode(int k, double t, int order) const {
  double v = 0.0;
  for (int j = 0; j < a_.cols(); ++j) {
    const double om = j * kPi;
    const double c = std::cos(om * t), s = std::sin(om * t);
    double cj, sj;
    switch (order) {
      case 0:
        cj = vanish_ ? c - 1.0 : c;
        sj = s;
        break;
      case 1:
        cj = -om * s;
        sj = om * c;
        break;
      case 2:
        cj = -om * om * c;
        sj = -om * om * s;
        break;
      default: {
        // odd/even cycle of the trigonometric derivatives
        double p = std::pow(om, order);
        int r = order % 4;
        cj = p * (r == 0 ? c : r == 1 ? -s : r == 2 ? -c : s);
        sj = p * (r == 0 ? s : r == 1 ? c : r == 2 ? -s : -c);
      }
    }
    if (vanish_ && j == 0) cj = 0.0;  // cos(0) - 1 and its derivatives vanish
    v += a_(k, j) * cj + b_(k, j) * sj;
  }
  return v;
}

double SpectralSample::time_sobolev(double theta, double m, double T) const {
  ModeEval g = [this](double t, int order, Eigen::VectorXd& out) {
    out.resize(num_modes());
    for (int k = 0; k < num_modes(); ++k) out(k) = mode(k, t, order);
  };
  return std::sqrt(sobolev_sq(g, fourier_weights(num_modes(), m), theta, T));
}

double SpectralSample::time_lebesgue(double p, double s, double T) const {
  if (!(p >= 1)) throw ConfigError("Lebesgue exponent must be at least 1");
  const Eigen::VectorXd w = fourier_weights(num_modes(), s);
  auto spatial = [&](double t) {
    double acc = 0.0;
    for (int k = 0; k < num_modes(); ++k) acc += w(k) * std::pow(mode(k, t, 0), 2);
    return std::sqrt(acc);
  };
  if (std::isinf(p)) {
    double m = 0.0;
    const int n = 2000;
    for (int i = 0; i <= n; ++i) m = std::max(m, spatial(T * i / n));
    for (double x : gl_x()) m = std::max(m, spatial(T * x));
    return m;
  }
  const auto &x = gl_x(), &wt = gl_w();
  double acc = 0.0;
  for (int i = 0; i < kNodes; ++i) acc += wt[i] * T * std::pow(spatial(T * x[i]), p);
  return std::pow(acc, 1.0 / p);
}

SpectralSample random_sample(std::mt19937_64& rng, int modes, int freqs, bool vanish_at_zero) {
  if (modes < 1 || freqs < 0) throw ConfigError("sample needs at least one mode");
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::MatrixXd a(modes, freqs + 1), b(modes, freqs + 1);
  for (int k = 0; k < modes; ++k)
    for (int j = 0; j <= freqs; ++j) {
      a(k, j) = n01(rng);
      b(k, j) = n01(rng);
    }
  return SpectralSample(std::move(a), std::move(b), vanish_at_zero);
}

double scalar_time_sobolev(const std::function<double(double)>& g, const std::function<double(double)>& dg,
                           const std::function<double(double)>& d2g, double theta, double T) {
  ModeEval e = [&](double t, int order, Eigen::VectorXd& out) {
    out.resize(1);
    if (order == 0)
      out(0) = g(t);
    else if (order == 1)
      out(0) = dg(t);
    else if (order == 2)
      out(0) = d2g(t);
    else
      throw ConfigError("scalar_time_sobolev supports derivatives up to order 2");
  };
  return std::sqrt(sobolev_sq(e, Eigen::VectorXd::Ones(1), theta, T));
}

LemmaId parse_lemma_id(const std::string& s) {
  if (s == "I1") return LemmaId::I1;
  if (s == "I2") return LemmaId::I2;
  if (s == "TSIGMA") return LemmaId::TSIGMA;
  if (s == "HOLDER_ST") return LemmaId::HOLDER_ST;
  throw ConfigError("unknown lemma id '" + s + "'");
}

std::string to_string(LemmaId id) {
  switch (id) {
    case LemmaId::I1: return "I1";
    case LemmaId::I2: return "I2";
    case LemmaId::TSIGMA: return "TSIGMA";
    case LemmaId::HOLDER_ST: return "HOLDER_ST";
  }
  return "?";
}

double InequalityParams::r() const {
  double inv = (std::isinf(p) ? 0.0 : theta / p) + (std::isinf(q) ? 0.0 : (1.0 - theta) / q);
  return inv > 0 ? 1.0 / inv : std::numeric_limits<double>::infinity();
}

std::string InequalityParams::to_string(LemmaId id) const {
  char buf[160];
  switch (id) {
    case LemmaId::I1:
    case LemmaId::I2:
      std::snprintf(buf, sizeof buf, "theta=%g m1=%g m2=%g", theta, m1, m2);
      break;
    case LemmaId::TSIGMA:
      std::snprintf(buf, sizeof buf, "sigma=%g s=%g", sigma, s);
      break;
    case LemmaId::HOLDER_ST:
      std::snprintf(buf, sizeof buf, "theta=%g p=%g q=%g r=%g s1=%g s2=%g", theta, p, q, r(), s1, s2);
      break;
  }
  return buf;
}

void validate_params(LemmaId id, const InequalityParams& P, double T) {
  auto fail = [&](const std::string& why) { throw ConfigError(fsi::to_string(id) + ": " + why); };
  switch (id) {
    case LemmaId::I1:
      if (!(P.theta >= 0 && P.theta <= 1)) fail("theta must lie in [0, 1]");
      if (!(P.m1 >= 0 && P.m2 >= 0)) fail("m1, m2 must be nonnegative");
      if (!(T > 0 && T <= 1)) fail("T must lie in (0, 1]");
      break;
    case LemmaId::I2:
      if (!(P.theta >= 1 && P.theta <= 2)) fail("theta must lie in [1, 2]");
      if (!(P.m1 >= 0 && P.m2 >= 0)) fail("m1, m2 must be nonnegative");
      if (!(T > 0 && T <= 1)) fail("T must lie in (0, 1]");
      break;
    case LemmaId::TSIGMA:
      if (!(P.sigma > 0.5 && P.sigma <= 1)) fail("sigma must lie in (1/2, 1]");
      if (!(P.s >= 0 && P.s <= P.sigma)) fail("s must lie in [0, sigma]");
      if (!(T > 0 && T <= 1)) fail("T must lie in (0, 1]");
      break;
    case LemmaId::HOLDER_ST:
      if (!(P.p >= 1) || !(P.q >= 1)) fail("p, q must lie in [1, inf]");
      if (!(P.theta >= 0 && P.theta <= 1)) fail("theta must lie in [0, 1]");
      if (!(P.s1 >= 0 && P.s2 >= 0)) fail("s1, s2 must be nonnegative");
      if (!(P.r() >= 1)) fail("derived r must lie in [1, inf]");
      if (!(T > 0)) fail("T must be positive");
      break;
  }
}

InequalitySample evaluate_inequality(LemmaId id, const InequalityParams& P, const SpectralSample& f, double T) {
  validate_params(id, P, T);
  InequalitySample out{id, P, T, 0.0, 0.0, 0.0};
  switch (id) {
    case LemmaId::I1: {
      double m = (1 - P.theta) * P.m1 + P.theta * P.m2;
      out.lhs = f.time_sobolev(P.theta, m, T);
      out.rhs_without_constant =
          std::pow(f.time_sobolev(0, P.m1, T), 1 - P.theta) * std::pow(f.time_sobolev(1, P.m2, T), P.theta);
      break;
    }
    case LemmaId::I2: {
      double m = (2 - P.theta) * P.m1 + (P.theta - 1) * P.m2;
      out.lhs = f.time_sobolev(P.theta, m, T);
      out.rhs_without_constant =
          std::pow(f.time_sobolev(1, P.m1, T), 2 - P.theta) * std::pow(f.time_sobolev(2, P.m2, T), P.theta - 1);
      break;
    }
    case LemmaId::TSIGMA:
      out.lhs = f.time_sobolev(P.s, 0.0, T);
      out.rhs_without_constant = std::pow(T, P.sigma - P.s) * f.time_sobolev(P.sigma, 0.0, T);
      break;
    case LemmaId::HOLDER_ST: {
      double s = P.theta * P.s1 + (1 - P.theta) * P.s2;
      out.lhs = f.time_lebesgue(P.r(), s, T);
      out.rhs_without_constant =
          std::pow(f.time_lebesgue(P.p, P.s1, T), P.theta) * std::pow(f.time_lebesgue(P.q, P.s2, T), 1 - P.theta);
      break;
    }
  }
  if (out.lhs > 0 && !(out.rhs_without_constant > 0)) throw SolverError("right side vanished for a nonzero sample");
  out.ratio = out.rhs_without_constant > 0 ? out.lhs / out.rhs_without_constant : 0.0;
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw ConfigError("slope fit needs positive data");
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double den = n * sxx - sx * sx;
  if (den == 0) throw ConfigError("slope fit needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

double InequalityResult::overall_max() const {
  double m = 0.0;
  for (double r : max_ratio) m = std::max(m, r);
  return m;
}

std::string InequalityResult::to_csv(bool header) const {
  std::string out = header ? "lemma,params,T,max_ratio,fitted_exponent,seed\n" : "";
  char buf[320];
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    char fe[40] = "";
    if (lemma == LemmaId::TSIGMA) std::snprintf(fe, sizeof fe, "%.6f", fitted_exponent);
    std::snprintf(buf, sizeof buf, "%s,%s,%.6g,%.10e,%s,%llu\n", fsi::to_string(lemma).c_str(),
                  params.to_string(lemma).c_str(), T_grid[i], max_ratio[i], fe,
                  static_cast<unsigned long long>(seed));
    out += buf;
  }
  return out;
}

InequalityResult inequality_harness(LemmaId id, const InequalityParams& params, int n_samples,
                                    const std::vector<double>& T_grid, std::uint64_t seed) {
  if (n_samples < 1) throw ConfigError("inequality harness needs at least one sample");
  if (T_grid.empty()) throw ConfigError("inequality harness needs a T grid");
  for (double T : T_grid) validate_params(id, params, T);
  InequalityResult res;
  res.lemma = id;
  res.params = params;
  res.T_grid = T_grid;
  res.max_ratio.assign(T_grid.size(), 0.0);
  res.n_samples = n_samples;
  res.seed = seed;
  std::mt19937_64 rng(seed);
  const bool vanish = id == LemmaId::TSIGMA;
  double slope_sum = 0.0;
  for (int n = 0; n < n_samples; ++n) {
    SpectralSample f = random_sample(rng, 4, 3, vanish);
    std::vector<double> quot;
    for (std::size_t i = 0; i < T_grid.size(); ++i) {
      InequalitySample s = evaluate_inequality(id, params, f, T_grid[i]);
      res.max_ratio[i] = std::max(res.max_ratio[i], s.ratio);
      if (vanish) quot.push_back(s.lhs / f.time_sobolev(params.sigma, 0.0, T_grid[i]));
      res.samples.push_back(s);
    }
    if (vanish && T_grid.size() >= 2) slope_sum += loglog_slope(T_grid, quot);
  }
  if (vanish && T_grid.size() >= 2) res.fitted_exponent = slope_sum / n_samples;
  return res;
}

}  // namespace fsi
