#include "nqrent/scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <thread>

namespace nqrent {

namespace {

const SpinSystem kSpin32{3};

// Improvements below this margin count as ties, which resolve toward the
// incumbent (scanned first = smaller angles). Sits well above the ~1e-13
// evaluation noise of the concurrence and far below any physical feature.
constexpr double kTieMargin = 1e-11;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double grid_value(double lo, double hi, int count, int i) {
  if (count == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / (count - 1);
}

// Deterministic parallel map: fn(i) fills slot i; worker count never affects
// the result. Per-point failures are collected and the lowest index rethrown.
// NQR_THREADS overrides the worker count.
void parallel_for(int n, const std::function<void(int)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("NQR_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = static_cast<unsigned>(v);
  }
  if (hw <= 1 || n < 4) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string describe_point(const ModelParams& p) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "(alpha=%.17g, beta=%.17g, eta=%.17g, theta=%.17g, phi=%.17g)",
                p.alpha, p.beta, p.eta, p.orientation.theta, p.orientation.phi);
  return buf;
}

void validate_axis(const AxisSpec& a) {
  if (a.count < 2) throw OutOfRange("sweep: axis count must be >= 2");
  if (!(a.min < a.max)) throw OutOfRange("sweep: axis min must be < max");
  if (a.axis == Axis::Temperature && !(a.min > 0.0))
    throw OutOfRange("sweep: temperature axis must be positive");
}

// Applies one swept value onto the resolved coordinates of a grid point.
void apply_axis_value(Axis axis, double v, ModelParams& p) {
  switch (axis) {
    case Axis::Alpha: p.alpha = v; break;
    case Axis::Beta: p.beta = v; break;
    case Axis::Eta:
      if (!(v >= 0.0 && v <= 1.0))
        throw EtaOutOfRange("sweep: eta grid leaves [0, 1]");
      p.eta = v;
      break;
    case Axis::Theta: p.orientation = Orientation(v, p.orientation.phi); break;
    case Axis::Phi: p.orientation = Orientation(p.orientation.theta, v); break;
    case Axis::Temperature: p.beta = 1.0 / v; break;
  }
}

double concurrence_at(double alpha, double beta, double eta,
                      const Orientation& o, ZeemanSign sign) {
  return concurrence(thermal_state(kSpin32, ModelParams(alpha, beta, eta, o), sign)).c;
}

}  // namespace

std::string axis_name(Axis a) {
  switch (a) {
    case Axis::Alpha: return "alpha";
    case Axis::Beta: return "beta";
    case Axis::Eta: return "eta";
    case Axis::Theta: return "theta";
    case Axis::Phi: return "phi";
    case Axis::Temperature: return "T";
  }
  return "?";
}

Axis axis_from_name(std::string_view name) {
  if (name == "alpha") return Axis::Alpha;
  if (name == "beta") return Axis::Beta;
  if (name == "eta") return Axis::Eta;
  if (name == "theta") return Axis::Theta;
  if (name == "phi") return Axis::Phi;
  if (name == "T" || name == "temperature") return Axis::Temperature;
  throw NotFound("unknown sweep axis: " + std::string(name));
}

SweepResult sweep(const SweepSpec& spec) {
  validate_axis(spec.axis1);
  if (spec.axis2) {
    validate_axis(*spec.axis2);
    if (spec.axis2->axis == spec.axis1.axis)
      throw OutOfRange("sweep: the two axes must differ");
  }
  if (spec.ratio) {
    if (!(*spec.ratio > 0.0)) throw OutOfRange("sweep: ratio must be > 0");
    const auto is_alpha = [](const AxisSpec& a) { return a.axis == Axis::Alpha; };
    if (is_alpha(spec.axis1) || (spec.axis2 && is_alpha(*spec.axis2)))
      throw OutOfRange("sweep: ratio mode fixes alpha = ratio*beta; alpha cannot be an axis");
  }

  SweepResult result;
  result.axis_names.push_back(axis_name(spec.axis1.axis));
  if (spec.axis2) result.axis_names.push_back(axis_name(spec.axis2->axis));
  result.meta.timestamp = utc_timestamp();
  result.meta.qubit_mapping = spec.mapping.permutation;
  result.meta.zeeman_sign = spec.zeeman_sign;
  result.meta.ratio = spec.ratio;

  const int n1 = spec.axis1.count;
  const int n2 = spec.axis2 ? spec.axis2->count : 1;
  result.rows.resize(static_cast<size_t>(n1) * n2);

  parallel_for(n1 * n2, [&](int idx) {
    const int i1 = idx / n2;
    const int i2 = idx % n2;
    const double v1 = grid_value(spec.axis1.min, spec.axis1.max, n1, i1);
    ModelParams p = spec.fixed;
    std::vector<double> axis_values{v1};
    try {
      apply_axis_value(spec.axis1.axis, v1, p);
      if (spec.axis2) {
        const double v2 = grid_value(spec.axis2->min, spec.axis2->max, n2, i2);
        axis_values.push_back(v2);
        apply_axis_value(spec.axis2->axis, v2, p);
      }
      if (spec.ratio) p.alpha = *spec.ratio * p.beta;
      p = ModelParams(p.alpha, p.beta, p.eta, p.orientation);  // re-validate

      const EntanglementReport rep =
          measure_all(thermal_state(kSpin32, p, spec.zeeman_sign), spec.mapping);
      result.rows[idx] = SweepRow{std::move(axis_values), p, rep.concurrence,
                                  rep.eof, rep.entropy_a};
    } catch (const Error& e) {
      throw SweepPointError("sweep point " + describe_point(p) + ": " + e.what());
    }
  });
  return result;
}

SweepResult temperature_scan(double ratio, double eta, const Orientation& o,
                             const GridRange& beta_range, ZeemanSign sign) {
  if (!(ratio > 0.0)) throw OutOfRange("temperature_scan: ratio must be > 0");
  if (!(beta_range.min > 0.0 && beta_range.max > beta_range.min))
    throw OutOfRange("temperature_scan: beta range must be positive and increasing");
  if (beta_range.count < 2) throw OutOfRange("temperature_scan: count must be >= 2");

  SweepResult result;
  result.axis_names.push_back(axis_name(Axis::Temperature));
  result.meta.timestamp = utc_timestamp();
  result.meta.zeeman_sign = sign;
  result.meta.ratio = ratio;

  const int n = beta_range.count;
  const double log_lo = std::log(beta_range.min);
  const double log_hi = std::log(beta_range.max);
  result.rows.resize(static_cast<size_t>(n));

  parallel_for(n, [&](int i) {
    const double beta = std::exp(grid_value(log_lo, log_hi, n, i));
    ModelParams p(ratio * beta, beta, eta, o);
    try {
      const EntanglementReport rep =
          measure_all(thermal_state(kSpin32, p, sign), QubitMapping{});
      result.rows[i] = SweepRow{{1.0 / beta}, p, rep.concurrence, rep.eof,
                                rep.entropy_a};
    } catch (const Error& e) {
      throw SweepPointError("scan point " + describe_point(p) + ": " + e.what());
    }
  });
  return result;
}

CriticalPoint critical_beta(double ratio, double eta, const Orientation& o,
                            double threshold, double tol, ZeemanSign sign) {
  if (!(ratio > 0.0)) throw OutOfRange("critical_beta: ratio must be > 0");
  if (!(tol > 0.0)) throw OutOfRange("critical_beta: tol must be > 0");

  double lo = 1e-3;
  double hi = 50.0;
  const auto c_at = [&](double beta) {
    return concurrence_at(ratio * beta, beta, eta, o, sign);
  };
  const auto where = [&] {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "(ratio=%g, eta=%g, theta=%g, phi=%g)",
                  ratio, eta, o.theta, o.phi);
    return std::string(buf);
  };
  if (!(c_at(hi) > threshold))
    throw NoTransition("critical_beta at " + where() +
                       ": no entanglement at the cold bracket end (beta=50)");
  if (!(c_at(lo) <= threshold))
    throw NoTransition("critical_beta at " + where() +
                       ": already entangled at the hot bracket end (beta=1e-3)");

  while (hi - lo >= tol) {
    const double mid = 0.5 * (lo + hi);
    if (c_at(mid) > threshold)
      hi = mid;
    else
      lo = mid;
  }
  return CriticalPoint{0.5 * (lo + hi), ratio, {lo, hi}, threshold};
}

namespace {

// Golden-section maximization of f on [a, b]; returns the best interior
// point probed. Only comparisons drive the shrink, so flat regions cost
// nothing but iterations.
std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double a, double b, int iters) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int k = 0; k < iters; ++k) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return (f1 >= f2) ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

AngleOptimum maximize_over_angles(double alpha, double beta, double eta,
                                  int grid_n, int refine_iters,
                                  ZeemanSign sign) {
  if (grid_n < 3) throw OutOfRange("maximize_over_angles: grid_n must be >= 3");

  double best_seen = -1.0;  // max over every evaluation, returned as c_star
  const auto eval = [&](double th, double ph) {
    const double c = concurrence_at(alpha, beta, eta, Orientation(th, ph), sign);
    best_seen = std::max(best_seen, c);
    return c;
  };

  // Coarse grid: theta inclusive over [0, pi], phi half-open over [0, 2pi).
  double th_star = 0.0, ph_star = 0.0;
  double c_star = eval(0.0, 0.0);
  const double phi_step = 2.0 * M_PI / grid_n;
  for (int i = 0; i < grid_n; ++i) {
    const double th = grid_value(0.0, M_PI, grid_n, i);
    for (int j = 0; j < grid_n; ++j) {
      const double ph = j * phi_step;
      const double c = eval(th, ph);
      if (c > c_star + kTieMargin) {
        c_star = c;
        th_star = th;
        ph_star = ph;
      }
    }
  }

  // Per-axis golden-section refinement, two rounds, bracket one grid step
  // around the incumbent (clamped to the domain).
  const double th_step = M_PI / (grid_n - 1);
  for (int round = 0; round < 2; ++round) {
    auto [th, cth] = golden_max(
        [&](double t) { return eval(t, ph_star); },
        std::max(0.0, th_star - th_step), std::min(M_PI, th_star + th_step),
        refine_iters);
    if (cth > c_star + kTieMargin) {
      th_star = th;
      c_star = cth;
    }
    auto [ph, cph] = golden_max(
        [&](double q) { return eval(th_star, q); },
        std::max(0.0, ph_star - phi_step),
        std::min(2.0 * M_PI * (1.0 - 1e-12), ph_star + phi_step), refine_iters);
    if (cph > c_star + kTieMargin) {
      ph_star = ph;
      c_star = cph;
    }
  }
  return AngleOptimum{th_star, ph_star, std::max(c_star, best_seen)};
}

SweepResult max_over_angles_surface(const GridRange& alpha_range,
                                    const GridRange& beta_range, double eta,
                                    int grid_n, int refine_iters,
                                    ZeemanSign sign) {
  if (alpha_range.count < 2 || beta_range.count < 2)
    throw OutOfRange("max_over_angles_surface: axis count must be >= 2");
  if (!(alpha_range.min < alpha_range.max) || !(beta_range.min < beta_range.max))
    throw OutOfRange("max_over_angles_surface: axis min must be < max");

  SweepResult result;
  result.axis_names = {"alpha", "beta"};
  result.extra_names = {"theta_star", "phi_star"};
  result.meta.timestamp = utc_timestamp();
  result.meta.zeeman_sign = sign;

  const int n1 = alpha_range.count;
  const int n2 = beta_range.count;
  result.rows.resize(static_cast<size_t>(n1) * n2);
  result.extra_values.resize(result.rows.size());

  parallel_for(n1 * n2, [&](int idx) {
    const double a = grid_value(alpha_range.min, alpha_range.max, n1, idx / n2);
    const double b = grid_value(beta_range.min, beta_range.max, n2, idx % n2);
    ModelParams p(a, b, eta, Orientation{});
    try {
      const AngleOptimum opt =
          maximize_over_angles(a, b, eta, grid_n, refine_iters, sign);
      p = ModelParams(a, b, eta, Orientation(opt.theta_star, opt.phi_star));
      const EntanglementReport rep =
          measure_all(thermal_state(kSpin32, p, sign), QubitMapping{});
      result.rows[idx] =
          SweepRow{{a, b}, p, opt.c_star, entanglement_of_formation(opt.c_star),
                   rep.entropy_a};
      result.extra_values[idx] = {opt.theta_star, opt.phi_star};
    } catch (const Error& e) {
      throw SweepPointError("surface point " + describe_point(p) + ": " + e.what());
    }
  });
  return result;
}

}  // namespace nqrent
