#include "caplab/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <random>
#include <thread>

#include "caplab/errors.hpp"
#include "caplab/state.hpp"

namespace caplab {

namespace {

constexpr double kFdStep = 1e-5;

Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (long i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    xp(i) = xi + kFdStep;
    const double fp = f(xp);
    xp(i) = xi - kFdStep;
    const double fm = f(xp);
    xp(i) = xi;
    g(i) = (fp - fm) / (2.0 * kFdStep);
  }
  return g;
}

}  // namespace

std::pair<double, Eigen::VectorXd> lbfgs_maximize(const Objective& f,
                                                  Eigen::VectorXd x,
                                                  int max_iterations,
                                                  double tolerance) {
  double fx = f(x);
  Eigen::VectorXd g = fd_gradient(f, x);

  constexpr int kMemory = 10;
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  double best_f = fx;
  Eigen::VectorXd best_x = x;
  const double ftol = std::min(1e-10, tolerance * 1e-4);
  int stall = 0;

  for (int iter = 0; iter < max_iterations; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < 1e-9) break;

    // Two-loop recursion on the ascent direction.
    Eigen::VectorXd q = g;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const double gamma =
          s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd dir = q;
    double slope = g.dot(dir);
    if (slope <= 0) {  // not an ascent direction; reset to steepest ascent
      dir = g;
      slope = g.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    // Backtracking Armijo line search.
    double t = 1.0;
    double f_new = fx;
    Eigen::VectorXd x_new = x;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + t * dir;
      f_new = f(x_new);
      if (f_new >= fx + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;

    Eigen::VectorXd g_new = fd_gradient(f, x_new);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd yv = g - g_new;  // gradient of -f increases
    const double sy = s.dot(yv);
    if (sy > 1e-12) {
      s_hist.push_back(s);
      y_hist.push_back(yv);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double gain = f_new - fx;
    x = std::move(x_new);
    fx = f_new;
    g = std::move(g_new);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
    if (gain < ftol) {
      if (++stall >= 3) break;
    } else {
      stall = 0;
    }
  }
  return {best_f, best_x};
}

int thread_budget() {
  static const int budget = [] {
    if (const char* env = std::getenv("CAPLAB_THREADS")) {
      const int v = std::atoi(env);
      if (v >= 1) return std::min(v, 64);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 16u));
  }();
  return budget;
}

MultistartResult maximize_multistart(const Objective& f, int dim,
                                     const OptimizerConfig& config,
                                     const std::vector<Eigen::VectorXd>& extra_starts) {
  if (config.restarts < 1) throw validity_error("optimizer needs restarts >= 1");
  if (config.tolerance <= 0) throw validity_error("optimizer tolerance must be > 0");

  const int n_extra = static_cast<int>(extra_starts.size());
  const int n_starts = n_extra + config.restarts;

  auto make_start = [&](int idx) -> Eigen::VectorXd {
    if (idx < n_extra) return extra_starts[idx];
    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(idx - n_extra));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x(i) = gauss(rng);
    return x;
  };

  std::vector<double> values(n_starts);
  std::vector<Eigen::VectorXd> points(n_starts);
  auto run_one = [&](int idx) {
    auto [v, x] = lbfgs_maximize(f, make_start(idx), config.max_iterations,
                                 config.tolerance);
    values[idx] = v;
    points[idx] = std::move(x);
  };

  const int workers = std::min(thread_budget(), n_starts);
  if (workers <= 1) {
    for (int i = 0; i < n_starts; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_starts; i = next.fetch_add(1)) run_one(i);
      });
    for (auto& t : pool) t.join();
  }

  int best = 0;
  for (int i = 1; i < n_starts; ++i)
    if (values[i] > values[best]) best = i;

  MultistartResult out;
  out.value = values[best];
  out.argmax = points[best];
  out.restarts_used = n_starts;
  int agreeing = 0;
  for (int i = 0; i < n_starts; ++i)
    if (values[best] - values[i] <= config.tolerance) ++agreeing;
  out.converged = (n_starts == 1) || agreeing >= 2;
  return out;
}

Eigen::VectorXcd params_to_state(const Eigen::VectorXd& v) {
  Eigen::VectorXcd amp(v.size() / 2);
  for (long i = 0; i < amp.size(); ++i) amp(i) = cplx(v(2 * i), v(2 * i + 1));
  const double n = amp.norm();
  if (n < 1e-12) throw validity_error("degenerate state parameterization");
  return amp / n;
}

Eigen::VectorXd state_to_params(const Eigen::VectorXcd& amp) {
  Eigen::VectorXd v(2 * amp.size());
  for (long i = 0; i < amp.size(); ++i) {
    v(2 * i) = amp(i).real();
    v(2 * i + 1) = amp(i).imag();
  }
  return v;
}

Eigen::MatrixXcd params_to_hermitian(const Eigen::VectorXd& v, int n) {
  Eigen::MatrixXcd h(n, n);
  long k = n;
  for (int i = 0; i < n; ++i) h(i, i) = v(i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      h(i, j) = cplx(v(k), v(k + 1));
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  return h;
}

Eigen::VectorXd hermitian_to_params(const Eigen::MatrixXcd& h) {
  const int n = static_cast<int>(h.rows());
  Eigen::VectorXd v(static_cast<long>(n) * n);
  long k = n;
  for (int i = 0; i < n; ++i) v(i) = h(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      v(k) = h(i, j).real();
      v(k + 1) = h(i, j).imag();
      k += 2;
    }
  return v;
}

}  // namespace caplab
