#pragma once

// RBF-kernel support vector classifier trained with sequential minimal
// optimization (maximal-violating-pair working-set selection, the classic
// dual formulation with box constraint C), plus Platt sigmoid calibration so
// the classifier exposes probabilities. Multiclass is one-vs-rest with the
// per-class sigmoid outputs renormalized. Training is deterministic: the
// working-set rule has no random component and ties resolve to the lowest
// index.
//
// gamma accepts a number or the two conventional presets: "auto" = 1/m and
// "scale" = 1/(m · var(X)) with the variance taken over every matrix entry.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabtext/common.hpp"
#include "tabtext/metrics.hpp"  // Matrix

namespace tabtext {

struct SvmParams {
  double C = 1.0;
  std::string gamma = "scale";  // number, "auto", or "scale"
  double tol = 1e-3;
  size_t max_iter = 0;  // 0: choose from n
};

namespace detail {

inline double resolve_gamma(const std::string& gamma, const Matrix& X) {
  size_t m = X.empty() ? 1 : X[0].size();
  if (gamma == "auto") return 1.0 / static_cast<double>(m);
  if (gamma == "scale") {
    double sum = 0, sum2 = 0;
    size_t cnt = 0;
    for (const auto& row : X)
      for (double v : row) {
        sum += v;
        sum2 += v * v;
        ++cnt;
      }
    double mean = sum / static_cast<double>(cnt);
    double var = sum2 / static_cast<double>(cnt) - mean * mean;
    if (var <= 0) var = 1.0;
    return 1.0 / (static_cast<double>(m) * var);
  }
  try {
    size_t pos = 0;
    double g = std::stod(gamma, &pos);
    if (pos != gamma.size()) fail("svm: malformed gamma '" + gamma + "'");
    return g;
  } catch (const std::invalid_argument&) {
    fail("svm: malformed gamma '" + gamma + "'");
  }
  return 0;  // unreachable
}

inline double rbf(const std::vector<double>& a, const std::vector<double>& b,
                  double gamma) {
  double d2 = 0;
  for (size_t j = 0; j < a.size(); ++j) {
    double d = a[j] - b[j];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

// Platt's sigmoid fit P(y=+1|f) = 1/(1+exp(A f + B)), Newton iterations with
// the standard prior-smoothed targets.
struct PlattSigmoid {
  double A = 0.0, B = 0.0;

  void fit(const std::vector<double>& f, const std::vector<int>& y_pm) {
    size_t n = f.size();
    double prior1 = 0, prior0 = 0;
    for (int y : y_pm) (y > 0 ? prior1 : prior0) += 1.0;
    double hi = (prior1 + 1.0) / (prior1 + 2.0);
    double lo = 1.0 / (prior0 + 2.0);
    std::vector<double> t(n);
    for (size_t i = 0; i < n; ++i) t[i] = y_pm[i] > 0 ? hi : lo;

    A = 0.0;
    B = std::log((prior0 + 1.0) / (prior1 + 1.0));
    auto objective = [&](double a, double b) {
      double obj = 0;
      for (size_t i = 0; i < n; ++i) {
        double z = a * f[i] + b;
        if (z >= 0)
          obj += t[i] * z + std::log1p(std::exp(-z));
        else
          obj += (t[i] - 1.0) * z + std::log1p(std::exp(z));
      }
      return obj;
    };
    double fval = objective(A, B);
    const double min_step = 1e-10, sigma = 1e-12;
    for (int it = 0; it < 100; ++it) {
      double h11 = sigma, h22 = sigma, h21 = 0, g1 = 0, g2 = 0;
      for (size_t i = 0; i < n; ++i) {
        double z = A * f[i] + B;
        double p, q;
        if (z >= 0) {
          p = std::exp(-z) / (1.0 + std::exp(-z));
          q = 1.0 / (1.0 + std::exp(-z));
        } else {
          p = 1.0 / (1.0 + std::exp(z));
          q = std::exp(z) / (1.0 + std::exp(z));
        }
        double d2 = p * q;
        h11 += f[i] * f[i] * d2;
        h22 += d2;
        h21 += f[i] * d2;
        double d1 = t[i] - p;
        g1 += f[i] * d1;
        g2 += d1;
      }
      if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
      double det = h11 * h22 - h21 * h21;
      double dA = -(h22 * g1 - h21 * g2) / det;
      double dB = -(-h21 * g1 + h11 * g2) / det;
      double gd = g1 * dA + g2 * dB;
      double step = 1.0;
      while (step >= min_step) {
        double na = A + step * dA, nb = B + step * dB;
        double nf = objective(na, nb);
        if (nf < fval + 1e-4 * step * gd) {
          A = na;
          B = nb;
          fval = nf;
          break;
        }
        step /= 2.0;
      }
      if (step < min_step) break;
    }
  }

  double prob(double f) const {
    double z = A * f + B;
    return z >= 0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
  }
};

// One binary machine: dual coefficients over the support vectors plus bias.
struct BinarySvm {
  std::vector<std::vector<double>> sv;  // support vectors
  std::vector<double> coef;             // alpha_i * y_i per support vector
  double rho = 0.0;
  double gamma = 1.0;
  PlattSigmoid sigmoid;

  double decision(const std::vector<double>& x) const {
    double f = 0;
    for (size_t s = 0; s < sv.size(); ++s) f += coef[s] * rbf(sv[s], x, gamma);
    return f - rho;
  }

  // y_pm in {-1,+1}. Returns the training-set decision values (used for the
  // sigmoid fit) so callers need not recompute them.
  std::vector<double> train(const Matrix& X, const std::vector<int>& y_pm,
                            double C, double gamma_value, double tol,
                            size_t max_iter) {
    size_t n = X.size();
    gamma = gamma_value;
    std::vector<double> alpha(n, 0.0), grad(n, -1.0), qdiag(n, 1.0);  // K(x,x)=1
    if (max_iter == 0) max_iter = 100000 + 200 * n;

    // Kernel rows: full matrix for small problems, small cache otherwise.
    const size_t full_limit = 4096;
    std::vector<std::vector<float>> full;
    if (n <= full_limit) {
      full.assign(n, std::vector<float>(n));
      for (size_t i = 0; i < n; ++i) {
        full[i][i] = 1.0f;
        for (size_t j = i + 1; j < n; ++j)
          full[i][j] = full[j][i] = static_cast<float>(rbf(X[i], X[j], gamma));
      }
    }
    std::vector<std::vector<float>> cache;
    std::vector<int> cache_of(n, -1);
    std::vector<int> cache_slot_row;
    size_t cache_cap = std::max<size_t>(2, (1u << 28) / (8 * std::max<size_t>(n, 1)));
    size_t cache_next = 0;
    auto kernel_row = [&](size_t i) -> const std::vector<float>& {
      if (!full.empty()) return full[i];
      if (cache_of[i] >= 0) return cache[static_cast<size_t>(cache_of[i])];
      size_t slot;
      if (cache.size() < cache_cap) {
        slot = cache.size();
        cache.emplace_back(n);
        cache_slot_row.push_back(static_cast<int>(i));
      } else {
        slot = cache_next;
        cache_next = (cache_next + 1) % cache_cap;
        cache_of[static_cast<size_t>(cache_slot_row[slot])] = -1;
        cache_slot_row[slot] = static_cast<int>(i);
      }
      auto& row = cache[slot];
      for (size_t j = 0; j < n; ++j)
        row[j] = static_cast<float>(rbf(X[i], X[j], gamma));
      cache_of[i] = static_cast<int>(slot);
      return row;
    };
    auto q = [&](const std::vector<float>& krow, size_t i, size_t t) {
      return static_cast<double>(y_pm[i]) * static_cast<double>(y_pm[t]) *
             static_cast<double>(krow[t]);
    };

    const double tau = 1e-12;
    for (size_t iter = 0; iter < max_iter; ++iter) {
      // maximal violating pair
      double gmax = -std::numeric_limits<double>::infinity();
      double gmin = std::numeric_limits<double>::infinity();
      int i = -1, j = -1;
      for (size_t t = 0; t < n; ++t) {
        double v = -static_cast<double>(y_pm[t]) * grad[t];
        bool in_up = (y_pm[t] > 0 && alpha[t] < C) || (y_pm[t] < 0 && alpha[t] > 0);
        bool in_low = (y_pm[t] > 0 && alpha[t] > 0) || (y_pm[t] < 0 && alpha[t] < C);
        if (in_up && v > gmax) {
          gmax = v;
          i = static_cast<int>(t);
        }
        if (in_low && v < gmin) {
          gmin = v;
          j = static_cast<int>(t);
        }
      }
      if (i < 0 || j < 0 || gmax - gmin < tol) break;
      size_t ii = static_cast<size_t>(i), jj = static_cast<size_t>(j);
      const auto& Ki = kernel_row(ii);
      double old_ai = alpha[ii], old_aj = alpha[jj];
      if (y_pm[ii] != y_pm[jj]) {
        double quad = qdiag[ii] + qdiag[jj] + 2.0 * static_cast<double>(Ki[jj]);
        if (quad <= 0) quad = tau;
        double delta = (-grad[ii] - grad[jj]) / quad;
        double diff = alpha[ii] - alpha[jj];
        alpha[ii] += delta;
        alpha[jj] += delta;
        if (diff > 0) {
          if (alpha[jj] < 0) {
            alpha[jj] = 0;
            alpha[ii] = diff;
          }
        } else if (alpha[ii] < 0) {
          alpha[ii] = 0;
          alpha[jj] = -diff;
        }
        if (diff > 0) {
          if (alpha[ii] > C) {
            alpha[ii] = C;
            alpha[jj] = C - diff;
          }
        } else if (alpha[jj] > C) {
          alpha[jj] = C;
          alpha[ii] = C + diff;
        }
      } else {
        double quad = qdiag[ii] + qdiag[jj] - 2.0 * static_cast<double>(Ki[jj]);
        if (quad <= 0) quad = tau;
        double delta = (grad[ii] - grad[jj]) / quad;
        double sum = alpha[ii] + alpha[jj];
        alpha[ii] -= delta;
        alpha[jj] += delta;
        if (sum > C) {
          if (alpha[ii] > C) {
            alpha[ii] = C;
            alpha[jj] = sum - C;
          }
        } else if (alpha[jj] < 0) {
          alpha[jj] = 0;
          alpha[ii] = sum;
        }
        if (sum > C) {
          if (alpha[jj] > C) {
            alpha[jj] = C;
            alpha[ii] = sum - C;
          }
        } else if (alpha[ii] < 0) {
          alpha[ii] = 0;
          alpha[jj] = sum;
        }
      }
      double dai = alpha[ii] - old_ai, daj = alpha[jj] - old_aj;
      if (dai == 0 && daj == 0) break;  // numerically stuck
      const auto& Kj = kernel_row(jj);
      for (size_t t = 0; t < n; ++t)
        grad[t] += q(Ki, ii, t) * dai + q(Kj, jj, t) * daj;
    }

    // bias (rho) from the KKT conditions
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0;
    size_t n_free = 0;
    for (size_t t = 0; t < n; ++t) {
      double yg = static_cast<double>(y_pm[t]) * grad[t];
      if (alpha[t] >= C) {
        if (y_pm[t] < 0)
          ub = std::min(ub, yg);
        else
          lb = std::max(lb, yg);
      } else if (alpha[t] <= 0) {
        if (y_pm[t] > 0)
          ub = std::min(ub, yg);
        else
          lb = std::max(lb, yg);
      } else {
        ++n_free;
        sum_free += yg;
      }
    }
    rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

    sv.clear();
    coef.clear();
    for (size_t t = 0; t < n; ++t)
      if (alpha[t] > 0) {
        sv.push_back(X[t]);
        coef.push_back(alpha[t] * static_cast<double>(y_pm[t]));
      }

    // training decision values, computed from the final dual state
    std::vector<double> f(n, 0.0);
    for (size_t t = 0; t < n; ++t) f[t] = decision(X[t]);
    return f;
  }
};

}  // namespace detail

class SvmModel {
 public:
  void fit(const Matrix& X, const std::vector<int>& y, size_t n_classes,
           const SvmParams& params) {
    if (X.empty()) fail("svm: empty training matrix");
    if (X.size() != y.size()) fail("svm: row/label count mismatch");
    if (n_classes < 2) fail("svm: need at least two classes");
    n_classes_ = n_classes;
    double gamma = detail::resolve_gamma(params.gamma, X);

    size_t machines = n_classes == 2 ? 1 : n_classes;
    machines_.assign(machines, detail::BinarySvm{});
    for (size_t c = 0; c < machines; ++c) {
      size_t positive = n_classes == 2 ? 1 : c;
      std::vector<int> y_pm(y.size());
      size_t n_pos = 0;
      for (size_t i = 0; i < y.size(); ++i) {
        y_pm[i] = static_cast<size_t>(y[i]) == positive ? 1 : -1;
        if (y_pm[i] > 0) ++n_pos;
      }
      if (n_pos == 0 || n_pos == y.size())
        fail("svm: training set contains a single class");
      auto f = machines_[c].train(X, y_pm, params.C, gamma, params.tol,
                                  params.max_iter);
      machines_[c].sigmoid.fit(f, y_pm);
    }
  }

  Matrix predict_proba(const Matrix& X) const {
    Matrix out(X.size(), std::vector<double>(n_classes_, 0.0));
    for (size_t i = 0; i < X.size(); ++i) {
      if (n_classes_ == 2) {
        double p = machines_[0].sigmoid.prob(machines_[0].decision(X[i]));
        out[i][0] = 1.0 - p;
        out[i][1] = p;
      } else {
        double sum = 0;
        for (size_t c = 0; c < n_classes_; ++c) {
          out[i][c] = machines_[c].sigmoid.prob(machines_[c].decision(X[i]));
          sum += out[i][c];
        }
        if (sum <= 0) {
          for (size_t c = 0; c < n_classes_; ++c)
            out[i][c] = 1.0 / static_cast<double>(n_classes_);
        } else {
          for (size_t c = 0; c < n_classes_; ++c) out[i][c] /= sum;
        }
      }
    }
    return out;
  }

  size_t n_classes() const { return n_classes_; }

  nlohmann::json to_json() const {
    nlohmann::json jm = nlohmann::json::array();
    for (const auto& mc : machines_)
      jm.push_back({{"sv", mc.sv},
                    {"coef", mc.coef},
                    {"rho", mc.rho},
                    {"gamma", mc.gamma},
                    {"A", mc.sigmoid.A},
                    {"B", mc.sigmoid.B}});
    return {{"kind", "svm"}, {"n_classes", n_classes_}, {"machines", jm}};
  }

  static SvmModel from_json(const nlohmann::json& j) {
    SvmModel m;
    m.n_classes_ = j.at("n_classes").get<size_t>();
    for (const auto& jm : j.at("machines")) {
      detail::BinarySvm mc;
      for (const auto& row : jm.at("sv")) mc.sv.push_back(row.get<std::vector<double>>());
      mc.coef = jm.at("coef").get<std::vector<double>>();
      mc.rho = jm.at("rho");
      mc.gamma = jm.at("gamma");
      mc.sigmoid.A = jm.at("A");
      mc.sigmoid.B = jm.at("B");
      m.machines_.push_back(std::move(mc));
    }
    return m;
  }

 private:
  size_t n_classes_ = 0;
  std::vector<detail::BinarySvm> machines_;
};

}  // namespace tabtext
