#include "spamdet/classifier.hpp"

#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spamdet {

namespace {

double dot_sparse(const std::vector<double>& w,
                  const std::vector<std::pair<std::size_t, double>>& x) {
  double z = 0;
  for (const auto& [i, v] : x) z += w[i] * v;
  return z;
}

// log(1 + exp(m)) without overflow.
double log1pexp(double m) {
  return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
}

double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                : std::exp(z) / (1.0 + std::exp(z));
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double nll_and_grad(const std::vector<double>& weights, double bias, double C,
                    std::size_t dim, const std::vector<TrainExample>& data,
                    std::vector<double>& grad_weights, double& grad_bias) {
  if (weights.size() != dim)
    throw std::runtime_error("weight/feature dimension mismatch");
  grad_weights.assign(dim, 0.0);
  grad_bias = 0.0;
  double loss = 0.0;
  for (const auto& ex : data) {
    for (const auto& [i, v] : ex.features) {
      if (i >= dim) throw std::runtime_error("feature index out of range");
      (void)v;
    }
    double z = dot_sparse(weights, ex.features) + bias;
    double y = ex.deceptive ? 1.0 : -1.0;
    loss += log1pexp(-y * z);
    double dz = -y * sigmoid(-y * z);
    for (const auto& [i, v] : ex.features) grad_weights[i] += dz * v;
    grad_bias += dz;
  }
  if (!std::isinf(C)) {
    double reg = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      reg += weights[i] * weights[i];
      grad_weights[i] += weights[i] / C;
    }
    loss += reg / (2.0 * C);
  }
  return loss;
}

MaxentModel train(const std::vector<TrainExample>& data, std::size_t dim,
                  const TrainOptions& opts) {
  if (data.empty()) throw std::runtime_error("empty training set");
  bool has_pos = false, has_neg = false;
  for (const auto& ex : data) (ex.deceptive ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::runtime_error("training data contains a single class");

  const std::size_t n = dim + 1;  // weights + bias
  std::vector<double> x(n, 0.0), g(n, 0.0);

  auto eval = [&](const std::vector<double>& point, std::vector<double>& grad) {
    std::vector<double> w(point.begin(), point.begin() + dim);
    std::vector<double> gw;
    double gb = 0;
    double f = nll_and_grad(w, point[dim], opts.C, dim, data, gw, gb);
    if (!std::isfinite(f)) throw std::runtime_error("non-finite loss");
    grad.assign(gw.begin(), gw.end());
    grad.push_back(gb);
    return f;
  };

  double f = eval(x, g);
  auto norm2 = [](const std::vector<double>& v) {
    double s = 0;
    for (double a : v) s += a * a;
    return std::sqrt(s);
  };

  const std::size_t history = 10;
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  MaxentModel model;
  model.C = opts.C;
  int iter = 0;
  for (; iter < opts.max_iter && norm2(g) > opts.tol; ++iter) {
    // L-BFGS two-loop recursion for the search direction.
    std::vector<double> q = g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      double a = rho_hist[k] * std::inner_product(s_hist[k].begin(),
                                                  s_hist[k].end(), q.begin(),
                                                  0.0);
      alpha[k] = a;
      for (std::size_t i = 0; i < n; ++i) q[i] -= a * y_hist[k][i];
    }
    if (!s_hist.empty()) {
      const auto& s = s_hist.back();
      const auto& y = y_hist.back();
      double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
      double yy = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
      double gamma = yy > 0 ? sy / yy : 1.0;
      for (double& v : q) v *= gamma;
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      double b = rho_hist[k] * std::inner_product(y_hist[k].begin(),
                                                  y_hist[k].end(), q.begin(),
                                                  0.0);
      for (std::size_t i = 0; i < n; ++i) q[i] += s_hist[k][i] * (alpha[k] - b);
    }
    std::vector<double> dir(n);
    for (std::size_t i = 0; i < n; ++i) dir[i] = -q[i];

    double g_dot_d =
        std::inner_product(g.begin(), g.end(), dir.begin(), 0.0);
    if (g_dot_d >= 0) {  // not a descent direction; reset to steepest descent
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      g_dot_d = -norm2(g) * norm2(g);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    // Armijo backtracking.
    double step = 1.0;
    std::vector<double> x_new(n), g_new(n);
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * dir[i];
      f_new = eval(x_new, g_new);
      if (f_new <= f + 1e-4 * step * g_dot_d) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no further progress at machine precision

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
    if (sy > 1e-12) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    g = g_new;
    f = f_new;
  }

  model.weights.assign(x.begin(), x.begin() + dim);
  model.bias = x[dim];
  model.iterations = iter;
  model.final_grad_norm = norm2(g);
  model.converged = model.final_grad_norm <= opts.tol;
  return model;
}

double predict_proba(const MaxentModel& model,
                     const std::vector<std::pair<std::size_t, double>>& x) {
  return sigmoid(dot_sparse(model.weights, x) + model.bias);
}

bool predict(const MaxentModel& model,
             const std::vector<std::pair<std::size_t, double>>& x,
             double threshold) {
  return predict_proba(model, x) >= threshold;
}

std::string model_to_text(const MaxentModel& model,
                          const FeatureSpace* space) {
  std::ostringstream os;
  os << "spamdet-maxent v1\n";
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                (unsigned long long)(space ? space->content_hash()
                                           : model.feature_space_hash));
  os << "feature_space_hash " << hash << "\n";
  os << "C " << fmt_double(model.C) << "\n";
  os << "bias " << fmt_double(model.bias) << "\n";
  os << "iterations " << model.iterations << "\n";
  os << "grad_norm " << fmt_double(model.final_grad_norm) << "\n";
  os << "converged " << (model.converged ? 1 : 0) << "\n";
  os << "dim " << model.weights.size() << "\n";
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    if (model.weights[i] == 0.0) continue;
    // Value before name: dimension names may contain spaces.
    os << "w " << i << " " << fmt_double(model.weights[i]) << " "
       << (space ? space->dimension_name(i) : std::to_string(i)) << "\n";
  }
  return os.str();
}

MaxentModel model_from_text(const std::string& text,
                            const FeatureSpace* space) {
  std::istringstream is(text);
  std::string line;
  auto next = [&](const char* what) {
    if (!std::getline(is, line))
      throw std::runtime_error(std::string("truncated model file: ") + what);
    return line;
  };
  if (next("header") != "spamdet-maxent v1")
    throw std::runtime_error("unrecognized model file header");
  MaxentModel model;
  std::string key;
  std::string hash_hex;
  {
    std::istringstream ls(next("feature_space_hash"));
    ls >> key >> hash_hex;
    if (key != "feature_space_hash")
      throw std::runtime_error("model file missing feature_space_hash");
    model.feature_space_hash = std::stoull(hash_hex, nullptr, 16);
  }
  if (space && model.feature_space_hash != space->content_hash())
    throw std::runtime_error("model/feature-space hash mismatch");
  std::size_t dim = 0;
  int conv = 0;
  auto scalar = [&](const char* name, auto& out) {
    std::istringstream ls(next(name));
    ls >> key >> out;
    if (key != name)
      throw std::runtime_error(std::string("model file missing ") + name);
  };
  scalar("C", model.C);
  scalar("bias", model.bias);
  scalar("iterations", model.iterations);
  scalar("grad_norm", model.final_grad_norm);
  scalar("converged", conv);
  scalar("dim", dim);
  model.converged = conv != 0;
  model.weights.assign(dim, 0.0);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t index = 0;
    double value = 0;
    ls >> key >> index >> value;
    if (key != "w" || ls.fail() || index >= dim)
      throw std::runtime_error("malformed weight line: " + line);
    std::string name;
    std::getline(ls, name);
    if (!name.empty() && name[0] == ' ') name.erase(0, 1);
    if (space && space->dimension_name(index) != name)
      throw std::runtime_error("dimension name mismatch at index " +
                               std::to_string(index));
    model.weights[index] = value;
  }
  return model;
}

}  // namespace spamdet
