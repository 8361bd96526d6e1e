#include "folmi/solver.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace folmi {
namespace {

struct CompiledBlock {
  Matrix g0;                                  // constant part of G(x) = g0 + sum x_q Fq
  std::vector<std::pair<int, Matrix>> coeff;  // (scalar component, Fq), nonzero only
  double margin = 0.0;                        // required: G(x) >= margin I
  Index dim() const { return g0.rows(); }
};

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

std::vector<CompiledBlock> compile(const LmiProblem& p) {
  std::vector<CompiledBlock> blocks;
  const double eps = p.strictness_margin();
  const int nx = p.num_scalars();
  Assignment zero = p.unpack(Vector::Zero(nx));

  for (const Constraint& c : p.constraints()) {
    double sign = 0.0, margin = 0.0;
    switch (c.sense) {
      case Sense::StrictNeg: sign = -1.0; margin = eps; break;
      case Sense::SemiNeg:   sign = -1.0; margin = 0.0; break;
      case Sense::SemiPos:   sign = +1.0; margin = 0.0; break;
      case Sense::StrictPos: sign = +1.0; margin = eps; break;
    }
    CompiledBlock b;
    b.g0 = sign * sym(p.eval(c.expr, zero));
    b.margin = margin;
    // coefficient of each scalar component, assembled term by term
    std::vector<Matrix> acc(static_cast<std::size_t>(nx));
    std::vector<bool> touched(static_cast<std::size_t>(nx), false);
    const Index d = c.expr.rows();
    for (const Term& t : c.expr.terms()) {
      const DecisionVar& v = p.var(t.var);
      for (int q = 0; q < v.size; ++q) {
        Matrix basis;
        if (v.kind == VarKind::Scalar) {
          basis = Matrix::Ones(1, 1);
        } else if (v.kind == VarKind::Symmetric) {
          basis = Matrix::Zero(v.rows, v.cols);
          Index i = 0, rem = q;
          while (rem >= v.cols - i) { rem -= v.cols - i; ++i; }
          basis(i, i + rem) = 1.0;
          basis(i + rem, i) = 1.0;
        } else {
          basis = Matrix::Zero(v.rows, v.cols);
          basis(q / v.cols, q % v.cols) = 1.0;
        }
        Matrix contrib;
        if (v.kind == VarKind::Scalar)
          contrib = t.left * t.right;
        else if (t.transpose_var)
          contrib = t.left * basis.transpose() * t.right;
        else
          contrib = t.left * basis * t.right;
        const int slot = v.offset + q;
        if (!touched[slot]) { acc[slot] = Matrix::Zero(d, d); touched[slot] = true; }
        acc[slot] += contrib;
      }
    }
    for (int q = 0; q < nx; ++q)
      if (touched[q]) {
        Matrix fq = sign * sym(acc[q]);
        if (fq.cwiseAbs().maxCoeff() > 0) b.coeff.emplace_back(q, std::move(fq));
      }
    blocks.push_back(std::move(b));
  }
  for (const DecisionVar& v : p.vars()) {
    if (!v.lower_bound) continue;
    CompiledBlock b;
    b.g0 = Matrix::Constant(1, 1, -*v.lower_bound);
    b.coeff.emplace_back(v.offset, Matrix::Ones(1, 1));
    b.margin = 0.0;
    blocks.push_back(std::move(b));
  }
  return blocks;
}

Matrix eval_block(const CompiledBlock& b, const Vector& x) {
  Matrix s = b.g0;
  for (const auto& [q, fq] : b.coeff) s += x(q) * fq;
  return s;
}

double min_slack(const std::vector<CompiledBlock>& blocks, const Vector& x) {
  double t = std::numeric_limits<double>::infinity();
  for (const CompiledBlock& b : blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(eval_block(b, x), Eigen::EigenvaluesOnly);
    t = std::min(t, es.eigenvalues().minCoeff() - b.margin);
  }
  return t;
}

bool interior(const std::vector<CompiledBlock>& blocks, const Vector& x, double t,
              double t_cap, double x_cap) {
  if (t_cap - t <= 0) return false;
  for (Index j = 0; j < x.size(); ++j)
    if (x_cap - x(j) <= 0 || x(j) + x_cap <= 0) return false;
  for (const CompiledBlock& b : blocks) {
    Matrix s = eval_block(b, x) - (b.margin + t) * Matrix::Identity(b.dim(), b.dim());
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) return false;
  }
  return true;
}

// barrier value for max-slack phase; +inf outside the interior
double barrier_value(const std::vector<CompiledBlock>& blocks, const Vector& x, double t,
                     double mu, double t_cap, double x_cap) {
  double v = -t / mu;
  for (const CompiledBlock& b : blocks) {
    Matrix s = eval_block(b, x) - (b.margin + t) * Matrix::Identity(b.dim(), b.dim());
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    double ld = 0.0;
    for (Index i = 0; i < s.rows(); ++i) ld += std::log(llt.matrixL()(i, i));
    v -= 2.0 * ld;
  }
  if (t_cap - t <= 0) return std::numeric_limits<double>::infinity();
  v -= std::log(t_cap - t);
  for (Index j = 0; j < x.size(); ++j) {
    if (x_cap - x(j) <= 0 || x(j) + x_cap <= 0) return std::numeric_limits<double>::infinity();
    v -= std::log(x_cap - x(j)) + std::log(x(j) + x_cap);
  }
  return v;
}

Vector solve_newton_system(Matrix& h, const Vector& g) {
  const Index n = h.rows();
  double ridge = 1e-14 * (1.0 + h.diagonal().cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 12; ++attempt) {
    Matrix hr = h + ridge * Matrix::Identity(n, n);
    Eigen::LLT<Matrix> llt(hr);
    if (llt.info() == Eigen::Success) return llt.solve(-g);
    ridge *= 100.0;
  }
  return h.fullPivLu().solve(-g);
}

}  // namespace

SolveResult solve_feasibility(const LmiProblem& p, const SolveOptions& opts) {
  SolveResult res;
  const std::vector<CompiledBlock> blocks = compile(p);
  const int nx = p.num_scalars();
  double degree = 1.0 + 2.0 * nx;
  for (const CompiledBlock& b : blocks) degree += static_cast<double>(b.dim());

  Vector x = Vector::Zero(nx);
  if (opts.warm_start.size() == nx) x = opts.warm_start;
  double t = min_slack(blocks, x);
  if (!std::isfinite(t)) {
    res.message = "initial slack not finite";
    return res;
  }
  t = std::min(t - 1.0, 2.0 * t - 1.0);
  double mu = std::max(1.0, std::abs(t));
  int iters = 0;
  bool decided = false;
  bool decided_feasible = false;

  // phase 1: maximize slack t
  while (iters < opts.max_newton) {
    if (opts.classify_early_exit) {
      if (t > opts.accept_slack + 1e-9) { decided = true; decided_feasible = true; break; }
      if (t + mu * degree < opts.accept_slack - 1e-9 && mu * degree < 1e-7) {
        decided = true; decided_feasible = false; break;
      }
    }
    if (mu * degree < opts.gap_tol) break;

    Vector g = Vector::Zero(nx + 1);
    Matrix h = Matrix::Zero(nx + 1, nx + 1);
    g(nx) = -1.0 / mu;
    bool numeric_bad = false;
    for (const CompiledBlock& b : blocks) {
      const Index d = b.dim();
      Matrix s = eval_block(b, x) - (b.margin + t) * Matrix::Identity(d, d);
      Eigen::LLT<Matrix> llt(s);
      if (llt.info() != Eigen::Success) { numeric_bad = true; break; }
      Matrix si = llt.solve(Matrix::Identity(d, d));
      std::vector<Matrix> w(b.coeff.size());
      for (std::size_t a = 0; a < b.coeff.size(); ++a) {
        w[a] = si * b.coeff[a].second;
        g(b.coeff[a].first) -= w[a].trace();
      }
      g(nx) += si.trace();
      for (std::size_t a = 0; a < b.coeff.size(); ++a) {
        const int qa = b.coeff[a].first;
        for (std::size_t bb = a; bb < b.coeff.size(); ++bb) {
          const int qb = b.coeff[bb].first;
          const double v = w[a].cwiseProduct(w[bb].transpose()).sum();
          h(qa, qb) += v;
          if (qb != qa) h(qb, qa) += v;
        }
        const double v = w[a].cwiseProduct(si.transpose()).sum();
        h(qa, nx) -= v;
        h(nx, qa) -= v;
      }
      h(nx, nx) += si.cwiseProduct(si.transpose()).sum();
    }
    if (numeric_bad) break;
    g(nx) += 1.0 / (opts.t_cap - t);
    h(nx, nx) += 1.0 / ((opts.t_cap - t) * (opts.t_cap - t));
    for (int j = 0; j < nx; ++j) {
      g(j) += 1.0 / (opts.x_cap - x(j)) - 1.0 / (x(j) + opts.x_cap);
      h(j, j) += 1.0 / ((opts.x_cap - x(j)) * (opts.x_cap - x(j))) +
                 1.0 / ((x(j) + opts.x_cap) * (x(j) + opts.x_cap));
    }
    if (!g.allFinite() || !h.allFinite()) break;

    Vector dz = solve_newton_system(h, g);
    const double lam2 = -g.dot(dz);
    double step = 1.0;
    const double f0 = barrier_value(blocks, x, t, mu, opts.t_cap, opts.x_cap);
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      Vector xn = x + step * dz.head(nx);
      const double tn = t + step * dz(nx);
      if (interior(blocks, xn, tn, opts.t_cap, opts.x_cap)) {
        const double fn = barrier_value(blocks, xn, tn, mu, opts.t_cap, opts.x_cap);
        if (fn <= f0 - 0.25 * step * lam2 + 1e-12 * std::abs(f0)) {
          x = std::move(xn);
          t = tn;
          moved = true;
          break;
        }
      }
      step *= 0.5;
    }
    ++iters;
    if (lam2 < 0.25 || !moved) mu /= 10.0;
  }

  res.newton_iterations = iters;
  res.t_star = t;
  const bool feasible = decided ? decided_feasible : (t >= opts.accept_slack);

  // phase 2: optional linear objective at a fixed slack floor
  if (feasible && opts.objective.size() == nx) {
    double floor = opts.objective_slack_floor;
    if (!std::isfinite(floor)) floor = std::min(t / 2.0, 0.1);
    floor = std::min(floor, t * 0.95);
    std::vector<CompiledBlock> floored = blocks;
    for (CompiledBlock& b : floored) b.margin += floor;
    double mu2 = std::max(1.0, std::abs(opts.objective.dot(x)));
    int it2 = 0;
    while (mu2 * degree > opts.gap_tol && it2 + iters < 2 * opts.max_newton) {
      Vector g = opts.objective / mu2;
      Matrix h = Matrix::Zero(nx, nx);
      bool numeric_bad = false;
      for (const CompiledBlock& b : floored) {
        const Index d = b.dim();
        Matrix s = eval_block(b, x) - b.margin * Matrix::Identity(d, d);
        Eigen::LLT<Matrix> llt(s);
        if (llt.info() != Eigen::Success) { numeric_bad = true; break; }
        Matrix si = llt.solve(Matrix::Identity(d, d));
        std::vector<Matrix> w(b.coeff.size());
        for (std::size_t a = 0; a < b.coeff.size(); ++a) {
          w[a] = si * b.coeff[a].second;
          g(b.coeff[a].first) -= w[a].trace();
        }
        for (std::size_t a = 0; a < b.coeff.size(); ++a) {
          const int qa = b.coeff[a].first;
          for (std::size_t bb = a; bb < b.coeff.size(); ++bb) {
            const int qb = b.coeff[bb].first;
            const double v = w[a].cwiseProduct(w[bb].transpose()).sum();
            h(qa, qb) += v;
            if (qb != qa) h(qb, qa) += v;
          }
        }
      }
      if (numeric_bad) break;
      for (int j = 0; j < nx; ++j) {
        g(j) += 1.0 / (opts.x_cap - x(j)) - 1.0 / (x(j) + opts.x_cap);
        h(j, j) += 1.0 / ((opts.x_cap - x(j)) * (opts.x_cap - x(j))) +
                   1.0 / ((x(j) + opts.x_cap) * (x(j) + opts.x_cap));
      }
      if (!g.allFinite() || !h.allFinite()) break;
      Vector dx = solve_newton_system(h, g);
      const double lam2 = -g.dot(dx);
      auto obj_barrier = [&](const Vector& xv) {
        double v = opts.objective.dot(xv) / mu2;
        for (const CompiledBlock& b : floored) {
          Matrix s = eval_block(b, xv) - b.margin * Matrix::Identity(b.dim(), b.dim());
          Eigen::LLT<Matrix> llt(s);
          if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
          double ld = 0.0;
          for (Index i = 0; i < s.rows(); ++i) ld += std::log(llt.matrixL()(i, i));
          v -= 2.0 * ld;
        }
        for (Index j = 0; j < xv.size(); ++j) {
          if (opts.x_cap - xv(j) <= 0 || xv(j) + opts.x_cap <= 0)
            return std::numeric_limits<double>::infinity();
          v -= std::log(opts.x_cap - xv(j)) + std::log(xv(j) + opts.x_cap);
        }
        return v;
      };
      const double f0 = obj_barrier(x);
      double step = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        Vector xn = x + step * dx;
        const double fn = obj_barrier(xn);
        if (std::isfinite(fn) && fn <= f0 - 0.25 * step * lam2 + 1e-12 * std::abs(f0)) {
          x = std::move(xn);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      ++it2;
      if (lam2 < 0.25 || !moved) mu2 /= 10.0;
    }
    res.newton_iterations += it2;
  }

  res.assignment = p.unpack(x);
  res.assignment.best_slack = feasible ? min_slack(blocks, x) : t;
  res.assignment.feasible = feasible;
  res.t_star = res.assignment.best_slack;
  for (const Constraint& c : p.constraints()) {
    Matrix m = p.eval(c.expr, res.assignment);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    double slack = 0.0;
    switch (c.sense) {
      case Sense::StrictNeg: slack = -es.eigenvalues().maxCoeff() - p.strictness_margin(); break;
      case Sense::SemiNeg:   slack = -es.eigenvalues().maxCoeff(); break;
      case Sense::SemiPos:   slack = es.eigenvalues().minCoeff(); break;
      case Sense::StrictPos: slack = es.eigenvalues().minCoeff() - p.strictness_margin(); break;
    }
    res.assignment.residuals.push_back(slack);
  }
  res.status = feasible ? SolveStatus::Feasible : SolveStatus::Infeasible;
  if (!feasible)
    res.message = "infeasible: best uniform slack " + std::to_string(res.t_star);
  return res;
}

}  // namespace folmi
