#include "folmi/lmi.hpp"

#include <ostream>

#include <Eigen/Eigenvalues>

namespace folmi {

void AffineMatrixExpr::add_term(Matrix left, VarId var, Matrix right, bool transpose_var) {
  detail::require(var.valid(), "AffineMatrixExpr: invalid variable reference");
  detail::require(left.rows() == rows() && right.cols() == cols(),
                  "AffineMatrixExpr: term does not match expression dimensions");
  terms_.push_back({std::move(left), var, std::move(right), transpose_var});
}

void AffineMatrixExpr::add_sym_term(const Matrix& left, VarId var, const Matrix& right,
                                    bool transpose_var) {
  add_term(left, var, right, transpose_var);
  add_term(right.transpose(), var, left.transpose(), !transpose_var);
}

VarId LmiProblem::add_symmetric(const std::string& name, Index n) {
  detail::require(n >= 1, "add_symmetric: dimension must be positive");
  DecisionVar v{name, VarKind::Symmetric, n, n, {}, num_scalars_,
                static_cast<int>(n * (n + 1) / 2)};
  vars_.push_back(std::move(v));
  num_scalars_ += vars_.back().size;
  return {static_cast<int>(vars_.size()) - 1};
}

VarId LmiProblem::add_rectangular(const std::string& name, Index rows, Index cols) {
  detail::require(rows >= 1 && cols >= 1, "add_rectangular: dimensions must be positive");
  DecisionVar v{name, VarKind::Rectangular, rows, cols, {}, num_scalars_,
                static_cast<int>(rows * cols)};
  vars_.push_back(std::move(v));
  num_scalars_ += vars_.back().size;
  return {static_cast<int>(vars_.size()) - 1};
}

VarId LmiProblem::add_scalar(const std::string& name, std::optional<double> lower_bound) {
  DecisionVar v{name, VarKind::Scalar, 1, 1, lower_bound, num_scalars_, 1};
  vars_.push_back(std::move(v));
  num_scalars_ += 1;
  return {static_cast<int>(vars_.size()) - 1};
}

void LmiProblem::add_constraint(AffineMatrixExpr expr, Sense sense, std::string label) {
  detail::require(expr.rows() == expr.cols(), "add_constraint: expression must be square");
  for (const Term& t : expr.terms())
    detail::require(t.var.index >= 0 && t.var.index < static_cast<int>(vars_.size()),
                    "add_constraint: expression references an undeclared variable");
  if (label.empty()) label = "c" + std::to_string(constraints_.size());
  constraints_.push_back({std::move(expr), sense, std::move(label)});
}

Matrix LmiProblem::eval(const AffineMatrixExpr& expr, const Assignment& a) const {
  Matrix m = expr.constant();
  for (const Term& t : expr.terms()) {
    const DecisionVar& v = var(t.var);
    const Matrix& val = a.value(t.var);
    if (v.kind == VarKind::Scalar)
      m += val(0, 0) * (t.left * t.right);
    else if (t.transpose_var)
      m += t.left * val.transpose() * t.right;
    else
      m += t.left * val * t.right;
  }
  if (m.rows() == m.cols()) m = 0.5 * (m + m.transpose()).eval();
  return m;
}

Vector LmiProblem::pack(const Assignment& a) const {
  Vector x(num_scalars_);
  for (const DecisionVar& v : vars_) {
    const Matrix& m = a.values.at(&v - vars_.data());
    int q = v.offset;
    if (v.kind == VarKind::Symmetric) {
      for (Index i = 0; i < v.rows; ++i)
        for (Index j = i; j < v.cols; ++j) x(q++) = m(i, j);
    } else {
      for (Index i = 0; i < v.rows; ++i)
        for (Index j = 0; j < v.cols; ++j) x(q++) = m(i, j);
    }
  }
  return x;
}

Assignment LmiProblem::unpack(const Vector& x) const {
  Assignment a;
  a.values.reserve(vars_.size());
  for (const DecisionVar& v : vars_) {
    Matrix m(v.rows, v.cols);
    int q = v.offset;
    if (v.kind == VarKind::Symmetric) {
      for (Index i = 0; i < v.rows; ++i)
        for (Index j = i; j < v.cols; ++j) {
          m(i, j) = x(q);
          m(j, i) = x(q);
          ++q;
        }
    } else {
      for (Index i = 0; i < v.rows; ++i)
        for (Index j = 0; j < v.cols; ++j) m(i, j) = x(q++);
    }
    a.values.push_back(std::move(m));
  }
  return a;
}

AffineMatrixExpr schur_embed(const AffineMatrixExpr& block, const AffineMatrixExpr& off_diag,
                             VarId scalar_var) {
  detail::require(block.rows() == block.cols(), "schur_embed: block must be square");
  detail::require(off_diag.cols() == block.cols(),
                  "schur_embed: off_diag column count must match block dimension");
  const Index d = block.rows();
  const Index r = off_diag.rows();
  const Index full = d + r;

  Matrix top = Matrix::Zero(full, d);     // embeds a d-row object into rows 0..d
  top.topRows(d) = Matrix::Identity(d, d);
  Matrix bot = Matrix::Zero(full, r);     // embeds an r-row object into rows d..d+r
  bot.bottomRows(r) = Matrix::Identity(r, r);

  AffineMatrixExpr out = AffineMatrixExpr::zero(full, full);
  out.constant().topLeftCorner(d, d) = block.constant();
  out.constant().bottomLeftCorner(r, d) = off_diag.constant();
  out.constant().topRightCorner(d, r) = off_diag.constant().transpose();
  for (const Term& t : block.terms())
    out.add_term(top * t.left, t.var, t.right * top.transpose(), t.transpose_var);
  for (const Term& t : off_diag.terms()) {
    out.add_term(bot * t.left, t.var, t.right * top.transpose(), t.transpose_var);
    out.add_term(top * t.right.transpose(), t.var, t.left.transpose() * bot.transpose(),
                 !t.transpose_var);
  }
  out.add_term(bot, scalar_var, -bot.transpose());
  return out;
}

VerifyReport verify_assignment(const LmiProblem& p, const Assignment& a, double tol) {
  detail::require(a.values.size() == p.vars().size(),
                  "verify_assignment: assignment does not cover all variables");
  VerifyReport rep;
  rep.all_pass = true;
  rep.worst_slack = std::numeric_limits<double>::infinity();
  const double eps = p.strictness_margin();
  for (const Constraint& c : p.constraints()) {
    Matrix m = p.eval(c.expr, a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    double slack = 0.0;
    switch (c.sense) {
      case Sense::StrictNeg: slack = -es.eigenvalues().maxCoeff() - eps; break;
      case Sense::SemiNeg:   slack = -es.eigenvalues().maxCoeff(); break;
      case Sense::SemiPos:   slack = es.eigenvalues().minCoeff(); break;
      case Sense::StrictPos: slack = es.eigenvalues().minCoeff() - eps; break;
    }
    VerifyLine line{c.label, slack, slack >= -tol};
    rep.all_pass = rep.all_pass && line.pass;
    rep.worst_slack = std::min(rep.worst_slack, slack);
    rep.lines.push_back(std::move(line));
  }
  for (const DecisionVar& v : p.vars()) {
    if (!v.lower_bound) continue;
    const double val = a.values.at(&v - p.vars().data())(0, 0);
    const double slack = val - *v.lower_bound;
    VerifyLine line{v.name + ">=lb", slack, slack >= -tol};
    rep.all_pass = rep.all_pass && line.pass;
    rep.worst_slack = std::min(rep.worst_slack, slack);
    rep.lines.push_back(std::move(line));
  }
  return rep;
}

void LmiProblem::dump_standard_form(std::ostream& os) const {
  os << "lmi standard form: " << num_scalars_ << " scalar components, "
     << constraints_.size() << " constraints\n";
  for (const DecisionVar& v : vars_) {
    os << "var " << v.name << " kind=";
    switch (v.kind) {
      case VarKind::Symmetric: os << "symmetric(" << v.rows << ")"; break;
      case VarKind::Rectangular: os << "rectangular(" << v.rows << "x" << v.cols << ")"; break;
      case VarKind::Scalar: os << "scalar"; break;
    }
    os << " offset=" << v.offset << " size=" << v.size;
    if (v.lower_bound) os << " lb=" << *v.lower_bound;
    os << "\n";
  }
  Assignment zero = unpack(Vector::Zero(num_scalars_));
  for (const Constraint& c : constraints_) {
    os << "constraint " << c.label << " dim=" << c.expr.rows() << " sense=";
    switch (c.sense) {
      case Sense::StrictNeg: os << "< -epsI"; break;
      case Sense::SemiNeg: os << "<= 0"; break;
      case Sense::SemiPos: os << ">= 0"; break;
      case Sense::StrictPos: os << "> epsI"; break;
    }
    os << "\nF0:\n" << eval(c.expr, zero) << "\n";
    Vector e = Vector::Zero(num_scalars_);
    for (int q = 0; q < num_scalars_; ++q) {
      e.setZero();
      e(q) = 1.0;
      Matrix fq = eval(c.expr, unpack(e)) - eval(c.expr, zero);
      if (fq.cwiseAbs().maxCoeff() > 0) os << "F" << (q + 1) << ":\n" << fq << "\n";
    }
  }
}

}  // namespace folmi
