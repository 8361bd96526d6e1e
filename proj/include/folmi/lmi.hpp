#pragma once

#include <optional>
#include <string>
#include <vector>

#include "folmi/matrix.hpp"

namespace folmi {

enum class VarKind { Symmetric, Rectangular, Scalar };

struct VarId {
  int index = -1;
  bool valid() const { return index >= 0; }
};

struct DecisionVar {
  std::string name;
  VarKind kind = VarKind::Scalar;
  Index rows = 1;
  Index cols = 1;
  std::optional<double> lower_bound;  // scalar vars only
  int offset = 0;                     // first scalar component in the packed vector
  int size = 0;                       // number of scalar components
};

/// One affine term of a matrix expression. For matrix variables the
/// contribution is left * V * right (V transposed first when transpose_var
/// is set); for scalar variables it is v * (left * right).
struct Term {
  Matrix left;
  VarId var;
  Matrix right;
  bool transpose_var = false;
};

/// Affine matrix-valued expression over the declared decision variables.
/// Constraint expressions are square and are symmetrized on evaluation;
/// rectangular expressions are used as Schur borders.
class AffineMatrixExpr {
 public:
  AffineMatrixExpr() = default;
  explicit AffineMatrixExpr(Matrix constant) : constant_(std::move(constant)) {}
  static AffineMatrixExpr zero(Index rows, Index cols) {
    return AffineMatrixExpr(Matrix::Zero(rows, cols));
  }

  Index rows() const { return constant_.rows(); }
  Index cols() const { return constant_.cols(); }
  const Matrix& constant() const { return constant_; }
  Matrix& constant() { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }

  void add_term(Matrix left, VarId var, Matrix right, bool transpose_var = false);
  /// Adds left * V * right together with its transpose (right' * V' * left').
  void add_sym_term(const Matrix& left, VarId var, const Matrix& right,
                    bool transpose_var = false);
  void add_constant(const Matrix& c) { constant_ += c; }
  /// Adds c + c' (symmetric pairing of a constant contribution).
  void add_sym_constant(const Matrix& c) { constant_ += c + c.transpose(); }

 private:
  Matrix constant_;
  std::vector<Term> terms_;
};

enum class Sense {
  StrictNeg,  // expr < -eps I
  SemiNeg,    // expr <= 0
  SemiPos,    // expr >= 0
  StrictPos,  // expr > eps I
};

struct Constraint {
  AffineMatrixExpr expr;
  Sense sense = Sense::StrictNeg;
  std::string label;
};

struct Assignment {
  std::vector<Matrix> values;      // per variable, in declaration order
  std::vector<double> residuals;   // per constraint: slack beyond the requirement
  bool feasible = false;
  double best_slack = 0.0;         // max-slack certificate (>= 0 iff feasible)

  const Matrix& value(VarId id) const { return values.at(static_cast<std::size_t>(id.index)); }
};

struct VerifyLine {
  std::string label;
  double slack = 0.0;  // min-eig slack beyond the required sense/margin
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyLine> lines;
  bool all_pass = false;
  double worst_slack = 0.0;
};

class LmiProblem {
 public:
  explicit LmiProblem(double strictness_margin = 1e-7)
      : strictness_margin_(strictness_margin) {}

  VarId add_symmetric(const std::string& name, Index n);
  VarId add_rectangular(const std::string& name, Index rows, Index cols);
  VarId add_scalar(const std::string& name, std::optional<double> lower_bound = {});

  void add_constraint(AffineMatrixExpr expr, Sense sense, std::string label = {});

  const std::vector<DecisionVar>& vars() const { return vars_; }
  const DecisionVar& var(VarId id) const { return vars_.at(static_cast<std::size_t>(id.index)); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  int num_scalars() const { return num_scalars_; }
  double strictness_margin() const { return strictness_margin_; }
  void set_strictness_margin(double eps) { strictness_margin_ = eps; }

  /// Evaluates an expression at an assignment (symmetrized when square).
  Matrix eval(const AffineMatrixExpr& expr, const Assignment& a) const;

  /// Packs/unpacks between per-variable matrices and the scalar vector the
  /// backend works on. Symmetric variables use their upper triangle.
  Vector pack(const Assignment& a) const;
  Assignment unpack(const Vector& x) const;

  /// Plain-text standard-form dump (dimensions, constant blocks, coefficient
  /// blocks per scalar component) for cross-checking against other tools.
  void dump_standard_form(std::ostream& os) const;

 private:
  std::vector<DecisionVar> vars_;
  std::vector<Constraint> constraints_;
  int num_scalars_ = 0;
  double strictness_margin_;
};

/// Bordered Schur embedding: [[block, off_diag'], [off_diag, -scalar_var I]].
/// Negative definiteness of the result is equivalent to
/// block + scalar_var^{-1} off_diag' off_diag < 0 for scalar_var > 0.
AffineMatrixExpr schur_embed(const AffineMatrixExpr& block,
                             const AffineMatrixExpr& off_diag, VarId scalar_var);

VerifyReport verify_assignment(const LmiProblem& p, const Assignment& a, double tol);

}  // namespace folmi
