#include "folmi/analysis.hpp"

#include <cmath>

namespace folmi {
namespace {

// splitmix64: decorrelates (seed, index) into an independent stream seed
std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// deterministic delta stream in [-1, 1]
class DeltaStream {
 public:
  DeltaStream(std::uint64_t seed, std::uint64_t member)
      : state_(splitmix64(seed ^ splitmix64(member + 1))) {}
  double next() {
    state_ = splitmix64(state_);
    return 2.0 * (static_cast<double>(state_ >> 11) * 0x1.0p-53) - 1.0;
  }

 private:
  std::uint64_t state_;
};

}  // namespace

Matrix closed_loop(const Matrix& a, const Matrix& b, const Matrix& c,
                   const ControllerRealization& k) {
  const Index n = a.rows(), n_c = k.order();
  detail::require(a.cols() == n && b.rows() == n && c.cols() == n,
                  "closed_loop: plant dimensions inconsistent");
  detail::require(k.b_c.cols() == c.rows() && k.c_c.rows() == b.cols() &&
                      k.d_c.rows() == b.cols() && k.d_c.cols() == c.rows(),
                  "closed_loop: controller dimensions inconsistent");
  Matrix out(n + n_c, n + n_c);
  out.topLeftCorner(n, n) = a + b * k.d_c * c;
  out.topRightCorner(n, n_c) = b * k.c_c;
  out.bottomLeftCorner(n_c, n) = k.b_c * c;
  out.bottomRightCorner(n_c, n_c) = k.a_c;
  return out;
}

Matrix lemma2_matrix_direct(const Matrix& a, const Matrix& x, double alpha) {
  detail::require(alpha >= 1.0 && alpha < 2.0, "lemma2: alpha must lie in [1, 2)");
  const double th = M_PI - alpha * M_PI / 2.0;
  const double s = std::sin(th), c = std::cos(th);
  const Index n = a.rows();
  Matrix g1 = (a.transpose() * x + x * a) * s;
  Matrix g2 = (x * a - a.transpose() * x) * c;
  Matrix out(2 * n, 2 * n);
  out << g1, g2, g2.transpose(), g1;
  return out;
}

Matrix lemma2_matrix_kron(const Matrix& a, const Matrix& x, double alpha) {
  detail::require(alpha >= 1.0 && alpha < 2.0, "lemma2: alpha must lie in [1, 2)");
  const double th = M_PI - alpha * M_PI / 2.0;
  Matrix theta(2, 2);
  theta << std::sin(th), -std::cos(th), std::cos(th), std::sin(th);
  Matrix k = kron(theta.transpose(), x * a);
  return k + k.transpose();
}

Lemma2Result lemma2_check(const Matrix& a, double alpha, const SolveOptions& opts) {
  detail::require(a.rows() == a.cols(), "lemma2_check: matrix must be square");
  const double th = M_PI - alpha * M_PI / 2.0;
  const double s = std::sin(th), c = std::cos(th);
  const Index n = a.rows();

  // the test is homogeneous in X, so X >= I loses no generality
  LmiProblem prob(1e-6 * (1.0 + a.cwiseAbs().maxCoeff()));
  VarId x = prob.add_symmetric("X", n);

  AffineMatrixExpr lhs = AffineMatrixExpr::zero(2 * n, 2 * n);
  Matrix e_top = Matrix::Zero(2 * n, n), e_bot = Matrix::Zero(2 * n, n);
  e_top.topRows(n) = Matrix::Identity(n, n);
  e_bot.bottomRows(n) = Matrix::Identity(n, n);
  // (A'X + XA) sin in both diagonal blocks
  lhs.add_sym_term(s * e_top * a.transpose(), x, e_top.transpose());
  lhs.add_sym_term(s * e_bot * a.transpose(), x, e_bot.transpose());
  // (XA - A'X) cos off-diagonal and its transpose
  lhs.add_sym_term(c * e_top, x, a * e_bot.transpose());
  lhs.add_sym_term(-c * e_top * a.transpose(), x, e_bot.transpose());
  prob.add_constraint(std::move(lhs), Sense::StrictNeg, "stability");

  AffineMatrixExpr xmin(-Matrix::Identity(n, n));
  Matrix id = Matrix::Identity(n, n);
  xmin.add_term(id, x, id);
  prob.add_constraint(std::move(xmin), Sense::SemiPos, "X>=I");

  SolveOptions o = opts;
  o.classify_early_exit = true;
  SolveResult r = solve_feasibility(prob, o);
  Lemma2Result out;
  out.feasible = r.status == SolveStatus::Feasible;
  out.best_slack = r.t_star;
  if (out.feasible) out.x = r.assignment.value(x);
  return out;
}

SectorResult sector_check(const Matrix& a, double alpha, double margin) {
  Spectrum sp = spectrum(a);
  return {sp.min_abs_arg > alpha * M_PI / 2.0 + margin, sp.min_abs_arg};
}

RobustVerifyReport robust_verify(const UncertainPlant& plant, const ControllerRealization& k,
                                 std::size_t n_samples, std::uint64_t seed,
                                 std::size_t vertex_cap, double margin, bool collect_scatter) {
  RobustVerifyReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const double half_sector = plant.alpha * M_PI / 2.0;
  const Index na = plant.n() * plant.n(), nb = plant.n() * plant.l(),
              nc2 = plant.m() * plant.n();

  const MidpointRadius mra = midpoint_radius(plant.a);
  const MidpointRadius mrb = midpoint_radius(plant.b);
  const MidpointRadius mrc = midpoint_radius(plant.c);

  std::ptrdiff_t member = 0;
  auto check = [&](const Matrix& am, const Matrix& bm, const Matrix& cm,
                   const std::vector<double>& delta) {
    const Matrix acl = closed_loop(am, bm, cm, k);
    const Spectrum sp = spectrum(acl);
    const double mg = sp.min_abs_arg - half_sector;
    const bool ok = mg > margin;
    rep.pass_count += ok;
    rep.fail_count += !ok;
    if (mg < rep.worst_margin) {
      rep.worst_margin = mg;
      rep.worst_delta = delta;
      rep.worst_member = member;
    }
    if (collect_scatter)
      for (Index i = 0; i < sp.eigenvalues.size(); ++i)
        rep.scatter.push_back({sp.eigenvalues(i).real(), sp.eigenvalues(i).imag(),
                               static_cast<double>(member)});
    ++member;
  };

  auto delta_of = [](const MidpointRadius& mr, const Matrix& value) {
    std::vector<double> d;
    for (Index i = 0; i < mr.mid.rows(); ++i)
      for (Index j = 0; j < mr.mid.cols(); ++j)
        d.push_back(mr.rad(i, j) > 0 ? (value(i, j) - mr.mid(i, j)) / mr.rad(i, j) : 0.0);
    return d;
  };

  // vertex sweep: all A x B x C corner combinations unless the count explodes
  std::size_t nz = 0;
  for (const MidpointRadius* mr : {&mra, &mrb, &mrc})
    for (Index i = 0; i < mr->rad.size(); ++i) nz += (mr->rad.data()[i] > 0);
  if (nz < 63 && (std::size_t{1} << nz) <= vertex_cap) {
    for (const Matrix& av : vertices(plant.a, vertex_cap))
      for (const Matrix& bv : vertices(plant.b, vertex_cap))
        for (const Matrix& cv : vertices(plant.c, vertex_cap)) {
          std::vector<double> d = delta_of(mra, av);
          std::vector<double> db = delta_of(mrb, bv), dc = delta_of(mrc, cv);
          d.insert(d.end(), db.begin(), db.end());
          d.insert(d.end(), dc.begin(), dc.end());
          check(av, bv, cv, d);
          ++rep.vertex_count;
        }
  } else {
    rep.vertices_capped = true;
  }

  // seeded random members; stream depends only on (seed, sample index)
  std::vector<double> delta(static_cast<std::size_t>(na + nb + nc2));
  for (std::size_t i = 0; i < n_samples; ++i) {
    DeltaStream ds(seed, i);
    for (double& d : delta) d = ds.next();
    std::span<const double> all(delta);
    const Matrix am = sample_member(plant.a, all.subspan(0, na));
    const Matrix bm = sample_member(plant.b, all.subspan(na, nb));
    const Matrix cm = sample_member(plant.c, all.subspan(na + nb, nc2));
    check(am, bm, cm, delta);
    ++rep.sample_count;
  }

  rep.all_pass = rep.fail_count == 0;
  return rep;
}

}  // namespace folmi
