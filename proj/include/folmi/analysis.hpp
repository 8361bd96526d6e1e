#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "folmi/interval.hpp"
#include "folmi/lmi.hpp"
#include "folmi/matrix.hpp"
#include "folmi/solver.hpp"

namespace folmi {

struct ControllerRealization {
  Matrix a_c;  // n_c x n_c
  Matrix b_c;  // n_c x m
  Matrix c_c;  // l x n_c
  Matrix d_c;  // l x m

  Index order() const { return a_c.rows(); }
};

/// Closed-loop matrix [[A + B Dc C, B Cc], [Bc C, Ac]].
Matrix closed_loop(const Matrix& a, const Matrix& b, const Matrix& c,
                   const ControllerRealization& k);

/// The stability test matrix of the bordered form: blocks
/// [[(A'X + XA) sin t, (XA - A'X) cos t], [., (A'X + XA) sin t]].
Matrix lemma2_matrix_direct(const Matrix& a, const Matrix& x, double alpha);

/// Same matrix assembled as Sym{Theta' kron (X A)} with the rotation
/// Theta = [[sin t, -cos t], [cos t, sin t]]; entrywise equal to the
/// direct form.
Matrix lemma2_matrix_kron(const Matrix& a, const Matrix& x, double alpha);

struct Lemma2Result {
  bool feasible = false;
  std::optional<Matrix> x;  // certificate when feasible
  double best_slack = 0.0;
};

/// Necessary-and-sufficient LMI stability test for D^alpha x = A x,
/// 1 <= alpha < 2: exists X > 0 with the bordered matrix negative definite.
Lemma2Result lemma2_check(const Matrix& a, double alpha,
                          const SolveOptions& opts = {});

struct SectorResult {
  bool stable = false;
  double min_abs_arg = 0.0;
};

/// True iff every eigenvalue satisfies |arg| > alpha*pi/2 + margin.
SectorResult sector_check(const Matrix& a, double alpha, double margin = 1e-9);

struct RobustVerifyReport {
  std::size_t vertex_count = 0;
  std::size_t sample_count = 0;
  std::size_t pass_count = 0;
  std::size_t fail_count = 0;
  double worst_margin = 0.0;                 // min over members of (min|arg| - alpha pi/2)
  std::vector<double> worst_delta;           // row-major deltas (A, then B, then C) of the worst member
  std::ptrdiff_t worst_member = -1;          // index into the checked sequence
  bool vertices_capped = false;              // vertex enumeration skipped (fell back to samples)
  bool all_pass = false;
  // eigenvalue scatter: (re, im, member index) per eigenvalue, for plotting
  std::vector<std::array<double, 3>> scatter;
};

/// Sweeps all interval vertices (A x B x C combinations, capped) plus
/// n_samples seeded random members through the closed-loop sector test.
/// Deterministic for a given seed: each member's deltas derive from
/// (seed, member index) only. When collect_scatter is set the report
/// carries every member's eigenvalues.
RobustVerifyReport robust_verify(const UncertainPlant& plant, const ControllerRealization& k,
                                 std::size_t n_samples, std::uint64_t seed,
                                 std::size_t vertex_cap = 4096, double margin = 1e-9,
                                 bool collect_scatter = false);

}  // namespace folmi
