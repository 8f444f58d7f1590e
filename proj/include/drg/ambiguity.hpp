#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drg/game.hpp"
#include "drg/matrix.hpp"

namespace drg {

// Support polytope U = {P : W vec(P) <= h}.
struct PolyhedralSupport {
  Matrix w;
  std::vector<double> h;

  int num_rows() const { return w.rows; }
  int dim() const { return w.cols; }
};

// Moment ambiguity set: polyhedral support, fixed mean, L1 mean-deviation cap.
struct AmbiguitySet {
  GameShape shape;
  PolyhedralSupport support;
  std::vector<double> mean;
  double mad_cap = 0.0;  // s
};

// Interval-uncertain parameters pushed through an affine map into payoff
// space: vec(P) = A t + b with lo <= t <= hi.
struct AffineBoxUncertainty {
  std::vector<std::string> names;
  std::vector<double> lo;
  std::vector<double> hi;
  Matrix map;  // A, (N prod a_i) x k
  std::vector<double> offset;  // b
};

struct DiscreteDistribution {
  std::vector<PayoffTensor> atoms;
  std::vector<double> probs;
};

struct ValidationCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool pass() const;
  std::string summary() const;
};

// Exact polyhedral description of the affine image of the box: the box
// inequalities lifted through the pseudoinverse of A plus equality pairs for
// the directions A cannot reach. Exact when A has full column rank; throws
// otherwise.
PolyhedralSupport build_support_from_box(const AffineBoxUncertainty& u);

// Per-coordinate min/max of vec(P) over the support, via 2*dim LPs.
// nullopt on an infeasible or unbounded support.
struct CoordinateBounds {
  std::vector<double> lo;
  std::vector<double> hi;
};
std::optional<CoordinateBounds> coordinate_bounds(const PolyhedralSupport& support);

// Checks support nonemptiness and boundedness, mean membership, and s >= 0.
ValidationReport validate(const AmbiguitySet& f, double tol = 1e-9);

// True iff every atom lies in the support, the mixture mean equals m, and
// the mean absolute deviation is within s (all up to tol).
bool is_member(const DiscreteDistribution& q, const AmbiguitySet& f, double tol = 1e-9);

}  // namespace drg
