#pragma once

#include <span>
#include <vector>

#include "drg/matrix.hpp"

namespace drg {

// Shape of a finite N-player game: N >= 2 players, each with >= 2 actions.
struct GameShape {
  int num_players = 0;
  std::vector<int> action_counts;

  GameShape() = default;
  GameShape(int players, std::vector<int> actions);

  // Number of pure joint actions, prod a_i.
  long long joint_actions() const;
  // Length of vec(P): N * prod a_i.
  long long vec_length() const;

  bool operator==(const GameShape&) const = default;
};

// Payoff array for all players over pure joint actions. Stored directly in
// the canonical vectorized order: player index outermost (slowest-varying),
// joint action row-major with the last player's action fastest.
class PayoffTensor {
 public:
  PayoffTensor(GameShape shape, std::vector<double> vec_entries);

  static PayoffTensor zeros(const GameShape& shape);

  const GameShape& shape() const { return shape_; }

  // Canonical vectorization; unvec is the PayoffTensor constructor itself.
  const std::vector<double>& vec() const { return vec_; }

  // Flat index of (player, joint action).
  long long index(int player, std::span<const int> actions) const;
  double entry(int player, std::span<const int> actions) const;
  double& entry(int player, std::span<const int> actions);

 private:
  GameShape shape_;
  std::vector<double> vec_;
};

// Point on the probability simplex over one player's actions. Inputs whose
// components sum to 1 within 1e-9 are renormalized; worse are rejected.
class MixedStrategy {
 public:
  explicit MixedStrategy(std::vector<double> probs);

  static MixedStrategy uniform(int actions);
  static MixedStrategy pure(int actions, int action);

  const std::vector<double>& probs() const { return probs_; }
  int actions() const { return static_cast<int>(probs_.size()); }
  double operator[](int a) const { return probs_[a]; }

 private:
  std::vector<double> probs_;
};

struct StrategyProfile {
  std::vector<MixedStrategy> strategies;

  void check_shape(const GameShape& shape) const;
};

// Expected payoff of `player` under mixed profile x (eq. of multilinear form).
double expected_payoff(const PayoffTensor& p, const StrategyProfile& x, int player);

// The (N prod a_k) x a_i matrix Y with vec(P)^T Y u = expected payoff of
// `player` at (x^{-i}, u). Only the opponents' strategies in x are read.
Matrix payoff_operator(const StrategyProfile& x, int player, const GameShape& shape);

}  // namespace drg
