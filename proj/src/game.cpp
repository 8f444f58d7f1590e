#include "drg/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace drg {

namespace {
constexpr long long kMaxJointActions = 10000;  // soft limit, games here are small

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}
}  // namespace

GameShape::GameShape(int players, std::vector<int> actions)
    : num_players(players), action_counts(std::move(actions)) {
  require(num_players >= 2, "GameShape: need at least 2 players");
  require(static_cast<int>(action_counts.size()) == num_players,
          "GameShape: action_counts size must equal num_players");
  long long prod = 1;
  for (int a : action_counts) {
    require(a >= 2, "GameShape: every player needs at least 2 actions");
    prod *= a;
    require(prod <= kMaxJointActions, "GameShape: joint action space exceeds supported size");
  }
}

long long GameShape::joint_actions() const {
  long long prod = 1;
  for (int a : action_counts) prod *= a;
  return prod;
}

long long GameShape::vec_length() const { return num_players * joint_actions(); }

PayoffTensor::PayoffTensor(GameShape shape, std::vector<double> vec_entries)
    : shape_(std::move(shape)), vec_(std::move(vec_entries)) {
  require(static_cast<long long>(vec_.size()) == shape_.vec_length(),
          "PayoffTensor: entry count must be N * prod a_i");
  for (double v : vec_) require(std::isfinite(v), "PayoffTensor: entries must be finite");
}

PayoffTensor PayoffTensor::zeros(const GameShape& shape) {
  return PayoffTensor(shape, std::vector<double>(shape.vec_length(), 0.0));
}

long long PayoffTensor::index(int player, std::span<const int> actions) const {
  require(player >= 0 && player < shape_.num_players, "PayoffTensor: player index out of range");
  require(static_cast<int>(actions.size()) == shape_.num_players,
          "PayoffTensor: need one action per player");
  long long idx = 0;
  for (int k = 0; k < shape_.num_players; ++k) {
    require(actions[k] >= 0 && actions[k] < shape_.action_counts[k],
            "PayoffTensor: action index out of range");
    idx = idx * shape_.action_counts[k] + actions[k];
  }
  return player * shape_.joint_actions() + idx;
}

double PayoffTensor::entry(int player, std::span<const int> actions) const {
  return vec_[index(player, actions)];
}

double& PayoffTensor::entry(int player, std::span<const int> actions) {
  return vec_[index(player, actions)];
}

MixedStrategy::MixedStrategy(std::vector<double> probs) : probs_(std::move(probs)) {
  require(!probs_.empty(), "MixedStrategy: empty probability vector");
  double sum = 0.0;
  for (double p : probs_) {
    require(std::isfinite(p), "MixedStrategy: probabilities must be finite");
    require(p >= -1e-12, "MixedStrategy: negative probability");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= 1e-9, "MixedStrategy: probabilities must sum to 1");
  for (double& p : probs_) p = std::max(p, 0.0) / sum;
}

MixedStrategy MixedStrategy::uniform(int actions) {
  return MixedStrategy(std::vector<double>(actions, 1.0 / actions));
}

MixedStrategy MixedStrategy::pure(int actions, int action) {
  std::vector<double> p(actions, 0.0);
  p.at(action) = 1.0;
  return MixedStrategy(std::move(p));
}

void StrategyProfile::check_shape(const GameShape& shape) const {
  require(static_cast<int>(strategies.size()) == shape.num_players,
          "StrategyProfile: need one strategy per player");
  for (int i = 0; i < shape.num_players; ++i)
    require(strategies[i].actions() == shape.action_counts[i],
            "StrategyProfile: strategy length mismatch for player " + std::to_string(i));
}

double expected_payoff(const PayoffTensor& p, const StrategyProfile& x, int player) {
  const GameShape& shape = p.shape();
  x.check_shape(shape);
  require(player >= 0 && player < shape.num_players, "expected_payoff: player index out of range");

  const long long joint = shape.joint_actions();
  const std::vector<double>& vec = p.vec();
  const long long base = player * joint;

  // Walk joint actions in row-major order, tracking the product of the
  // players' probabilities incrementally via mixed-radix digits.
  std::vector<int> digits(shape.num_players, 0);
  double total = 0.0;
  for (long long j = 0; j < joint; ++j) {
    double w = 1.0;
    for (int k = 0; k < shape.num_players; ++k) w *= x.strategies[k][digits[k]];
    total += w * vec[base + j];
    for (int k = shape.num_players - 1; k >= 0; --k) {
      if (++digits[k] < shape.action_counts[k]) break;
      digits[k] = 0;
    }
  }
  return total;
}

Matrix payoff_operator(const StrategyProfile& x, int player, const GameShape& shape) {
  if (static_cast<int>(x.strategies.size()) != shape.num_players)
    throw std::invalid_argument("payoff_operator: need one strategy per player");
  for (int k = 0; k < shape.num_players; ++k) {
    if (k == player) continue;  // x^i is ignored
    if (x.strategies[k].actions() != shape.action_counts[k])
      throw std::invalid_argument("payoff_operator: opponent strategy length mismatch");
  }
  if (player < 0 || player >= shape.num_players)
    throw std::invalid_argument("payoff_operator: player index out of range");

  const long long joint = shape.joint_actions();
  Matrix y(static_cast<int>(shape.vec_length()), shape.action_counts[player]);

  std::vector<int> digits(shape.num_players, 0);
  for (long long j = 0; j < joint; ++j) {
    double w = 1.0;
    for (int k = 0; k < shape.num_players; ++k)
      if (k != player) w *= x.strategies[k][digits[k]];
    y(static_cast<int>(player * joint + j), digits[player]) = w;
    for (int k = shape.num_players - 1; k >= 0; --k) {
      if (++digits[k] < shape.action_counts[k]) break;
      digits[k] = 0;
    }
  }
  return y;
}

}  // namespace drg
