#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drg/ambiguity.hpp"
#include "drg/game.hpp"
#include "drg/risk.hpp"

namespace drg {

// A parsed game document: validated ambiguity set, risk levels, and the
// optional pieces needed to re-emit the file in canonical form.
struct GameDefinition {
  AmbiguitySet f;
  RiskProfile risk{std::vector<double>{}};
  std::optional<PayoffTensor> nominal;
  std::optional<AffineBoxUncertainty> box;  // present when the support came from a box
};

// JSON game documents; schema in docs/game_format.md. parse rejects
// malformed documents; it does not run ambiguity validation (use validate()).
GameDefinition parse_game(const std::string& text);
GameDefinition load_game(const std::string& path);

// Canonical serialization: fixed key order, shortest round-trip numbers.
// parse(emit(g)) re-emits byte-identically.
std::string emit_game(const GameDefinition& g);

struct InspectionParams {
  double wage = 15.0;
  double g_lo = 8.0, g_hi = 12.0;   // work cost interval
  double v_lo = 16.0, v_hi = 24.0;  // work value interval
  double h_lo = 4.0, h_hi = 6.0;    // inspection cost interval
  double s = 4.0;
  // Mean payoff vector; interval midpoints ("nominal") when absent.
  std::optional<std::vector<double>> explicit_mean;
};

struct InspectionGame {
  AmbiguitySet f;
  PayoffTensor nominal;
  AffineBoxUncertainty box;
};

// Two-player inspection game: row player is the employee (Shirk/Work),
// column player the employer (Inspect/NotInspect); payoffs affine in the
// uncertain (g, v, h).
InspectionGame build_inspection_game(const InspectionParams& p);

GameDefinition inspection_game_definition(const InspectionParams& p, double eps1, double eps2);

}  // namespace drg
