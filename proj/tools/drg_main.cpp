// drg: command-line front end for the distributionally robust game solver.
// Talks to the core exclusively through the C API in drg.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "drg.h"

namespace {

using njson = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// Round every float in the document to 9 significant digits, the
// artifact-wide output precision.
void round9(njson& j) {
  if (j.is_number_float()) {
    j = std::strtod(fmt9(j.get<double>()).c_str(), nullptr);
  } else if (j.is_array() || j.is_object()) {
    for (auto& child : j) round9(child);
  }
}

std::string owned_string(char* s) {
  std::string out = s == nullptr ? "" : s;
  drg_string_free(s);
  return out;
}

struct GameHandle {
  drg_game* game = nullptr;
  ~GameHandle() { drg_game_free(game); }
};

int report_error(int rc) {
  std::cerr << "error: " << drg_last_error() << "\n";
  return rc == DRG_ERR_VALIDATION ? kExitValidation : kExitUsage;
}

std::vector<double> parse_profile(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad profile entry: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty profile");
  return out;
}

void print_json(const std::string& text) {
  njson j = njson::parse(text);
  round9(j);
  std::cout << j.dump(2) << "\n";
}

int cmd_validate(const std::string& file) {
  GameHandle h;
  if (int rc = drg_game_from_file(file.c_str(), &h.game); rc != DRG_OK) return report_error(rc);
  char* report = nullptr;
  int pass = 0;
  if (int rc = drg_validate(h.game, &report, &pass); rc != DRG_OK) return report_error(rc);
  print_json(owned_string(report));
  if (pass == 0) {
    std::cerr << "validation failed\n";
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_best_response(const std::string& file, int player, const std::string& profile_csv,
                      const std::string& format) {
  GameHandle h;
  if (int rc = drg_game_from_file(file.c_str(), &h.game); rc != DRG_OK) return report_error(rc);
  std::vector<double> profile = parse_profile(profile_csv);
  char* out = nullptr;
  if (int rc = drg_best_response(h.game, player, profile.data(), profile.size(), &out);
      rc != DRG_OK)
    return report_error(rc);
  std::string text = owned_string(out);
  if (format == "json") {
    print_json(text);
  } else {
    njson j = njson::parse(text);
    std::cout << "player " << j["player"].get<int>() << " best response:";
    for (const auto& p : j["strategy"]) std::cout << ' ' << fmt9(p.get<double>());
    std::cout << "\nvalue (worst-case CVaR of loss): " << fmt9(j["value"].get<double>()) << "\n";
  }
  return kExitOk;
}

int cmd_verify(const std::string& file, const std::string& profile_csv, double tol,
               const std::string& format) {
  GameHandle h;
  if (int rc = drg_game_from_file(file.c_str(), &h.game); rc != DRG_OK) return report_error(rc);
  std::vector<double> profile = parse_profile(profile_csv);
  char* out = nullptr;
  int is_eq = 0;
  if (int rc = drg_verify(h.game, profile.data(), profile.size(), tol, &out, &is_eq);
      rc != DRG_OK)
    return report_error(rc);
  std::string text = owned_string(out);
  if (format == "json") {
    print_json(text);
  } else {
    njson j = njson::parse(text);
    const njson& rep = j["report"];
    for (size_t i = 0; i < rep["gaps"].size(); ++i)
      std::cout << "player " << i << " gap: " << fmt9(rep["gaps"][i].get<double>()) << "\n";
    std::cout << "total gap: " << fmt9(rep["total"].get<double>()) << "\n"
              << (is_eq ? "equilibrium" : "not an equilibrium") << " at tol " << fmt9(tol)
              << "\n";
  }
  return kExitOk;
}

int cmd_certify(const std::string& file, const std::string& profile_csv,
                const std::string& format) {
  GameHandle h;
  if (int rc = drg_game_from_file(file.c_str(), &h.game); rc != DRG_OK) return report_error(rc);
  std::vector<double> profile = parse_profile(profile_csv);
  char* out = nullptr;
  int valid = 0;
  if (int rc = drg_certify(h.game, profile.data(), profile.size(), &out, &valid); rc != DRG_OK)
    return report_error(rc);
  std::string text = owned_string(out);
  if (format == "json") {
    print_json(text);
  } else {
    njson j = njson::parse(text);
    std::cout << "max equality residual: " << fmt9(j["max_equality_residual"].get<double>())
              << "\nmax inequality violation: "
              << fmt9(j["max_inequality_violation"].get<double>()) << "\ncertificate "
              << (valid ? "valid" : "invalid") << "\n";
  }
  return kExitOk;
}

void print_solve_csv(const njson& j) {
  bool header_done = false;
  for (const auto& eq : j["equilibria"]) {
    if (!header_done) {
      bool first = true;
      int player = 1;
      for (const auto& strat : eq["profile"]) {
        for (size_t a = 1; a <= strat.size(); ++a) {
          std::cout << (first ? "" : ",") << 'x' << player << '_' << a;
          first = false;
        }
        ++player;
      }
      std::cout << ",gap\n";
      header_done = true;
    }
    bool first = true;
    for (const auto& strat : eq["profile"])
      for (const auto& p : strat) {
        std::cout << (first ? "" : ",") << fmt9(p.get<double>());
        first = false;
      }
    std::cout << ',' << fmt9(eq["gap"].get<double>()) << "\n";
  }
  if (!header_done) std::cout << "no equilibria found\n";
}

int cmd_solve(const std::string& file, int restarts, unsigned long long seed, double tol,
              const std::string& format) {
  GameHandle h;
  if (int rc = drg_game_from_file(file.c_str(), &h.game); rc != DRG_OK) return report_error(rc);
  char* out = nullptr;
  if (int rc = drg_solve(h.game, restarts, seed, tol, &out); rc != DRG_OK)
    return report_error(rc);
  std::string text = owned_string(out);
  if (format == "json") {
    print_json(text);
  } else {
    print_solve_csv(njson::parse(text));
  }
  return kExitOk;
}

struct InspectionOpts {
  double w = 15, g_lo = 8, g_hi = 12, v_lo = 16, v_hi = 24, h_lo = 4, h_hi = 6, s = 4;
  double eps1 = 1.0, eps2 = 1.0;
  int restarts = 8;
  unsigned long long seed = 0;
  double tol = 1e-6;
};

njson inspection_spec(const InspectionOpts& o) {
  njson spec;
  spec["inspection"] = {{"wage", o.w}, {"g", {o.g_lo, o.g_hi}}, {"v", {o.v_lo, o.v_hi}},
                        {"h", {o.h_lo, o.h_hi}}, {"s", o.s}};
  spec["grid"] = njson::array({njson::array({o.eps1, o.eps2})});
  spec["search"] = {{"restarts", o.restarts}, {"seed", o.seed}, {"gap_tol", o.tol}};
  return spec;
}

int cmd_inspection(const InspectionOpts& o, const std::string& format) {
  std::string spec = inspection_spec(o).dump();
  char* csv = nullptr;
  char* json = nullptr;
  if (int rc = drg_experiment(spec.c_str(), &csv, &json); rc != DRG_OK) return report_error(rc);
  std::string csv_text = owned_string(csv);
  std::string json_text = owned_string(json);
  if (format == "json")
    print_json(json_text);
  else
    std::cout << csv_text;
  return kExitOk;
}

int cmd_experiment(const std::string& spec_file, const std::string& out_dir) {
  std::ifstream in(spec_file);
  if (!in) {
    std::cerr << "error: cannot open " << spec_file << "\n";
    return kExitUsage;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  char* csv = nullptr;
  char* json = nullptr;
  if (int rc = drg_experiment(ss.str().c_str(), &csv, &json); rc != DRG_OK)
    return report_error(rc);
  std::string csv_text = owned_string(csv);
  std::string json_text = owned_string(json);
  std::filesystem::create_directories(out_dir);
  std::ofstream(out_dir + "/experiment.csv") << csv_text;
  std::ofstream(out_dir + "/experiment.json") << json_text;
  std::cout << "wrote " << out_dir << "/experiment.csv and " << out_dir << "/experiment.json\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver for finite distributionally robust games with risk-averse players"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  std::string file, profile_csv, spec_file, out_dir = ".";
  int player = 0;
  double tol = 1e-6;
  int restarts = 8;
  unsigned long long seed = 0;
  InspectionOpts insp;

  auto* validate = app.add_subcommand("validate", "Validate a game file's ambiguity set");
  validate->add_option("file", file)->required();

  auto* br = app.add_subcommand("best-response", "Best response of one player to a profile");
  br->add_option("file", file)->required();
  br->add_option("--player", player, "0-based player index")->required();
  br->add_option("--profile", profile_csv, "Flat comma-separated profile")->required();

  auto* verify = app.add_subcommand("verify", "Check whether a profile is an equilibrium");
  verify->add_option("file", file)->required();
  verify->add_option("--profile", profile_csv)->required();
  verify->add_option("--tol", tol, "Total-gap tolerance");

  auto* certify = app.add_subcommand("certify", "Build the equilibrium-system certificate");
  certify->add_option("file", file)->required();
  certify->add_option("--profile", profile_csv)->required();

  auto* solve = app.add_subcommand("solve", "Multistart equilibrium search");
  solve->add_option("file", file)->required();
  solve->add_option("--restarts", restarts);
  solve->add_option("--seed", seed);
  solve->add_option("--tol", tol, "Gap tolerance");

  auto* inspection = app.add_subcommand("inspection", "Solve an inspection game instance");
  inspection->add_option("--w", insp.w, "Wage");
  inspection->add_option("--g-lo", insp.g_lo);
  inspection->add_option("--g-hi", insp.g_hi);
  inspection->add_option("--v-lo", insp.v_lo);
  inspection->add_option("--v-hi", insp.v_hi);
  inspection->add_option("--h-lo", insp.h_lo);
  inspection->add_option("--h-hi", insp.h_hi);
  inspection->add_option("--s", insp.s, "Mean-deviation cap");
  inspection->add_option("--eps1", insp.eps1);
  inspection->add_option("--eps2", insp.eps2);
  inspection->add_option("--restarts", insp.restarts);
  inspection->add_option("--seed", insp.seed);
  inspection->add_option("--tol", insp.tol);

  auto* experiment = app.add_subcommand("experiment", "Run a risk-sweep experiment spec");
  experiment->add_option("spec", spec_file)->required();
  experiment->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(file);
    if (br->parsed()) return cmd_best_response(file, player, profile_csv, format);
    if (verify->parsed()) return cmd_verify(file, profile_csv, tol, format);
    if (certify->parsed()) return cmd_certify(file, profile_csv, format);
    if (solve->parsed()) return cmd_solve(file, restarts, seed, tol, format);
    if (inspection->parsed()) return cmd_inspection(insp, format);
    if (experiment->parsed()) return cmd_experiment(spec_file, out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
