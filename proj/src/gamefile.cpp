#include "drg/gamefile.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace drg {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<double> to_vector(const ordered_json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string("game file: ") + what + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw std::invalid_argument(std::string("game file: ") + what + " must be numeric");
    out.push_back(v.get<double>());
  }
  return out;
}

Matrix to_matrix(const ordered_json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(std::string("game file: ") + what + " must be a nonempty 2-d array");
  const int rows = static_cast<int>(j.size());
  std::vector<double> first = to_vector(j[0], what);
  Matrix m(rows, static_cast<int>(first.size()));
  for (int r = 0; r < rows; ++r) {
    std::vector<double> row = to_vector(j[r], what);
    if (row.size() != first.size())
      throw std::invalid_argument(std::string("game file: ragged rows in ") + what);
    for (size_t c = 0; c < row.size(); ++c) m(r, static_cast<int>(c)) = row[c];
  }
  return m;
}

ordered_json from_vector(const std::vector<double>& v) {
  ordered_json j = ordered_json::array();
  for (double x : v) j.push_back(x);
  return j;
}

ordered_json from_matrix(const Matrix& m) {
  ordered_json j = ordered_json::array();
  for (int r = 0; r < m.rows; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

}  // namespace

GameDefinition parse_game(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("game file: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("game file: top level must be an object");

  if (!doc.contains("players") || !doc.contains("actions") || !doc.contains("risk") ||
      !doc.contains("ambiguity"))
    throw std::invalid_argument("game file: players, actions, risk and ambiguity are required");

  const int players = doc["players"].get<int>();
  std::vector<int> actions;
  for (const auto& a : doc["actions"]) actions.push_back(a.get<int>());
  GameShape shape(players, actions);

  std::vector<double> risk = to_vector(doc["risk"], "risk");
  if (static_cast<int>(risk.size()) != players)
    throw std::invalid_argument("game file: risk must list one level per player");

  const ordered_json& amb = doc["ambiguity"];
  if (!amb.is_object() || !amb.contains("s"))
    throw std::invalid_argument("game file: ambiguity must be an object with s");

  GameDefinition def;
  def.f.shape = shape;
  def.f.mad_cap = amb["s"].get<double>();
  def.risk = RiskProfile(risk);

  const long long n = shape.vec_length();
  const bool has_box = amb.contains("box");
  const bool has_support = amb.contains("support");
  if (has_box == has_support)
    throw std::invalid_argument("game file: ambiguity needs exactly one of box or support");

  if (has_box) {
    const ordered_json& bj = amb["box"];
    AffineBoxUncertainty box;
    if (bj.contains("names"))
      for (const auto& s : bj["names"]) box.names.push_back(s.get<std::string>());
    box.lo = to_vector(bj.at("lo"), "box.lo");
    box.hi = to_vector(bj.at("hi"), "box.hi");
    box.map = to_matrix(bj.at("map"), "box.map");
    box.offset = to_vector(bj.at("offset"), "box.offset");
    if (box.names.empty())
      for (size_t k = 0; k < box.lo.size(); ++k) box.names.push_back("t" + std::to_string(k));
    if (box.lo.size() != box.hi.size() || box.names.size() != box.lo.size() ||
        box.map.cols != static_cast<int>(box.lo.size()) || box.map.rows != n ||
        box.offset.size() != static_cast<size_t>(n))
      throw std::invalid_argument("game file: box dimensions are inconsistent");
    def.f.support = build_support_from_box(box);
    def.box = std::move(box);
  } else {
    const ordered_json& sj = amb["support"];
    def.f.support.w = to_matrix(sj.at("w"), "support.w");
    def.f.support.h = to_vector(sj.at("h"), "support.h");
    if (def.f.support.w.cols != n ||
        def.f.support.h.size() != static_cast<size_t>(def.f.support.w.rows))
      throw std::invalid_argument("game file: support dimensions are inconsistent");
  }

  if (amb.contains("mean") && amb["mean"].is_string()) {
    if (amb["mean"].get<std::string>() != "nominal" || !def.box)
      throw std::invalid_argument("game file: mean string form must be \"nominal\" with a box");
    std::vector<double> mid(def.box->lo.size());
    for (size_t k = 0; k < mid.size(); ++k) mid[k] = 0.5 * (def.box->lo[k] + def.box->hi[k]);
    std::vector<double> m = matvec(def.box->map, mid);
    for (long long j = 0; j < n; ++j) m[j] += def.box->offset[j];
    def.f.mean = std::move(m);
  } else if (amb.contains("mean")) {
    def.f.mean = to_vector(amb["mean"], "mean");
    if (def.f.mean.size() != static_cast<size_t>(n))
      throw std::invalid_argument("game file: mean has the wrong length");
  } else {
    throw std::invalid_argument("game file: ambiguity.mean is required");
  }

  if (doc.contains("nominal")) {
    std::vector<double> nom = to_vector(doc["nominal"], "nominal");
    if (nom.size() != static_cast<size_t>(n))
      throw std::invalid_argument("game file: nominal has the wrong length");
    def.nominal = PayoffTensor(shape, std::move(nom));
  }
  return def;
}

GameDefinition load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("game file: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_game(ss.str());
}

std::string emit_game(const GameDefinition& g) {
  ordered_json doc;
  doc["players"] = g.f.shape.num_players;
  doc["actions"] = g.f.shape.action_counts;
  doc["risk"] = from_vector(g.risk.eps);
  ordered_json amb;
  amb["s"] = g.f.mad_cap;
  amb["mean"] = from_vector(g.f.mean);
  if (g.box) {
    ordered_json bj;
    bj["names"] = g.box->names;
    bj["lo"] = from_vector(g.box->lo);
    bj["hi"] = from_vector(g.box->hi);
    bj["map"] = from_matrix(g.box->map);
    bj["offset"] = from_vector(g.box->offset);
    amb["box"] = std::move(bj);
  } else {
    ordered_json sj;
    sj["w"] = from_matrix(g.f.support.w);
    sj["h"] = from_vector(g.f.support.h);
    amb["support"] = std::move(sj);
  }
  doc["ambiguity"] = std::move(amb);
  if (g.nominal) doc["nominal"] = from_vector(g.nominal->vec());
  return doc.dump(2) + "\n";
}

InspectionGame build_inspection_game(const InspectionParams& p) {
  if (p.g_lo > p.g_hi || p.v_lo > p.v_hi || p.h_lo > p.h_hi)
    throw std::invalid_argument("inspection game: interval with lo > hi");
  if (p.s < 0.0) throw std::invalid_argument("inspection game: s must be nonnegative");

  const double w = p.wage;
  GameShape shape(2, {2, 2});
  AffineBoxUncertainty box;
  box.names = {"g", "v", "h"};
  box.lo = {p.g_lo, p.v_lo, p.h_lo};
  box.hi = {p.g_hi, p.v_hi, p.h_hi};
  box.map = Matrix(8, 3);
  box.offset.assign(8, 0.0);
  // vec order: player 1 (Shirk,Inspect), (Shirk,Not), (Work,Inspect),
  // (Work,Not); then player 2 in the same joint-action order.
  auto set = [&](int row, double cg, double cv, double ch, double off) {
    box.map(row, 0) = cg;
    box.map(row, 1) = cv;
    box.map(row, 2) = ch;
    box.offset[row] = off;
  };
  set(0, 0, 0, 0, 0.0);       // employee, Shirk/Inspect: 0
  set(1, 0, 0, 0, w);         // employee, Shirk/Not: w
  set(2, -1, 0, 0, w);        // employee, Work/Inspect: w - g
  set(3, -1, 0, 0, w);        // employee, Work/Not: w - g
  set(4, 0, 0, -1, 0.0);      // employer, Shirk/Inspect: -h
  set(5, 0, 0, 0, -w);        // employer, Shirk/Not: -w
  set(6, 0, 1, -1, -w);       // employer, Work/Inspect: v - w - h
  set(7, 0, 1, 0, -w);        // employer, Work/Not: v - w

  std::vector<double> mean;
  if (p.explicit_mean) {
    if (p.explicit_mean->size() != 8)
      throw std::invalid_argument("inspection game: explicit mean must have 8 entries");
    mean = *p.explicit_mean;
  } else {
    std::vector<double> mid = {0.5 * (p.g_lo + p.g_hi), 0.5 * (p.v_lo + p.v_hi),
                               0.5 * (p.h_lo + p.h_hi)};
    mean = matvec(box.map, mid);
    for (int j = 0; j < 8; ++j) mean[j] += box.offset[j];
  }

  InspectionGame game{AmbiguitySet{shape, build_support_from_box(box), mean, p.s},
                      PayoffTensor(shape, mean), box};
  if (p.explicit_mean) {
    std::vector<double> mid = {0.5 * (p.g_lo + p.g_hi), 0.5 * (p.v_lo + p.v_hi),
                               0.5 * (p.h_lo + p.h_hi)};
    std::vector<double> nom = matvec(box.map, mid);
    for (int j = 0; j < 8; ++j) nom[j] += box.offset[j];
    game.nominal = PayoffTensor(shape, std::move(nom));
  }
  return game;
}

GameDefinition inspection_game_definition(const InspectionParams& p, double eps1, double eps2) {
  InspectionGame g = build_inspection_game(p);
  GameDefinition def;
  def.f = std::move(g.f);
  def.risk = RiskProfile({eps1, eps2});
  def.nominal = std::move(g.nominal);
  def.box = std::move(g.box);
  return def;
}

}  // namespace drg
