#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fractal/euclidean.hpp"
#include "fractal/measure.hpp"
#include "fractal/metric_space.hpp"
#include "fractal/modulus.hpp"

namespace fractal {

using Json = nlohmann::ordered_json;

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline Rat rat_from_json(const Json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(BigInt(j.get<long long>()));
  if (j.is_number_float()) return rat_from_double(j.get<double>());
  throw malformed_error("BadRational", j.dump());
}

// {"labels":[...],"dist":[[...]]}; entries are rational literal strings or
// numbers (decimals parse as exact scaled rationals).
inline FiniteMetricSpace space_from_json(const Json& j) {
  if (!j.contains("labels") || !j.contains("dist")) throw malformed_error("BadSpace", "labels/dist required");
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  std::vector<std::vector<Rat>> dist;
  for (const auto& row : j.at("dist")) {
    std::vector<Rat> r;
    for (const auto& cell : row) r.push_back(rat_from_json(cell));
    dist.push_back(std::move(r));
  }
  return validate_metric(std::move(dist), std::move(labels));
}

inline Json space_to_json(const FiniteMetricSpace& s) {
  Json j;
  j["labels"] = s.labels();
  Json dist = Json::array();
  for (int i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < s.size(); ++k) row.push_back(rat_to_string(s.distance(i, k)));
    dist.push_back(std::move(row));
  }
  j["dist"] = std::move(dist);
  return j;
}

// CSV: header row of labels, then the square matrix of rational literals.
inline std::string space_to_csv(const FiniteMetricSpace& s) {
  std::ostringstream out;
  for (int i = 0; i < s.size(); ++i) out << (i ? "," : "") << s.label(i);
  out << "\n";
  for (int i = 0; i < s.size(); ++i) {
    for (int j = 0; j < s.size(); ++j) out << (j ? "," : "") << rat_to_string(s.distance(i, j));
    out << "\n";
  }
  return out.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline FiniteMetricSpace space_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw malformed_error("BadCsv", "empty input");
  std::vector<std::string> labels = detail::split_csv_line(line);
  std::vector<std::vector<Rat>> dist;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Rat> row;
    for (const std::string& cell : detail::split_csv_line(line)) row.push_back(parse_rat(cell));
    dist.push_back(std::move(row));
  }
  return validate_metric(std::move(dist), std::move(labels));
}

// {"support":[...labels...],"weights":["1/3","2/3"]}
inline DiscreteMeasure measure_from_json(const Json& j, std::shared_ptr<const FiniteMetricSpace> space) {
  std::vector<int> support;
  for (const auto& s : j.at("support")) support.push_back(space->index_of(s.get<std::string>()));
  std::vector<Rat> weights;
  for (const auto& w : j.at("weights")) weights.push_back(rat_from_json(w));
  return DiscreteMeasure(std::move(space), std::move(support), std::move(weights));
}

inline Json measure_to_json(const DiscreteMeasure& mu) {
  Json j;
  Json support = Json::array();
  for (int p : mu.support()) support.push_back(mu.space()->label(p));
  Json weights = Json::array();
  for (const Rat& w : mu.weights()) weights.push_back(rat_to_string(w));
  j["support"] = std::move(support);
  j["weights"] = std::move(weights);
  return j;
}

inline Json plan_to_json(const TransportPlan& plan) {
  Json j;
  Json rows = Json::array(), cols = Json::array(), mass = Json::array();
  for (int p : plan.rows()) rows.push_back(plan.space()->label(p));
  for (int p : plan.cols()) cols.push_back(plan.space()->label(p));
  for (const auto& r : plan.mass()) {
    Json row = Json::array();
    for (const Rat& v : r) row.push_back(rat_to_string(v));
    mass.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["cols"] = std::move(cols);
  j["mass"] = std::move(mass);
  return j;
}

// {"breakpoints":[[t, phi_t], ...], "tail_slope": s}
inline ContinuityModulus modulus_from_json(const Json& j) {
  std::vector<std::pair<Rat, Rat>> bps;
  for (const auto& bp : j.at("breakpoints")) {
    if (bp.size() != 2) throw malformed_error("BadModulusJson", "breakpoints must be [t, phi] pairs");
    bps.emplace_back(rat_from_json(bp[0]), rat_from_json(bp[1]));
  }
  return ContinuityModulus(std::move(bps), rat_from_json(j.at("tail_slope")));
}

inline Json modulus_to_json(const ContinuityModulus& phi) {
  Json j;
  Json bps = Json::array();
  for (const auto& [t, y] : phi.breakpoints()) bps.push_back({rat_to_string(t), rat_to_string(y)});
  j["breakpoints"] = std::move(bps);
  j["tail_slope"] = rat_to_string(phi.tail_slope());
  return j;
}

// Point-cloud CSV: one point per row. Euclidean rows carry coordinates,
// table rows carry the label.
inline std::string cloud_to_csv(const std::vector<Vec>& pts, int dim) {
  std::ostringstream out;
  for (const Vec& p : pts) {
    for (int d = 0; d < dim; ++d) out << (d ? "," : "") << format_double(p[d]);
    out << "\n";
  }
  return out.str();
}

inline std::string cloud_to_csv(const std::vector<int>& pts, const FiniteMetricSpace& space) {
  std::ostringstream out;
  for (int p : pts) out << space.label(p) << "\n";
  return out.str();
}

template <class Scalar>
Json history_to_json(const std::vector<Scalar>& history) {
  Json j = Json::array();
  for (const auto& h : history) {
    if constexpr (std::is_same_v<Scalar, Rat>) {
      j.push_back(rat_to_double(h));
    } else {
      j.push_back(h);
    }
  }
  return j;
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw malformed_error("CannotWrite", path);
  out << contents;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw malformed_error("CannotRead", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fractal
