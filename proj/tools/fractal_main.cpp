// Command-line front door: every subcommand parses a JSON config, dispatches
// to exactly one library operation chain and emits byte-stable reports.
//
// Exit codes: 0 success, 1 validation failure, 2 non-convergence,
// 3 malformed input. stderr carries the structured error name.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fractal/hutchinson.hpp"
#include "fractal/io.hpp"
#include "fractal/katetov.hpp"
#include "fractal/lift_check.hpp"
#include "fractal/wasserstein.hpp"

namespace {

using namespace fractal;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::string> tol;
  std::optional<long> max_iter;
  std::optional<long> seed;
  std::optional<long> trials;
};

Json load_config(const CommonArgs& args) {
  Json cfg;
  try {
    cfg = Json::parse(read_file(args.config_path));
  } catch (const nlohmann::json::exception& e) {
    throw malformed_error("BadConfig", e.what());
  }
  if (args.tol) cfg["tol"] = *args.tol;
  if (args.max_iter) cfg["max_iter"] = *args.max_iter;
  if (args.seed) cfg["seed"] = *args.seed;
  if (args.trials) cfg["trials"] = *args.trials;
  return cfg;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  std::filesystem::create_directories(args.out_dir);
  return (std::filesystem::path(args.out_dir) / name).string();
}

Rat cfg_rat(const Json& cfg, const std::string& key, const std::string& fallback) {
  if (!cfg.contains(key)) return parse_rat(fallback);
  return rat_from_json(cfg.at(key));
}

long cfg_long(const Json& cfg, const std::string& key, long fallback) {
  if (!cfg.contains(key)) return fallback;
  if (cfg.at(key).is_number()) return cfg.at(key).get<long>();
  throw malformed_error("BadConfig", key + " must be a number");
}

std::uint64_t cfg_seed(const Json& cfg) { return static_cast<std::uint64_t>(cfg_long(cfg, "seed", 1)); }

bool euclidean_config(const Json& space) {
  return space.contains("kind") && space.at("kind") == "euclidean";
}

// A space section is either an inline JSON document or a string path to a
// CSV matrix (header row of labels, rational-literal entries).
std::shared_ptr<const FiniteMetricSpace> table_space_from(const Json& cfg) {
  if (!cfg.contains("space")) throw malformed_error("BadConfig", "space section required");
  const Json& section = cfg.at("space");
  if (section.is_string()) {
    std::istringstream csv(read_file(section.get<std::string>()));
    return std::make_shared<const FiniteMetricSpace>(space_from_csv(csv));
  }
  return std::make_shared<const FiniteMetricSpace>(space_from_json(section));
}

TableMap table_map_from_json(const Json& j, const FiniteMetricSpace& space) {
  std::map<std::string, std::string> pairs;
  for (const auto& [from, to] : j.at("images").items()) pairs[from] = to.get<std::string>();
  return table_map_from_labels(space, pairs);
}

AffineMap affine_map_from_json(const Json& j, int dim) {
  AffineMap m;
  m.dim = dim;
  const auto& rows = j.at("matrix");
  if (static_cast<int>(rows.size()) != dim) throw malformed_error("BadConfig", "matrix shape");
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) m.mat[i][k] = rows[i][k].get<double>();
  const auto& off = j.at("offset");
  if (static_cast<int>(off.size()) != dim) throw malformed_error("BadConfig", "offset shape");
  for (int i = 0; i < dim; ++i) m.offset[i] = off[i].get<double>();
  return m;
}

Vec vec_from_json(const Json& j, int dim) {
  Vec v;
  if (static_cast<int>(j.size()) != dim) throw malformed_error("BadConfig", "point dimension");
  for (int i = 0; i < dim; ++i) v[i] = j[i].get<double>();
  return v;
}

std::vector<ContinuityModulus> moduli_from_config(const Json& cfg, std::size_t n_maps) {
  std::vector<ContinuityModulus> out;
  if (!cfg.contains("moduli")) return out;
  for (const auto& m : cfg.at("moduli")) out.push_back(modulus_from_json(m));
  if (!out.empty() && out.size() != n_maps)
    throw malformed_error("BadConfig", "moduli count must match maps count");
  return out;
}

IFSystem<EuclideanSpace> euclid_system(const Json& cfg) {
  const int dim = cfg.at("space").value("dim", 2);
  auto space = std::make_shared<const EuclideanSpace>(dim);
  std::vector<AffineMap> maps;
  for (const auto& m : cfg.at("maps")) maps.push_back(affine_map_from_json(m, dim));
  auto moduli = moduli_from_config(cfg, maps.size());
  return IFSystem<EuclideanSpace>(space, std::move(maps), std::move(moduli));
}

int run_validate(const CommonArgs& args) {
  const Json cfg = load_config(args);
  auto space = table_space_from(cfg);  // validate_metric runs inside
  Json report;
  report["valid"] = true;
  report["points"] = space->size();
  report["diameter"] = rat_to_string(space->diameter());
  write_file(out_path(args, "validate.json"), report.dump(2) + "\n");
  std::cout << "validate: ok, " << space->size() << " points\n";
  return 0;
}

int run_classify(const CommonArgs& args) {
  const Json cfg = load_config(args);
  const ContinuityModulus phi = modulus_from_json(cfg.at("modulus"));
  const Json& section = cfg.at("classify");
  const Rat d_max = rat_from_json(section.at("d_max"));
  std::vector<Rat> grid;
  for (const auto& d : section.at("delta_grid")) grid.push_back(rat_from_json(d));
  if (section.value("use_realized_distances", false)) {
    auto space = table_space_from(cfg);
    for (const Rat& d : space->realized_distances())
      if (d > 0 && d <= d_max) grid.push_back(d);
  }
  const ClassifyResult res = classify_modulus(phi, d_max, grid);
  Json report;
  report["banach"] = res.banach;
  report["rakotch"] = res.rakotch;
  report["matkowski"] = res.matkowski;
  report["banach_sup"] = rat_to_string(res.banach_sup);
  Json sups = Json::array();
  for (const Rat& s : res.rakotch_sup) sups.push_back(rat_to_string(s));
  report["rakotch_sup"] = std::move(sups);
  report["matkowski_steps"] = res.matkowski_steps;
  write_file(out_path(args, "classify.json"), report.dump(2) + "\n");
  std::cout << "classify: banach=" << res.banach << " rakotch=" << res.rakotch
            << " matkowski=" << res.matkowski << "\n";
  return 0;
}

template <class S>
int emit_attractor(const IFSystem<S>& sys, const CompactSet<S>& k0, const CommonArgs& args,
                   const Json& cfg) {
  const Rat tol_rat = cfg_rat(cfg, "tol", "1/1000");
  const long max_iter = cfg_long(cfg, "max_iter", 100);
  typename S::Scalar tol;
  if constexpr (std::is_same_v<typename S::Scalar, Rat>) {
    tol = tol_rat;
  } else {
    tol = rat_to_double(tol_rat);
  }
  try {
    auto res = iterate_to_attractor(sys, k0, tol, static_cast<std::size_t>(max_iter));
    if constexpr (std::is_same_v<S, EuclideanSpace>) {
      write_file(out_path(args, "attractor.csv"), cloud_to_csv(res.set.points(), sys.space()->dim()));
    } else {
      write_file(out_path(args, "attractor.csv"), cloud_to_csv(res.set.points(), *sys.space()));
    }
    write_file(out_path(args, "history.json"), history_to_json(res.history).dump(2) + "\n");
    std::cout << "attractor: converged after " << res.history.size() << " steps, " << res.set.size()
              << " points\n";
    return 0;
  } catch (const NonConvergenceError& e) {
    write_file(out_path(args, "history.json"), history_to_json(e.history()).dump(2) + "\n");
    throw;
  }
}

int run_attractor(const CommonArgs& args) {
  const Json cfg = load_config(args);
  if (!cfg.contains("space")) throw malformed_error("BadConfig", "space section required");
  if (euclidean_config(cfg.at("space"))) {
    auto sys = euclid_system(cfg);
    std::vector<Vec> pts;
    for (const auto& p : cfg.at("initial_set")) pts.push_back(vec_from_json(p, sys.space()->dim()));
    return emit_attractor(sys, CompactSet<EuclideanSpace>(sys.space(), std::move(pts)), args, cfg);
  }
  auto space = table_space_from(cfg);
  std::vector<TableMap> maps;
  for (const auto& m : cfg.at("maps")) maps.push_back(table_map_from_json(m, *space));
  IFSystem<FiniteMetricSpace> sys(space, maps, moduli_from_config(cfg, maps.size()));
  std::vector<int> pts;
  for (const auto& p : cfg.at("initial_set")) pts.push_back(space->index_of(p.get<std::string>()));
  return emit_attractor(sys, CompactSet<FiniteMetricSpace>(space, std::move(pts)), args, cfg);
}

int run_chaos(const CommonArgs& args) {
  const Json cfg = load_config(args);
  auto sys = euclid_system(cfg);
  const Vec x0 = vec_from_json(cfg.at("point"), sys.space()->dim());
  const long steps = cfg_long(cfg, "steps", 10000);
  const long burn_in = cfg_long(cfg, "burn_in", 50);
  auto cloud = chaos_game(sys, x0, static_cast<std::size_t>(steps), static_cast<std::size_t>(burn_in),
                          cfg_seed(cfg));
  write_file(out_path(args, "chaos.csv"), cloud_to_csv(cloud.points(), sys.space()->dim()));
  std::cout << "chaos: " << cloud.size() << " distinct points\n";
  return 0;
}

int run_wasserstein(const CommonArgs& args) {
  const Json cfg = load_config(args);
  auto space = table_space_from(cfg);
  const auto mu = measure_from_json(cfg.at("measures").at("mu"), space);
  const auto eta = measure_from_json(cfg.at("measures").at("eta"), space);
  const auto res = wasserstein1(mu, eta);
  Json report;
  report["value"] = rat_to_string(res.value);
  report["plan"] = plan_to_json(res.plan);
  write_file(out_path(args, "wasserstein.json"), report.dump(2) + "\n");
  std::cout << "wasserstein: " << rat_to_string(res.value) << "\n";
  return 0;
}

int run_lift_check(const CommonArgs& args) {
  const Json cfg = load_config(args);
  auto space = table_space_from(cfg);
  const long map_index = cfg_long(cfg, "map_index", 0);
  std::vector<TableMap> maps;
  for (const auto& m : cfg.at("maps")) maps.push_back(table_map_from_json(m, *space));
  if (map_index < 0 || map_index >= static_cast<long>(maps.size()))
    throw malformed_error("BadConfig", "map_index out of range");
  const ContinuityModulus phi = modulus_from_json(cfg.at("modulus"));
  const long trials = cfg_long(cfg, "trials", 100);
  const auto rep = verify_measure_contraction(maps[map_index], phi, space,
                                              static_cast<std::size_t>(trials), cfg_seed(cfg));
  Json report;
  report["strict_fraction"] = rep.strict_fraction;
  report["max_ratio"] = rat_to_string(rep.max_ratio);
  report["coupling_gap_min"] = rat_to_string(rep.coupling_gap_min);
  report["all_chains_ok"] = rep.all_chains_ok;
  report["all_marginals_ok"] = rep.all_marginals_ok;
  Json trials_json = Json::array();
  for (const auto& t : rep.trials) {
    Json row;
    row["w_before"] = rat_to_string(t.w_before);
    row["w_after"] = rat_to_string(t.w_after);
    row["ratio"] = rat_to_string(t.ratio);
    row["coupling_gap"] = rat_to_string(t.coupling_gap);
    row["delta"] = rat_to_string(t.delta);
    row["xdelta_mass"] = rat_to_string(t.xdelta_mass);
    row["strict"] = t.strict;
    trials_json.push_back(std::move(row));
  }
  report["trials"] = std::move(trials_json);
  write_file(out_path(args, "lift_report.json"), report.dump(2) + "\n");
  std::cout << "lift-check: strict_fraction=" << rep.strict_fraction
            << " max_ratio=" << rat_to_string(rep.max_ratio) << "\n";
  return 0;
}

int run_extend(const CommonArgs& args) {
  const Json cfg = load_config(args);
  const Json& section = cfg.at("extend");
  auto domain = std::make_shared<const FiniteMetricSpace>(space_from_json(section.at("domain")));
  auto ambient = space_from_json(section.at("ambient"));
  std::vector<std::optional<int>> partial(domain->size(), std::nullopt);
  for (const auto& [from, to] : section.at("partial").items())
    partial[domain->index_of(from)] = ambient.index_of(to.get<std::string>());
  std::vector<int> order;
  if (section.contains("order"))
    for (const auto& l : section.at("order")) order.push_back(domain->index_of(l.get<std::string>()));
  const ContinuityModulus phi = modulus_from_json(cfg.at("modulus"));
  const bool injective = section.value("injective", false);

  const auto ext = extend_map(domain, partial, phi, ambient, order, injective);
  Json report;
  Json steps = Json::array();
  for (const auto& step : ext.transcript) {
    Json row;
    row["point"] = step.domain_label;
    row["image"] = step.image_label;
    row["fresh"] = step.fresh;
    Json presc = Json::array();
    for (const Rat& v : step.prescription) presc.push_back(rat_to_string(v));
    row["katetov"] = std::move(presc);
    row["ambient_size"] = step.ambient_size_after;
    steps.push_back(std::move(row));
  }
  report["transcript"] = std::move(steps);
  Json image;
  for (int i = 0; i < domain->size(); ++i) image[domain->label(i)] = ext.ambient.label(ext.image[i]);
  report["map"] = std::move(image);
  report["ambient"] = space_to_json(ext.ambient);
  write_file(out_path(args, "extension.json"), report.dump(2) + "\n");
  write_file(out_path(args, "extended_space.csv"), space_to_csv(ext.ambient));
  std::cout << "extend: ambient grown to " << ext.ambient.size() << " points\n";
  return 0;
}

int run_realize(const CommonArgs& args) {
  const Json cfg = load_config(args);
  auto domain = table_space_from(cfg);
  std::vector<TableMap> maps;
  for (const auto& m : cfg.at("maps")) maps.push_back(table_map_from_json(m, *domain));
  std::vector<ContinuityModulus> phis = moduli_from_config(cfg, maps.size());
  if (phis.empty()) throw malformed_error("BadConfig", "realize requires per-map moduli");
  const Json& section = cfg.at("realize");
  std::vector<Rat> grid;
  for (const auto& g : section.at("grid")) grid.push_back(rat_from_json(g));
  const long rounds = cfg_long(section, "rounds", 0);
  const int growth_cap = static_cast<int>(cfg_long(section, "growth_cap", 64));

  const auto growth = build_urysohn_approx(*domain, static_cast<int>(rounds), grid, cfg_seed(cfg));
  std::vector<int> embedding(domain->size());
  for (int i = 0; i < domain->size(); ++i) embedding[i] = i;
  const auto ext = extend_system(domain, maps, phis, growth.space, embedding, {}, growth_cap);

  IFSystem<FiniteMetricSpace> sys(ext.ambient, ext.maps);
  auto x = make_set(ext.ambient, embedding);
  const bool fixed = hutchinson_image(sys, x).same_set(x);

  // Far seed: the ambient point farthest from the embedded copy.
  int far = -1;
  Rat far_d(-1);
  for (int p = 0; p < ext.ambient->size(); ++p) {
    bool in_copy = false;
    for (int c : embedding)
      if (c == p) in_copy = true;
    if (in_copy) continue;
    Rat d = ext.ambient->distance(p, embedding[0]);
    for (int c : embedding)
      if (ext.ambient->distance(p, c) < d) d = ext.ambient->distance(p, c);
    if (d > far_d) {
      far_d = d;
      far = p;
    }
  }

  Json report;
  report["ambient_points"] = ext.ambient->size();
  report["fixed_set_exact"] = fixed;
  Json verdict;
  if (far >= 0) {
    const Rat tol = cfg_rat(cfg, "tol", "1/1000000");
    const long max_iter = cfg_long(cfg, "max_iter", 100);
    auto res =
        iterate_to_attractor(sys, make_set(ext.ambient, {far}), tol, static_cast<std::size_t>(max_iter));
    verdict["far_seed"] = ext.ambient->label(far);
    verdict["steps"] = res.history.size();
    verdict["history"] = history_to_json(res.history);
    verdict["reached_copy"] = res.set.same_set(x);
  }
  report["iteration"] = std::move(verdict);
  report["ambient"] = space_to_json(*ext.ambient);
  write_file(out_path(args, "realize.json"), report.dump(2) + "\n");
  std::cout << "realize: fixed_set_exact=" << fixed << " ambient=" << ext.ambient->size() << " points\n";
  return 0;
}

int run_urysohn(const CommonArgs& args) {
  const Json cfg = load_config(args);
  auto seed_space = table_space_from(cfg);
  const Json& section = cfg.at("urysohn");
  std::vector<Rat> grid;
  for (const auto& g : section.at("grid")) grid.push_back(rat_from_json(g));
  const long rounds = cfg_long(section, "rounds", 10);
  const auto growth = build_urysohn_approx(*seed_space, static_cast<int>(rounds), grid, cfg_seed(cfg));
  Json report;
  report["points"] = growth.space.size();
  report["rounds_done"] = growth.rounds_done;
  report["rounds_skipped"] = growth.rounds_skipped;
  report["space"] = space_to_json(growth.space);
  write_file(out_path(args, "urysohn.json"), report.dump(2) + "\n");
  write_file(out_path(args, "urysohn.csv"), space_to_csv(growth.space));
  std::cout << "urysohn: " << growth.space.size() << " points after " << growth.rounds_done
            << " rounds\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attractors, Wasserstein lifts and Katetov extensions on finite metric spaces"};
  app.require_subcommand(1);

  CommonArgs args;
  int (*runner)(const CommonArgs&) = nullptr;

  auto add_common = [&](CLI::App* sub, int (*fn)(const CommonArgs&)) {
    sub->add_option("--config", args.config_path, "JSON config file")->required();
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--tol", args.tol, "tolerance override (rational literal)");
    sub->add_option("--max-iter", args.max_iter, "iteration cap override");
    sub->add_option("--seed", args.seed, "PRNG seed override");
    sub->add_option("--trials", args.trials, "trial count override");
    sub->callback([&runner, fn] { runner = fn; });
  };

  add_common(app.add_subcommand("validate", "check the metric axioms of a distance matrix"), run_validate);
  add_common(app.add_subcommand("classify", "contraction taxonomy of a gauge"), run_classify);
  add_common(app.add_subcommand("attractor", "iterate the Hutchinson operator to its fixed set"),
             run_attractor);
  add_common(app.add_subcommand("chaos", "random-orbit point cloud sampler"), run_chaos);
  add_common(app.add_subcommand("wasserstein", "exact W1 distance and an optimal coupling"),
             run_wasserstein);
  add_common(app.add_subcommand("lift-check", "measure-lift contraction report"), run_lift_check);
  add_common(app.add_subcommand("extend", "gauge-bounded map extension transcript"), run_extend);
  add_common(app.add_subcommand("realize", "embed, extend and verify a self-similar system"), run_realize);
  add_common(app.add_subcommand("urysohn", "grow a universal-space approximation"), run_urysohn);

  CLI11_PARSE(app, argc, argv);

  try {
    return runner(args);
  } catch (const fractal::Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.kind()) {
      case fractal::ErrorKind::kValidation:
        return 1;
      case fractal::ErrorKind::kNonConvergence:
        return 2;
      case fractal::ErrorKind::kMalformed:
        return 3;
    }
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << "\n";
    return 3;
  }
}
