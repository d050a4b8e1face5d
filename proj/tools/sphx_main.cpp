#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sphx/experiments.hpp"

namespace fs = std::filesystem;
using namespace sphx;

namespace {

// Plain key = value file; '#' starts a comment.
std::map<std::string, std::string> load_config(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = val;
  }
  return kv;
}

std::vector<double> parse_ladder(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<std::size_t> parse_ladder_n(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(static_cast<std::size_t>(std::stoull(tok)));
  }
  return out;
}

std::string join_ladder(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v[i]);
    s += (i ? "," : "");
    s += buf;
  }
  return s;
}

void print_config(const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) std::printf("%s = %s\n", k.c_str(), v.c_str());
}

std::optional<Precision> parse_precision(const std::string& s) {
  if (s == "fp64") return Precision::fp64;
  if (s == "fp32") return Precision::fp32;
  if (s == "fp16") return Precision::fp16;
  return std::nullopt;
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::string precision;
  std::string backend;
  bool print_only = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "key = value config file");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "experiment seed");
  cmd->add_option("--precision", o.precision, "filter: fp64|fp32|fp16");
  cmd->add_option("--backend", o.backend, "filter: all|cell|rcll");
  cmd->add_flag("--print-config", o.print_only, "print the effective config and exit");
}

std::map<std::string, std::string> merge_config(const CommonOpts& o,
                                                std::map<std::string, std::string> defaults) {
  if (!o.config_path.empty()) {
    for (auto& [k, v] : load_config(o.config_path)) defaults[k] = v;
  }
  defaults["seed"] = std::to_string(o.seed);
  return defaults;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-precision SPH neighbor-search experiments"};
  app.require_subcommand(1);

  CommonOpts circle_o, square_o, grad_o, pois_o, scal_o;
  auto* c_circle = app.add_subcommand("circle", "ring disturbance misclassification counts");
  add_common(c_circle, circle_o);
  auto* c_square = app.add_subcommand("square", "unit-square mismatch percentages");
  add_common(c_square, square_o);
  auto* c_grad = app.add_subcommand("gradient", "x^3 gradient RMSE ladder");
  add_common(c_grad, grad_o);
  auto* c_pois = app.add_subcommand("poiseuille", "channel-flow approach comparison");
  add_common(c_pois, pois_o);
  auto* c_scal = app.add_subcommand("scaling", "runtime scaling of the backends");
  add_common(c_scal, scal_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_circle->parsed()) {
      CircleConfig cfg;
      cfg.seed = circle_o.seed;
      auto kv = merge_config(circle_o, {{"dR_ladder", join_ladder(cfg.dR_ladder)},
                                        {"n_ring", std::to_string(cfg.n_ring)}});
      cfg.dR_ladder = parse_ladder(kv["dR_ladder"]);
      cfg.n_ring = std::stoi(kv["n_ring"]);
      if (circle_o.print_only) {
        print_config(kv);
        return 0;
      }
      fs::create_directories(circle_o.out_dir);
      const auto rows = exp_circle(cfg);
      const std::string csv = circle_o.out_dir + "/circle.csv";
      write_circle_csv(rows, csv);
      write_manifest(circle_o.out_dir + "/run.json", "circle", cfg.seed, kv, {csv});
      std::printf("wrote %s\n", csv.c_str());
    } else if (c_square->parsed()) {
      SquareConfig cfg;
      cfg.seed = square_o.seed;
      auto kv = merge_config(square_o,
                             {{"ds_ladder", join_ladder(cfg.ds_ladder)},
                              {"gap_rel", std::to_string(cfg.gap_rel)},
                              {"memory_budget_gb", std::to_string(cfg.memory_budget_gb)},
                              {"allist_max_n", std::to_string(cfg.allist_max_n)}});
      cfg.ds_ladder = parse_ladder(kv["ds_ladder"]);
      cfg.gap_rel = std::stod(kv["gap_rel"]);
      cfg.memory_budget_gb = std::stod(kv["memory_budget_gb"]);
      cfg.allist_max_n = std::stoull(kv["allist_max_n"]);
      if (square_o.print_only) {
        print_config(kv);
        return 0;
      }
      fs::create_directories(square_o.out_dir);
      auto rows = exp_square(cfg);
      if (!square_o.backend.empty()) {
        std::erase_if(rows, [&](const SquareRow& r) { return r.backend != square_o.backend; });
      }
      const std::string csv = square_o.out_dir + "/square.csv";
      write_square_csv(rows, csv);
      write_manifest(square_o.out_dir + "/run.json", "square", cfg.seed, kv, {csv});
      std::printf("wrote %s\n", csv.c_str());
    } else if (c_grad->parsed()) {
      GradientConfig cfg;
      cfg.seed = grad_o.seed;
      auto kv = merge_config(grad_o, {{"ds_ladder", join_ladder(cfg.ds_ladder)},
                                      {"jitter", std::to_string(cfg.jitter)}});
      cfg.ds_ladder = parse_ladder(kv["ds_ladder"]);
      cfg.jitter = std::stod(kv["jitter"]);
      if (grad_o.print_only) {
        print_config(kv);
        return 0;
      }
      fs::create_directories(grad_o.out_dir);
      auto rows = exp_gradient(cfg);
      if (!grad_o.backend.empty()) {
        std::erase_if(rows, [&](const GradientRow& r) { return r.backend != grad_o.backend; });
      }
      if (auto p = parse_precision(grad_o.precision)) {
        std::erase_if(rows, [&](const GradientRow& r) { return r.precision != *p; });
      }
      const std::string csv = grad_o.out_dir + "/gradient.csv";
      write_gradient_csv(rows, csv);
      write_manifest(grad_o.out_dir + "/run.json", "gradient", cfg.seed, kv, {csv});
      std::printf("wrote %s\n", csv.c_str());
    } else if (c_pois->parsed()) {
      PoiseuilleExpConfig cfg;
      auto kv = merge_config(
          pois_o, {{"ds_ladder", join_ladder(cfg.ds_ladder)},
                   {"t_end", std::to_string(cfg.base.t_end)},
                   {"L", std::to_string(cfg.base.L)},
                   {"F", std::to_string(cfg.base.F)},
                   {"nu", std::to_string(cfg.base.nu)},
                   {"rho0", std::to_string(cfg.base.rho0)},
                   {"c", std::to_string(cfg.base.c)}});
      cfg.ds_ladder = parse_ladder(kv["ds_ladder"]);
      cfg.base.t_end = std::stod(kv["t_end"]);
      cfg.base.L = std::stod(kv["L"]);
      cfg.base.F = std::stod(kv["F"]);
      cfg.base.nu = std::stod(kv["nu"]);
      cfg.base.rho0 = std::stod(kv["rho0"]);
      cfg.base.c = std::stod(kv["c"]);
      if (pois_o.print_only) {
        print_config(kv);
        return 0;
      }
      fs::create_directories(pois_o.out_dir);
      cfg.profile_dir = pois_o.out_dir;
      const auto rows = exp_poiseuille(cfg);
      const std::string csv = pois_o.out_dir + "/poiseuille.csv";
      write_poiseuille_csv(rows, csv);
      write_manifest(pois_o.out_dir + "/run.json", "poiseuille", pois_o.seed, kv, {csv});
      std::printf("wrote %s\n", csv.c_str());
    } else if (c_scal->parsed()) {
      ScalingConfig cfg;
      cfg.seed = scal_o.seed;
      auto kv = merge_config(scal_o, {{"n_ladder", "1000,10000,100000,1000000"},
                                      {"repeats", std::to_string(cfg.repeats)},
                                      {"allist_max_n", std::to_string(cfg.allist_max_n)}});
      cfg.n_ladder = parse_ladder_n(kv["n_ladder"]);
      cfg.repeats = std::stoi(kv["repeats"]);
      cfg.allist_max_n = std::stoull(kv["allist_max_n"]);
      if (auto p = parse_precision(scal_o.precision)) cfg.precisions = {*p};
      if (scal_o.print_only) {
        print_config(kv);
        return 0;
      }
      fs::create_directories(scal_o.out_dir);
      auto rows = exp_scaling(cfg);
      if (!scal_o.backend.empty()) {
        std::erase_if(rows, [&](const ScalingRow& r) {
          return r.backend != scal_o.backend && r.backend != scal_o.backend + "_sorted";
        });
      }
      const std::string csv = scal_o.out_dir + "/scaling.csv";
      write_scaling_csv(rows, csv);
      write_manifest(scal_o.out_dir + "/run.json", "scaling", cfg.seed, kv, {csv});
      std::printf("wrote %s\n", csv.c_str());
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
