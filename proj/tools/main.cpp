// Command-line driver: factorizes pruning masks into low-rank binary
// factors, decodes factor files back to masks, compares index formats and
// validates the sparsity model by simulation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bmf/analysis.hpp"
#include "bmf/decompress.hpp"
#include "bmf/errors.hpp"
#include "bmf/factorize.hpp"
#include "bmf/io.hpp"
#include "bmf/sparse_formats.hpp"
#include "bmf/tiling.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;

struct CommonOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};

struct FactorizeOptions {
  std::string input;
  long long rank = 16;
  std::vector<long long> ranks;  // sweep only: trade-off table over ranks
  double sparsity = 0.95;
  std::string tiles = "1x1";
  std::string manip = "none";
  double sp_step = 0.05;
  double sa_tol = 0.001;
  int nmf_iters = 500;
};

bmf::TilingPlan parse_plan(const FactorizeOptions& opt) {
  bmf::TilingPlan plan;
  const auto x = opt.tiles.find('x');
  if (x == std::string::npos) {
    throw bmf::argument_error("--tiles expects PxQ, e.g. 4x4");
  }
  try {
    plan.grid_rows = std::stoll(opt.tiles.substr(0, x));
    plan.grid_cols = std::stoll(opt.tiles.substr(x + 1));
  } catch (const std::exception&) {
    throw bmf::argument_error("--tiles expects PxQ, e.g. 4x4");
  }
  plan.uniform_rank = opt.rank;
  return plan;
}

bmf::ManipMethod parse_manip(const std::string& name, double sparsity) {
  if (name == "none") return bmf::ManipMethod::identity();
  if (name == "square") return bmf::ManipMethod::square();
  if (name == "amplify") return bmf::ManipMethod::amplify(sparsity);
  throw bmf::argument_error("--manip must be none, square or amplify");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw bmf::io_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw bmf::io_error("write failed: " + path.string());
}

// Reproducibility header shared by every CSV and summary this tool writes.
std::string config_header(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string out;
  out += "# tool=bmf version=";
  out += bmf::kLibraryVersion;
  out += "\n";
  for (const auto& [k, v] : kv) {
    out += "# " + k + "=" + v + "\n";
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int run_factorize(const FactorizeOptions& opt, const CommonOptions& common,
                  bool sweep_only) {
  const bmf::DenseMatrix w = bmf::read_weights(opt.input);
  const bmf::TilingPlan plan = parse_plan(opt);

  bmf::NmfConfig nmf_cfg;
  nmf_cfg.max_iters = opt.nmf_iters;
  nmf_cfg.seed = {common.seed};
  bmf::BmfConfig bmf_cfg;
  bmf_cfg.sp_step = opt.sp_step;
  bmf_cfg.sa_tol = opt.sa_tol;
  bmf_cfg.seed = {common.seed};

  const bmf::ManipMethod manip = parse_manip(opt.manip, opt.sparsity);

  fs::create_directories(common.out_dir);
  const std::vector<std::pair<std::string, std::string>> cfg_kv = {
      {"input", opt.input},
      {"rank", std::to_string(opt.rank)},
      {"sparsity", fmt(opt.sparsity)},
      {"tiles", opt.tiles},
      {"manip", opt.manip},
      {"sp_step", fmt(opt.sp_step)},
      {"sa_tol", fmt(opt.sa_tol)},
      {"nmf_iters", std::to_string(opt.nmf_iters)},
      {"seed", std::to_string(common.seed)},
  };

  if (sweep_only) {
    if (plan.grid_rows != 1 || plan.grid_cols != 1) {
      throw bmf::argument_error("sweep traces are untiled; use --tiles 1x1");
    }
    if (!opt.ranks.empty()) {
      const std::vector<bmf::Index> ranks(opt.ranks.begin(), opt.ranks.end());
      const auto rows = bmf::rank_tradeoff_table(w, opt.sparsity, ranks,
                                                 manip, nmf_cfg, bmf_cfg);
      write_text(fs::path(common.out_dir) / "tradeoff.csv",
                 config_header(cfg_kv) + bmf::tradeoff_csv(rows));
      std::cout << "trade-off table: " << rows.size() << " ranks\n";
      return kExitOk;
    }
    const bmf::MaskFactorization f = bmf::factorize_mask(
        w, opt.rank, opt.sparsity, manip, nmf_cfg, bmf_cfg);
    write_text(fs::path(common.out_dir) / "sweep.csv",
               config_header(cfg_kv) + bmf::sweep_trace_csv(f.sweep));
    std::cout << "sweep: " << f.sweep.size() << " points, selected cost "
              << fmt(f.cost) << "\n";
    return kExitOk;
  }

  bmf::TiledFactorization tiled;
  std::vector<bmf::SweepRecord> sweep;
  if (plan.grid_rows == 1 && plan.grid_cols == 1) {
    // Single tile: keep the sweep trace, which the tiled path discards.
    bmf::MaskFactorization f = bmf::factorize_mask(
        w, opt.rank, opt.sparsity, manip, nmf_cfg, bmf_cfg);
    sweep = std::move(f.sweep);
    tiled.plan = plan;
    tiled.rows = w.rows();
    tiled.cols = w.cols();
    tiled.block_costs = {f.cost};
    tiled.total_cost = f.cost;
    tiled.blocks.push_back(std::move(f.factors));
    tiled.achieved_sparsity = 1.0 - bmf::density(bmf::assemble_mask(tiled));
  } else {
    tiled = bmf::tiled_factorize(w, plan, opt.sparsity, manip, nmf_cfg,
                                 bmf_cfg);
  }

  const fs::path out_dir(common.out_dir);
  bmf::write_factors(out_dir / "factors.bidx", tiled);
  if (!sweep.empty()) {
    write_text(out_dir / "sweep.csv",
               config_header(cfg_kv) + bmf::sweep_trace_csv(sweep));
  }

  const std::uint64_t index_bits =
      bmf::tiled_index_bits(plan, w.rows(), w.cols());
  const std::uint64_t bitmap_bits = static_cast<std::uint64_t>(w.rows()) *
                                    static_cast<std::uint64_t>(w.cols());
  std::string summary = config_header(cfg_kv);
  summary += "key,value\n";
  summary += "achieved_sparsity," + fmt(tiled.achieved_sparsity) + "\n";
  summary += "cost," + fmt(tiled.total_cost) + "\n";
  summary += "index_bits," + std::to_string(index_bits) + "\n";
  summary += "compression_ratio," +
             fmt(static_cast<double>(bitmap_bits) /
                 static_cast<double>(index_bits)) +
             "\n";
  write_text(out_dir / "summary.csv", summary);

  std::cout << "achieved sparsity " << fmt(tiled.achieved_sparsity)
            << ", cost " << fmt(tiled.total_cost) << ", index bits "
            << index_bits << ", compression "
            << fmt(static_cast<double>(bitmap_bits) /
                   static_cast<double>(index_bits))
            << "x\n";
  return kExitOk;
}

std::vector<bmf::ReferenceConstant> load_references(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw bmf::io_error("cannot open reference file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw bmf::parse_error(std::string("reference file is not valid JSON: ") +
                           e.what());
  }
  std::vector<bmf::ReferenceConstant> refs;
  if (!doc.is_array()) {
    throw bmf::parse_error("reference file must be a JSON array");
  }
  for (const auto& item : doc) {
    bmf::ReferenceConstant ref;
    try {
      ref.name = item.at("name").get<std::string>();
      ref.bits = item.at("bits").get<std::uint64_t>();
      ref.comment = item.value("comment", std::string());
    } catch (const nlohmann::json::exception& e) {
      throw bmf::parse_error(
          std::string("reference entry needs name and bits: ") + e.what());
    }
    refs.push_back(std::move(ref));
  }
  return refs;
}

bool has_magic(const std::string& path, const char magic[5]) {
  std::ifstream in(path, std::ios::binary);
  char buf[4] = {};
  in.read(buf, 4);
  return in && std::memcmp(buf, magic, 4) == 0;
}

int run_compare(const std::string& input, const std::string& refs_path,
                long long rank, const std::string& tiles,
                const CommonOptions& common) {
  const auto refs = load_references(refs_path);

  bmf::BitMatrix mask;
  std::optional<bmf::TilingPlan> plan;
  if (has_magic(input, "BIDX")) {
    const bmf::FactorBundle bundle = bmf::read_factors(input);
    mask = bmf::assemble_mask(bundle);
    plan = bundle.plan();
  } else {
    mask = bmf::read_mask(input);
    if (rank > 0) {
      FactorizeOptions opt;
      opt.rank = rank;
      opt.tiles = tiles;
      plan = parse_plan(opt);
    }
  }

  const bmf::FormatReport report = bmf::format_report(
      mask, plan ? &*plan : nullptr, refs);
  const std::string csv = bmf::format_report_csv(report);

  fs::create_directories(common.out_dir);
  write_text(fs::path(common.out_dir) / "report.csv",
             config_header({{"input", input}}) + csv);
  std::cout << csv;
  return kExitOk;
}

int run_simulate(const std::vector<double>& sp_grid,
                 const std::vector<double>& sz_grid,
                 const std::vector<long long>& ranks, long long rows,
                 long long cols, int trials, const CommonOptions& common) {
  std::vector<bmf::MonteCarloResult> results;
  for (const double sp : sp_grid) {
    for (const double sz : sz_grid) {
      for (const long long k : ranks) {
        results.push_back(bmf::verify_sparsity_model(
            sp, sz, k, rows, cols, {common.seed}, trials));
      }
    }
  }
  const std::string csv = bmf::montecarlo_csv(results);
  fs::create_directories(common.out_dir);
  write_text(fs::path(common.out_dir) / "montecarlo.csv",
             config_header({{"rows", std::to_string(rows)},
                            {"cols", std::to_string(cols)},
                            {"trials", std::to_string(trials)},
                            {"seed", std::to_string(common.seed)}}) +
                 csv);
  std::cout << csv;
  return kExitOk;
}

int run_decode(const std::string& input, const CommonOptions& common) {
  const bmf::FactorBundle bundle = bmf::read_factors(input);
  const bmf::BitMatrix mask = bmf::assemble_mask(bundle);
  fs::create_directories(common.out_dir);
  bmf::write_mask(fs::path(common.out_dir) / "mask.bmsk", mask);
  std::cout << "decoded " << mask.rows() << "x" << mask.cols()
            << " mask, sparsity " << fmt(1.0 - bmf::density(mask)) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-rank binary factorization of pruning masks"};
  app.require_subcommand(1);

  CommonOptions common;
  FactorizeOptions fopt;
  std::string refs_path;
  std::vector<double> sp_grid{0.3, 0.6, 0.9};
  std::vector<double> sz_grid{0.3, 0.6, 0.9};
  std::vector<long long> k_grid{2, 8, 16};
  long long sim_rows = 1000;
  long long sim_cols = 1000;
  int sim_trials = 8;
  std::string input;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--seed", common.seed, "RNG seed");
  };
  auto add_factorize_opts = [&](CLI::App* cmd) {
    cmd->add_option("input", fopt.input, "weight file (WMAT)")->required();
    cmd->add_option("--rank", fopt.rank, "factorization rank");
    cmd->add_option("--sparsity", fopt.sparsity, "target sparsity in (0,1)");
    cmd->add_option("--tiles", fopt.tiles, "tiling grid PxQ");
    cmd->add_option("--manip", fopt.manip, "none, square or amplify");
    cmd->add_option("--sp-step", fopt.sp_step, "sweep grid step");
    cmd->add_option("--sa-tol", fopt.sa_tol, "sparsity tolerance");
    cmd->add_option("--nmf-iters", fopt.nmf_iters, "NMF iteration cap");
    add_common(cmd);
  };

  CLI::App* factorize =
      app.add_subcommand("factorize", "factorize a weight matrix's mask");
  add_factorize_opts(factorize);

  CLI::App* sweep =
      app.add_subcommand("sweep", "emit the sweep trace without factors");
  add_factorize_opts(sweep);
  sweep->add_option("--ranks", fopt.ranks,
                    "emit a rank trade-off table over these ranks instead")
      ->delimiter(',');

  CLI::App* decode =
      app.add_subcommand("decode", "decode a factor file to a mask");
  decode->add_option("input", input, "factor file (BIDX)")->required();
  add_common(decode);

  long long cmp_rank = 0;
  std::string cmp_tiles = "1x1";
  CLI::App* compare =
      app.add_subcommand("compare", "index size report for a mask");
  compare->add_option("input", input, "mask (BMSK) or factor file (BIDX)")
      ->required();
  compare->add_option("--refs", refs_path,
                      "JSON array of reference rows: name, bits, comment");
  compare->add_option("--rank", cmp_rank,
                      "factor rank for mask inputs (enables the bmf row)");
  compare->add_option("--tiles", cmp_tiles, "tiling grid PxQ for mask inputs");
  add_common(compare);

  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo sparsity-model check");
  simulate->add_option("--sp-grid", sp_grid, "s_p values")->delimiter(',');
  simulate->add_option("--sz-grid", sz_grid, "s_z values")->delimiter(',');
  simulate->add_option("--ranks", k_grid, "ranks")->delimiter(',');
  simulate->add_option("--rows", sim_rows, "factor rows");
  simulate->add_option("--cols", sim_cols, "factor cols");
  simulate->add_option("--trials", sim_trials, "trials per grid point");
  add_common(simulate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (factorize->parsed()) return run_factorize(fopt, common, false);
    if (sweep->parsed()) return run_factorize(fopt, common, true);
    if (decode->parsed()) return run_decode(input, common);
    if (compare->parsed()) {
      return run_compare(input, refs_path, cmp_rank, cmp_tiles, common);
    }
    if (simulate->parsed()) {
      return run_simulate(sp_grid, sz_grid, k_grid, sim_rows, sim_cols,
                          sim_trials, common);
    }
  } catch (const bmf::infeasible_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const bmf::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const bmf::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const bmf::argument_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const bmf::error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
