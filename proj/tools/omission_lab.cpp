// Copyright 2026 The omission-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "omission/config.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;

struct CliOptions {
  std::string config_path;
  std::string out_dir = "./out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool force = false;
  bool quiet = false;
  int jobs = 0;
};

void ensure_writable(const fs::path& file, bool force) {
  if (fs::exists(file) && !force) {
    throw omission::ConfigError("refusing to overwrite existing report " +
                                file.string() + " (use --force)");
  }
}

std::ofstream open_report(const fs::path& file, bool force) {
  ensure_writable(file, force);
  std::ofstream out(file);
  if (!out) throw omission::ConfigError("cannot write " + file.string());
  return out;
}

int run(const CliOptions& opts) {
  omission::RunConfig run = omission::load_run_config(opts.config_path);
  if (opts.seed_given) {
    run.experiment.base_seed = opts.seed;
    run.spac_config.seed = opts.seed;
    run.raw["seed"] = opts.seed;
  }
  int jobs = opts.jobs;
  if (jobs <= 0) {
    if (const char* env = std::getenv("OMISSION_LAB_JOBS")) jobs = std::atoi(env);
  }
  if (jobs <= 0) jobs = 1;
  run.experiment.jobs = jobs;
  run.spac_config.jobs = jobs;

  fs::create_directories(opts.out_dir);
  const fs::path out_dir(opts.out_dir);

  switch (run.kind) {
    case omission::RunKind::attack: {
      const fs::path csv_path = out_dir / "attack_report.csv";
      const fs::path json_path = out_dir / "attack_report.json";
      ensure_writable(csv_path, opts.force);
      ensure_writable(json_path, opts.force);
      const omission::SuccessReport report = omission::run_experiment(run.experiment);
      {
        std::ofstream csv = open_report(csv_path, true);
        omission::write_csv(report, csv);
      }
      {
        std::ofstream js = open_report(json_path, true);
        js << omission::report_json(report, run.raw, run.experiment.base_seed).dump(2)
           << '\n';
      }
      if (!opts.quiet) {
        std::cout << "attack: success_rate=" << report.success_rate
                  << " completed=" << report.completed
                  << " failed_setup=" << report.failed_setup
                  << " mean|dAcc|=" << report.mean_abs_delta << '\n'
                  << "reports: " << csv_path.string() << ", " << json_path.string()
                  << '\n';
      }
      return kExitOk;
    }
    case omission::RunKind::sweep: {
      const fs::path csv_path = out_dir / "sweep_heatmap.csv";
      const fs::path json_path = out_dir / "sweep_summary.json";
      ensure_writable(csv_path, opts.force);
      ensure_writable(json_path, opts.force);
      const omission::SweepResult sweep =
          omission::run_pair_sweep(run.experiment, run.sweep_classes);
      {
        std::ofstream csv = open_report(csv_path, true);
        omission::write_heatmap_csv(sweep, csv);
      }
      {
        std::ofstream js = open_report(json_path, true);
        js << omission::sweep_json(sweep, run.raw, run.experiment.base_seed).dump(2)
           << '\n';
      }
      if (!opts.quiet) {
        std::cout << "sweep: " << sweep.cells.size() << " cells over "
                  << sweep.classes.size() << " classes\n"
                  << "reports: " << csv_path.string() << ", " << json_path.string()
                  << '\n';
      }
      return kExitOk;
    }
    case omission::RunKind::spac: {
      const fs::path csv_path = out_dir / "spac_trials.csv";
      const fs::path json_path = out_dir / "spac_summary.json";
      ensure_writable(csv_path, opts.force);
      ensure_writable(json_path, opts.force);
      const omission::spac::BoundReport report =
          omission::spac::verify_bounds(run.spac_config, run.spac_world);
      {
        std::ofstream csv = open_report(csv_path, true);
        omission::spac::write_csv(report, csv);
      }
      {
        std::ofstream js = open_report(json_path, true);
        js << omission::spac_json(report, run.raw, run.spac_config.seed).dump(2)
           << '\n';
      }
      if (!opts.quiet) {
        std::cout << "spac: bound1_fraction=" << report.fraction_bound1
                  << " bound2_fraction=" << report.fraction_bound2
                  << " min_loss=" << report.min_loss_value << '\n'
                  << "reports: " << csv_path.string() << ", " << json_path.string()
                  << '\n';
      }
      return kExitOk;
    }
  }
  return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"targeted data omission experiment runner"};
  CliOptions opts;
  app.add_option("--config", opts.config_path, "JSON run configuration")->required();
  app.add_option("--out", opts.out_dir, "output directory (default ./out)");
  auto* seed_opt = app.add_option("--seed", opts.seed, "override the config seed");
  app.add_flag("--force", opts.force, "overwrite existing report files");
  app.add_flag("--quiet", opts.quiet, "suppress the summary line");
  app.add_option("--jobs", opts.jobs,
                 "worker threads (default: OMISSION_LAB_JOBS or 1)");
  CLI11_PARSE(app, argc, argv);
  opts.seed_given = seed_opt->count() > 0;

  try {
    return run(opts);
  } catch (const omission::PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const omission::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const omission::ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const omission::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
