// Copyright 2026 The rapidborel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rapidborel/cli.hpp"

#include <CLI11.hpp>

#include "rapidborel/errors.hpp"
#include "run_config.hpp"

namespace rapidborel::cli {
namespace {

struct Defaults {
  double delta;
  double rmin;
  double rmax;
  double tol;
};

void add_common(CLI::App* sub, RunConfig& cfg, const Defaults& d) {
  cfg.delta = d.delta;
  cfg.rmin = d.rmin;
  cfg.rmax = d.rmax;
  cfg.tol = d.tol;
  sub->add_option("--tau", cfg.tau, "exponent scale tau > 0")->capture_default_str();
  sub->add_option("--sigma", cfg.sigma, "growth index sigma > 1")->capture_default_str();
  sub->add_option("--delta", cfg.delta, "sector opening in units of pi/2, in (0, 2)")
      ->capture_default_str();
  sub->add_option("--rmin", cfg.rmin, "inner radius")->capture_default_str();
  sub->add_option("--rmax", cfg.rmax, "outer radius")->capture_default_str();
  sub->add_option("--grid", cfg.grid, "radial x angular resolution")->capture_default_str();
  sub->add_option("--tol", cfg.tol, "tolerance")->capture_default_str();
  sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "seed for quasi-random grids")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extension operators for ultraholomorphic classes of rapid growth"};
  app.require_subcommand(1);
  // Each subcommand owns its configuration so defaults do not leak.
  RunConfig lambert, kernel, moments, extend, verify;

  auto* s_lambert = app.add_subcommand("lambert", "principal Lambert W on a grid or point list");
  add_common(s_lambert, lambert, {1.9, 1e-6, 1e6, 1e-12});
  s_lambert->add_option("--input", lambert.input, "CSV (re,im per line) or JSON [[re,im],...]");
  s_lambert->add_option("--z", lambert.points, "point re,im (repeatable)");

  auto* s_kernel = app.add_subcommand("kernel", "kernel values and sector/flatness fits");
  add_common(s_kernel, kernel, {1.0, 1e-3, 1e3, 1e-10});

  auto* s_moments = app.add_subcommand("moments", "moment table and bound fit");
  add_common(s_moments, moments, {1.0, 1e-3, 1e3, 1e-10});
  s_moments->add_option("--pmax", moments.p_max, "largest moment index")->capture_default_str();
  s_moments->add_flag("!--no-fit", moments.fit, "tabulate without the bound fit");

  auto* s_extend = app.add_subcommand("extend", "extension operator, remainders, round-trip");
  add_common(s_extend, extend, {1.0, 1e-3, 1.0, 1e-10});
  s_extend->add_option("--input", extend.input, "series JSON {tau, sigma, coefficients}");
  s_extend->add_option("--series", extend.series, "built-in series: moment, single, zero")
      ->capture_default_str();
  s_extend->add_option("--length", extend.length, "built-in series length")->capture_default_str();
  s_extend->add_option("--nmax", extend.n_max, "largest remainder order")->capture_default_str();
  s_extend->add_option("--points", extend.count, "number of grid points")->capture_default_str();
  extend.p_max = 5;
  s_extend->add_option("--pmax", extend.p_max, "largest round-trip order")->capture_default_str();

  auto* s_verify = app.add_subcommand("verify", "end-to-end invariant suite");
  add_common(s_verify, verify, {1.0, 1e-3, 1e3, 1e-10});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (s_lambert->parsed()) {
      lambert.command = "lambert";
      return cmd_lambert(lambert, out);
    }
    if (s_kernel->parsed()) {
      kernel.command = "kernel";
      return cmd_kernel(kernel, out);
    }
    if (s_moments->parsed()) {
      moments.command = "moments";
      return cmd_moments(moments, out);
    }
    if (s_extend->parsed()) {
      extend.command = "extend";
      return cmd_extend(extend, out);
    }
    verify.command = "verify";
    return cmd_verify(verify, out);
  } catch (const BranchCutError& e) {
    err << "branch cut: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParamError& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitUsage;
  } catch (const MomentTableGap& e) {
    err << "moment table: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "malformed JSON input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "file error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "certificate not produced: " << e.what() << '\n';
    return kExitCertificate;
  }
}

}  // namespace rapidborel::cli
