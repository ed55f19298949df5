// bf: coefficient tables, spectra, figure-eight traces and the self-check suite.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "bf/error.hpp"
#include "commands.hpp"

namespace {

using bftool::json;
using bftool::RunConfig;

// One option bound to a RunConfig field, plus the way a config-file value is
// written into the same field.
struct Binding {
  CLI::Option* option = nullptr;
  std::function<void(const json&)> from_json;
};

struct Subcommand {
  CLI::App* app = nullptr;
  std::map<std::string, Binding> bindings;  // keyed by config-file name
  std::function<int(const RunConfig&)> run;
};

template <class T>
void bind_option(Subcommand& sc, const std::string& key, const std::string& flag, T& field,
                 const std::string& help) {
  Binding b;
  b.option = sc.app->add_option(flag, field, help)->capture_default_str();
  b.from_json = [&field, key](const json& v) {
    try {
      field = v.get<T>();
    } catch (const json::exception&) {
      throw bf::Error(bf::ErrorCode::InvalidArgument, "config key '" + key + "' has the wrong type");
    }
  };
  sc.bindings[key] = std::move(b);
}

// Config file values fill in every option the command line left alone.
void apply_config(const std::string& path, Subcommand& sc) {
  std::ifstream in(path);
  if (!in) throw bf::Error(bf::ErrorCode::IoError, "cannot read config '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw bf::Error(bf::ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw bf::Error(bf::ErrorCode::InvalidArgument, "config must be a JSON object");
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    std::string key = it.key();
    for (char& c : key)
      if (c == '-') c = '_';
    const auto b = sc.bindings.find(key);
    if (b == sc.bindings.end())
      throw bf::Error(bf::ErrorCode::InvalidArgument, "unknown config key '" + it.key() + "'");
    if (b->second.option->count() == 0) b->second.from_json(it.value());
  }
}

void report_error(const bf::Error& e, const std::string& command, const RunConfig& cfg) {
  if (cfg.format == "json") {
    const json err{{"code", std::string(bf::to_string(e.code()))}, {"message", e.what()}};
    std::cout << bftool::envelope(command, cfg.to_json(), nullptr, err).dump(2) << '\n';
  }
  std::cerr << "bf: " << e.what() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benjamin-Feir spectra of gravity-capillary Stokes waves"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  RunConfig cfg;
  std::string config_path;
  std::vector<Subcommand> subs;
  subs.reserve(6);

  auto add = [&](const std::string& name, const std::string& help,
                 std::function<int(const RunConfig&)> run) -> Subcommand& {
    Subcommand& sc = subs.emplace_back();
    sc.app = app.add_subcommand(name, help);
    sc.run = std::move(run);
    sc.app->add_option("--config", config_path, "JSON file of option values; flags take precedence");
    bind_option(sc, "out", "--out", cfg.out, "Output file (stdout when empty)");
    bind_option(sc, "format", "--format", cfg.format, "csv or json");
    sc.bindings["format"].option->check(CLI::IsMember({"csv", "json"}));
    bind_option(sc, "guard", "--guard", cfg.guard, "Distance from 1/2 and 1/n treated as singular or resonant");
    bind_option(sc, "resonance_order_cap", "--resonance-order-cap", cfg.resonance_cap,
                "Largest n whose resonance 1/n is rejected");
    return sc;
  };
  auto physics = [&](Subcommand& sc, bool with_eps) {
    bind_option(sc, "kappa", "--kappa", cfg.kappa, "Surface tension parameter");
    if (with_eps) bind_option(sc, "eps", "--eps", cfg.eps, "Wave amplitude");
    bind_option(sc, "K", "--K", cfg.band, "Fourier truncation, modes -K..K");
    bind_option(sc, "gap_factor", "--gap-factor", cfg.gap_factor,
                "Required ratio between the nearest excluded eigenvalue and the cluster");
  };

  {
    Subcommand& sc = add("coeffs", "Coefficient table over kappa", bftool::cmd_coeffs);
    bind_option(sc, "kappa", "--kappa", cfg.kappa, "Single kappa when no grid is given");
    bind_option(sc, "kappa_grid", "--kappa-grid", cfg.kappa_grid, "a:b:n or comma list");
  }
  {
    Subcommand& sc = add("figure8", "Trace of the unstable eigenvalue pair in mu", bftool::cmd_figure8);
    physics(sc, true);
    bind_option(sc, "mu_max", "--mu-max", cfg.mu_max, "Largest mu (0: 1.2 times the leading threshold)");
    bind_option(sc, "samples", "--samples", cfg.samples, "Equispaced mu samples before refinement");
  }
  {
    Subcommand& sc = add("spectrum", "Full spectrum and the near-zero quadruple at one mu", bftool::cmd_spectrum);
    physics(sc, true);
    bind_option(sc, "mu", "--mu", cfg.mu, "Floquet exponent");
  }
  {
    Subcommand& sc = add("mu-bar", "Numerical instability threshold in mu", bftool::cmd_mu_bar);
    physics(sc, true);
  }
  {
    Subcommand& sc = add("stokes-residual", "Residual of the Stokes expansion", bftool::cmd_stokes_residual);
    bind_option(sc, "kappa", "--kappa", cfg.kappa, "Surface tension parameter");
    bind_option(sc, "eps_grid", "--eps-grid", cfg.eps_grid, "a:b:n or comma list of amplitudes");
    bind_option(sc, "K", "--K", cfg.band, "Fourier truncation");
  }
  {
    Subcommand& sc = add("validate", "Run the twelve self-check criteria", bftool::cmd_validate);
    bind_option(sc, "K", "--K", cfg.band, "Fourier truncation used by the operator checks");
    sc.app->add_flag("--mutate-e22", cfg.mutate_e22, "Flip the sign of e22 (suite must fail)")
        ->group("");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Subcommand* active = nullptr;
  for (auto& sc : subs)
    if (sc.app->parsed()) active = &sc;
  const std::string name = active->app->get_name();
  // spectrum is a JSON report unless asked otherwise
  if (name == "spectrum" && active->bindings["format"].option->count() == 0) cfg.format = "json";

  try {
    if (!config_path.empty()) apply_config(config_path, *active);
    cfg.validate();
    return active->run(cfg);
  } catch (const bf::Error& e) {
    report_error(e, name, cfg);
    return bf::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "bf: " << e.what() << '\n';
    return 4;
  }
}
