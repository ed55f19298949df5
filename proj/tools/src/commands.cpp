#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "bf/error.hpp"
#include "bf/figure_eight.hpp"
#include "bf/parallel.hpp"
#include "bf/validation.hpp"

namespace bftool {

using bf::CapillaryParam;
using bf::Error;
using bf::ErrorCode;

namespace {

CapillaryParam param(const RunConfig& cfg, double kappa) {
  return CapillaryParam(kappa, cfg.guard, cfg.resonance_cap);
}

bool is_json(const RunConfig& cfg) { return cfg.format == "json"; }

void emit(const RunConfig& cfg, const std::string& command, const Table& table,
          const json& extra = nullptr) {
  OutputSink sink(cfg.out);
  if (is_json(cfg)) {
    json result = json{{"rows", table.to_json()}};
    if (!extra.is_null())
      for (auto it = extra.begin(); it != extra.end(); ++it) result[it.key()] = it.value();
    sink.stream() << envelope(command, cfg.to_json(), result).dump(2) << '\n';
  } else {
    table.write_csv(sink.stream());
  }
}

bf::QuadrupleOptions quad_options(const RunConfig& cfg) {
  bf::QuadrupleOptions q;
  q.gap_factor = cfg.gap_factor;
  return q;
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", s);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  for (double v : {kappa, eps, mu, mu_max, gap_factor, guard})
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "numeric options must be finite");
  if (band < 8 || band > 512) throw Error(ErrorCode::InvalidArgument, "K must lie in [8, 512]");
  if (eps < 0.0 || eps > 0.05) throw Error(ErrorCode::InvalidArgument, "eps must lie in [0, 0.05]");
  if (format != "csv" && format != "json")
    throw Error(ErrorCode::InvalidArgument, "format must be csv or json");
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 samples");
}

json RunConfig::to_json() const {
  return json{{"kappa", jnum(kappa)},   {"kappa_grid", kappa_grid},
              {"eps", jnum(eps)},       {"eps_grid", eps_grid},
              {"mu", jnum(mu)},         {"mu_max", jnum(mu_max)},
              {"samples", samples},     {"K", band},
              {"gap_factor", jnum(gap_factor)}, {"guard", jnum(guard)},
              {"resonance_order_cap", resonance_cap}, {"format", format}};
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  auto to_double = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v))
      throw Error(ErrorCode::InvalidArgument, "bad number '" + s + "' in grid '" + spec + "'");
    return v;
  };
  if (std::count(spec.begin(), spec.end(), ':') == 2) {
    const auto p1 = spec.find(':');
    const auto p2 = spec.find(':', p1 + 1);
    const double a = to_double(spec.substr(0, p1));
    const double b = to_double(spec.substr(p1 + 1, p2 - p1 - 1));
    const double n = to_double(spec.substr(p2 + 1));
    if (n < 1 || n != std::floor(n) || n > 1e6)
      throw Error(ErrorCode::InvalidArgument, "grid count must be a positive integer");
    const int m = static_cast<int>(n);
    for (int i = 0; i < m; ++i) out.push_back(m == 1 ? a : a + (b - a) * i / (m - 1));
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty grid");
  return out;
}

int cmd_coeffs(const RunConfig& cfg) {
  std::vector<double> kappas =
      cfg.kappa_grid.empty() ? std::vector<double>{cfg.kappa} : parse_grid(cfg.kappa_grid);
  std::sort(kappas.begin(), kappas.end());
  Table t;
  t.header = {"kappa", "c_kappa", "e11", "e22", "e12", "e_wb", "breve_c", "region", "error"};
  t.rows = bf::parallel_map<std::vector<Cell>>(kappas.size(), [&](std::size_t i) {
    const double k = kappas[i];
    std::vector<Cell> row{k};
    try {
      const CapillaryParam p = param(cfg, k);
      const bf::RegionLabel region = bf::classify(p);
      if (region == bf::RegionLabel::Resonant) p.require_regular();
      const auto e = bf::coeffs_e(p);
      row.insert(row.end(), {bf::phase_speed(p), e.e11, e.e22, e.e12, bf::whitham_benjamin(p),
                             bf::breve_c(p), std::string(bf::to_string(region)), std::string()});
    } catch (const Error& ex) {
      const double nan = std::nan("");
      const std::string region =
          ex.code() == ErrorCode::SingularKappa ? "Singular"
          : ex.code() == ErrorCode::ResonantKappa ? "Resonant"
                                                  : "";
      row.insert(row.end(), {nan, nan, nan, nan, nan, nan, region,
                             std::string(bf::to_string(ex.code()))});
    }
    return row;
  });
  emit(cfg, "coeffs", t);
  return 0;
}

int cmd_figure8(const RunConfig& cfg) {
  const CapillaryParam p = param(cfg, cfg.kappa);
  const double lead = bf::mu_bar_leading(p, cfg.eps);  // NotUnstable outside the unstable set
  const double mu_max = cfg.mu_max > 0.0 ? cfg.mu_max : std::min(1.2 * lead, 0.45);
  bf::TraceOptions opt;
  opt.quadruple = quad_options(cfg);
  const bf::SpectralBranch br = bf::trace_figure_eight(p, cfg.eps, mu_max, cfg.samples, cfg.band, opt);
  Table t;
  t.header = {"mu",          "re_lambda1p", "im_lambda1p", "re_lambda1m",
              "im_lambda1m", "re_pred",     "im_pred"};
  for (std::size_t i = 0; i < br.mu_grid.size(); ++i) {
    const bf::cplx pred = bf::figure_eight_leading(p, br.mu_grid[i], cfg.eps);
    t.rows.push_back({br.mu_grid[i], br.lambda1_plus[i].real(), br.lambda1_plus[i].imag(),
                      br.lambda1_minus[i].real(), br.lambda1_minus[i].imag(), pred.real(), pred.imag()});
  }
  json extra = json{{"mu_bar_leading", jnum(lead)}};
  extra["mu_bar_numeric"] = br.mu_bar_numeric ? jnum(*br.mu_bar_numeric) : json(nullptr);
  emit(cfg, "figure8", t, extra);
  return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
  const CapillaryParam p = param(cfg, cfg.kappa);
  if (!(cfg.mu >= 0.0 && cfg.mu < 0.5)) throw Error(ErrorCode::InvalidArgument, "mu must lie in [0, 1/2)");
  const bf::FloquetFamily fam(p, cfg.eps, cfg.band);
  const bf::TruncatedOperator op = fam.at(cfg.mu);
  const bf::SpectrumResult spec = bf::eig(op, true);
  std::vector<bf::cplx> ev = spec.eigenvalues;
  std::sort(ev.begin(), ev.end(), [](bf::cplx a, bf::cplx b) {
    return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
  });
  const double pairing = bf::hamiltonian_pairing_defect(ev) / std::max(spec.norm, 1e-300);

  json result;
  result["kappa"] = jnum(cfg.kappa);
  result["eps"] = jnum(cfg.eps);
  result["mu"] = jnum(cfg.mu);
  result["K"] = cfg.band;
  result["norm"] = jnum(spec.norm);
  result["max_residual"] = jnum(spec.max_residual());
  result["residual_check"] = spec.max_residual() <= 1e-9 ? "pass" : "fail";
  result["hamiltonian_pairing"] = json{{"defect", jnum(pairing)},
                                       {"status", pairing <= 1e-8 ? "pass" : "fail"}};
  json quad = nullptr;
  json quad_error = nullptr;
  try {
    const bf::Quadruple q = bf::near_zero_quadruple(spec, p, cfg.mu, quad_options(cfg));
    quad = json{{"labeled", q.labeled},
                {"lambda1_plus", jcplx(q.values[0])},
                {"lambda1_minus", jcplx(q.values[1])},
                {"lambda0_plus", jcplx(q.values[2])},
                {"lambda0_minus", jcplx(q.values[3])},
                {"inner_radius", jnum(q.inner_radius)},
                {"outer_radius", jnum(q.outer_radius)}};
    if (2 * cfg.band <= 512) {
      const bf::FloquetFamily fam2(p, cfg.eps, 2 * cfg.band);
      const bf::Quadruple q2 =
          bf::near_zero_quadruple(bf::eig(fam2.at(cfg.mu), true), p, cfg.mu, quad_options(cfg));
      double delta = 0.0;
      for (int i = 0; i < 4; ++i) delta = std::max(delta, std::abs(q.values[i] - q2.values[i]));
      quad["k_doubling"] = json{{"K", 2 * cfg.band}, {"max_delta", jnum(delta)}};
    }
  } catch (const Error& ex) {
    quad_error = json{{"code", std::string(bf::to_string(ex.code()))}, {"message", ex.what()}};
  }
  result["quadruple"] = quad;
  json arr = json::array();
  for (const bf::cplx z : ev) arr.push_back(jcplx(z));
  result["eigenvalues"] = arr;

  OutputSink sink(cfg.out);
  if (is_json(cfg)) {
    sink.stream() << envelope("spectrum", cfg.to_json(), result, quad_error).dump(2) << '\n';
  } else {
    Table t;
    t.header = {"re", "im"};
    for (const bf::cplx z : ev) t.rows.push_back({z.real(), z.imag()});
    t.write_csv(sink.stream());
  }
  if (!quad_error.is_null()) {
    std::cerr << "bf: " << quad_error["message"].get<std::string>() << '\n';
    return 4;
  }
  return 0;
}

int cmd_mu_bar(const RunConfig& cfg) {
  const CapillaryParam p = param(cfg, cfg.kappa);
  const bf::FloquetFamily fam(p, cfg.eps, cfg.band);
  const bf::MuBarSearch mb = bf::locate_mu_bar(fam, quad_options(cfg));
  Table t;
  t.header = {"kappa", "eps", "K", "mu_bar_numeric", "mu_bar_leading", "rel_diff", "bracket_lo",
              "bracket_hi", "evaluations"};
  t.rows.push_back({cfg.kappa, cfg.eps, static_cast<long long>(cfg.band), mb.mu_bar, mb.leading,
                    (mb.mu_bar - mb.leading) / mb.leading, mb.lo, mb.hi,
                    static_cast<long long>(mb.evaluations)});
  emit(cfg, "mu-bar", t);
  return 0;
}

int cmd_stokes_residual(const RunConfig& cfg) {
  const CapillaryParam p = param(cfg, cfg.kappa);
  p.require_regular();
  std::vector<double> eps = parse_grid(cfg.eps_grid);
  std::sort(eps.begin(), eps.end());
  for (double e : eps)
    if (!(e >= 0.0 && e <= 0.05)) throw Error(ErrorCode::InvalidArgument, "eps must lie in [0, 0.05]");
  const int band = std::min(cfg.band, 64);
  Table t;
  t.header = {"kappa", "eps", "res1", "res2"};
  t.rows = bf::parallel_map<std::vector<Cell>>(eps.size(), [&](std::size_t i) {
    const bf::StokesResidual r = bf::stokes_residual(p, eps[i], band);
    return std::vector<Cell>{cfg.kappa, eps[i], r.res1, r.res2};
  });
  emit(cfg, "stokes-residual", t);
  return 0;
}

int cmd_validate(const RunConfig& cfg) {
  // Open the report first so a bad path fails before the long run.
  std::unique_ptr<OutputSink> report;
  if (!cfg.out.empty()) report = std::make_unique<OutputSink>(cfg.out);

  bf::ValidationConfig vc;
  vc.band = cfg.band;
  vc.mutate_e22_sign = cfg.mutate_e22;
  if (const char* seed = std::getenv("BF_SEED")) vc.seed = std::strtoull(seed, nullptr, 10);

  const auto results = bf::run_acceptance(vc, [](const bf::CriterionResult& r) {
    std::cout << (r.passed ? "PASS" : "FAIL") << "  [" << (r.id < 10 ? " " : "") << r.id << "] "
              << r.name << "  (" << seconds(r.seconds) << " s)  "
              << r.detail << '\n'
              << std::flush;
  });
  const auto passed = std::count_if(results.begin(), results.end(),
                                    [](const bf::CriterionResult& r) { return r.passed; });
  std::cout << passed << "/" << results.size() << " criteria passed\n";

  if (report) {
    Table t;
    t.header = {"id", "name", "passed", "seconds", "detail"};
    for (const auto& r : results)
      t.rows.push_back({static_cast<long long>(r.id), r.name, std::string(r.passed ? "true" : "false"),
                        r.seconds, r.detail});
    if (is_json(cfg)) {
      json result = json{{"rows", t.to_json()},
                         {"passed", static_cast<long long>(passed)},
                         {"total", static_cast<long long>(results.size())}};
      report->stream() << envelope("validate", cfg.to_json(), result).dump(2) << '\n';
    } else {
      t.write_csv(report->stream());
    }
  }
  return passed == static_cast<long>(results.size()) ? 0 : 1;
}

}  // namespace bftool
