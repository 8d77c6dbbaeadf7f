#include "betadual/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "betadual/errors.hpp"
#include "betadual/hightemp_density.hpp"
#include "betadual/loggas.hpp"
#include "betadual/matrixmodels.hpp"
#include "betadual/orthopoly.hpp"
#include "betadual/resolvent.hpp"

namespace betadual {

namespace {

using nlohmann::json;

struct Outcome {
  json result = json::object();
  json checks = json::array();
  std::string csv;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.value("pass", false)) return false;
    return true;
  }
  void check(const std::string& name, bool ok, json detail = json::object()) {
    detail["name"] = name;
    detail["pass"] = ok;
    checks.push_back(std::move(detail));
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::optional<Rational> opt_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_rational(s);
}

void duality_outcome(const DualityReport& rep, Outcome& o) {
  o.result = json{{"identity", rep.identity}, {"statement", rep.statement}, {"pass", rep.pass}};
  if (!rep.extra.is_null()) o.result["extra"] = rep.extra;
  std::ostringstream csv;
  csv << "order,lhs,rhs,equal\n";
  for (const auto& r : rep.records) {
    json rec = r;
    o.check(rep.identity + "/" + std::to_string(r.order), r.equal, rec);
    csv << r.order << ',' << csv_quote(r.lhs.to_string()) << ',' << csv_quote(r.rhs.to_string()) << ','
        << (r.equal ? "true" : "false") << '\n';
  }
  if (rep.records.empty()) o.check(rep.identity, rep.pass);
  // identity-level checks beyond the per-order records
  if (rep.pass != std::all_of(rep.records.begin(), rep.records.end(), [](auto& r) { return r.equal; }))
    o.check(rep.identity + "/auxiliary", rep.pass);
  o.csv = csv.str();
}

std::string polynomial_csv(const MultiPoly& p) {
  std::ostringstream csv;
  csv << "N,a,b,t,alpha,coefficient\n";
  for (const auto& [e, c] : p.terms()) {
    for (int k : e) csv << k << ',';
    csv << c.get_str() << '\n';
  }
  return csv.str();
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw std::invalid_argument("grid must be lo:hi:n");
  std::size_t used = 0;
  const double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
  const int n = std::stoi(parts[2], &used);
  if (used != parts[2].size()) throw std::invalid_argument("grid count must be an integer");
  return linspace(lo, hi, n);
}

json config_of(const CLI::App& app) {
  json cfg = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_type_size() == 0 && opt->get_expected_max() == 0) {
        cfg[name] = true;
      } else {
        cfg[name] = res.size() == 1 ? json(res[0]) : json(res);
      }
    } else if (!opt->get_default_str().empty()) {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and numerical checks of high-low temperature duality for beta ensembles",
               "betadual"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kToolVersion);

  std::string format = "json", out_path;
  std::uint64_t seed = 1;
  bool verbose = false;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", out_path, "Write the report to this file instead of stdout");
  app.add_option("--seed", seed, "Random seed for sampling")->capture_default_str();
  app.add_flag("--verbose", verbose, "Progress messages on stderr");

  std::function<void(Outcome&)> action;
  CLI::App* chosen = nullptr;
  auto sub = [&](const char* name, const char* help) {
    return app.add_subcommand(name, help);
  };

  // moments
  std::string m_family, m_regime = "low", m_source = "rederived";
  int m_order = 0;
  {
    auto* s = sub("moments", "Resolvent moments from the Riccati recurrences");
    s->add_option("--family", m_family, "g | l | j")->required();
    s->add_option("--regime", m_regime, "low | high")->check(CLI::IsMember({"low", "high"}))->capture_default_str();
    s->add_option("--order", m_order, "Order P")->required()->check(CLI::NonNegativeNumber);
    s->add_option("--source", m_source, "rederived | paper (low regime)")
        ->check(CLI::IsMember({"rederived", "paper"}))
        ->capture_default_str();
    s->final_callback([&] {
      action = [&](Outcome& o) {
        const Family f = parse_family(m_family);
        MomentSeries ms = parse_regime(m_regime) == Regime::Low
                              ? moments_zero_temp(f, m_order, parse_source(m_source))
                              : moments_high_temp(f, m_order);
        o.result = ms;
        SeriesTail res = riccati_residual(ms);
        bool zero = true;
        for (const auto& c : res.coefficients()) zero = zero && c.is_zero();
        o.check("riccati-residual", zero, {{"residual_order", res.order()}});
        std::ostringstream csv;
        csv << "index,value\n";
        for (std::size_t k = 0; k < ms.moments.size(); ++k) csv << k << ',' << csv_quote(ms.moments[k].to_string()) << '\n';
        o.csv = csv.str();
      };
    });
  }

  // dual-check
  std::string d_identity;
  int d_order = 0;
  {
    auto* s = sub("dual-check", "Exact duality identity, order by order");
    s->add_option("--identity", d_identity, "w3 | w3L | jacobi-n1 | gauss-finite | laguerre-finite")
        ->required()
        ->check(CLI::IsMember({"w3", "w3L", "jacobi-n1", "gauss-finite", "laguerre-finite",
                               "laguerre-finite-variant"}));
    s->add_option("--order", d_order, "Highest order")->required()->check(CLI::NonNegativeNumber);
    s->final_callback([&] {
      action = [&](Outcome& o) {
        if (d_identity == "gauss-finite" || d_identity.rfind("laguerre-finite", 0) == 0)
          duality_outcome(duality_check_finite(parse_finite_duality(d_identity), d_order), o);
        else
          duality_outcome(duality_check_series(parse_series_identity(d_identity), d_order), o);
      };
    });
  }

  // dual-check-finite
  std::string f_family;
  int f_p = 0;
  bool f_variant = false;
  {
    auto* s = sub("dual-check-finite", "Finite (N, kappa) duality on the matrix-model moments");
    s->add_option("--family", f_family, "g | l")->required()->check(CLI::IsMember({"g", "l", "G", "L", "gaussian", "laguerre"}));
    s->add_option("--p", f_p, "Highest order")->required()->check(CLI::NonNegativeNumber);
    s->add_flag("--variant", f_variant, "Laguerre: check the map with prefactor (-t)^p and a -> -a instead");
    s->final_callback([&] {
      action = [&](Outcome& o) {
        FiniteDuality which = parse_finite_duality(f_family);
        if (f_variant && which == FiniteDuality::Laguerre) which = FiniteDuality::LaguerreVariant;
        duality_outcome(duality_check_finite(which, f_p), o);
      };
    });
  }

  // oracle-moments
  std::string o_family, o_a;
  int o_p = 0, o_n = 0;
  double o_kappa = 0;
  bool o_symbolic = false;
  {
    auto* s = sub("oracle-moments", "Exact moments of the matrix models by closed-walk enumeration");
    s->add_option("--family", o_family, "g | l")->required()->check(CLI::IsMember({"g", "l", "G", "L", "gaussian", "laguerre"}));
    s->add_option("--p", o_p, "Power p")->required()->check(CLI::NonNegativeNumber);
    s->add_flag("--symbolic", o_symbolic, "Interpolate in N (default when --n is absent)");
    s->add_option("--n", o_n, "Fixed N")->check(CLI::Range(1, kMaxWalkN));
    s->add_option("--kappa", o_kappa, "Also evaluate at this kappa")->check(CLI::PositiveNumber);
    s->add_option("--a", o_a, "Laguerre exponent (symbolic when absent)");
    s->final_callback([&] {
      action = [&](Outcome& o) {
        const Family f = parse_family(o_family);
        MultiPoly value;
        if (o_symbolic || o_n == 0) {
          BivariateMoment b = moment_bivariate(f, o_p);
          o.result = b;
          o.check("holdout", b.holdout_ok, {{"holdout_n", b.holdout_n}});
          value = b.value;
          if (auto a = opt_rational(o_a)) value = value.partial_eval({{Var::a, *a}});
        } else {
          WalkMoment w = expected_trace_power(f, o_n, o_p, opt_rational(o_a));
          o.result = w;
          value = w.value;
        }
        o.result["normalisation"] = f == Family::Gaussian ? "2^p E Tr M^{2p}" : "E Tr (B B^T)^p";
        if (o_kappa > 0) {
          Assignment at{{Var::t, Rational(1) / Rational(o_kappa)}};
          if (o_n > 0 && !o_symbolic) at[Var::N] = o_n;
          if (value.degree(Var::N) == 0 || at.count(Var::N)) {
            MultiPoly partly = value.partial_eval(at);
            o.result["at_kappa"] = partly;
            o.result["at_kappa_text"] = partly.to_string();
            if (partly.is_constant()) o.result["at_kappa_value"] = to_double(partly.constant_term());
          }
        }
        o.csv = polynomial_csv(value);
      };
    });
  }

  // zeros
  std::string z_family, z_a, z_b;
  int z_n = 0;
  {
    auto* s = sub("zeros", "Zeros of a classical orthogonal polynomial");
    s->add_option("--family", z_family, "hermite | laguerre | jacobi")->required();
    s->add_option("--n", z_n, "Degree")->required()->check(CLI::NonNegativeNumber);
    s->add_option("--a", z_a, "Exponent a (Laguerre, Jacobi)");
    s->add_option("--b", z_b, "Exponent b (Jacobi)");
    s->final_callback([&] {
      action = [&](Outcome& o) {
        ZeroSet z = poly_zeros(parse_family(z_family), z_n, opt_rational(z_a), opt_rational(z_b));
        o.result = z;
        o.check("count", static_cast<int>(z.zeros.size()) == z_n);
        o.check("residual", z.residual <= 1e-12, {{"residual", z.residual}, {"tolerance", 1e-12}});
        std::ostringstream csv;
        csv << "index,zero\n";
        for (std::size_t i = 0; i < z.zeros.size(); ++i) csv << i + 1 << ',' << fmt(z.zeros[i]) << '\n';
        o.csv = csv.str();
      };
    });
  }

  // crystallize
  std::string c_family, c_a, c_b;
  int c_n = 0;
  double c_tol = 1e-12;
  {
    auto* s = sub("crystallize", "Minimise the log-gas energy and compare with polynomial zeros");
    s->add_option("--family", c_family, "g | l | j")->required();
    s->add_option("--n", c_n, "Number of particles")->required()->check(CLI::PositiveNumber);
    s->add_option("--a", c_a, "Exponent a");
    s->add_option("--b", c_b, "Exponent b");
    s->add_option("--tol", c_tol, "Gradient tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    s->final_callback([&] {
      action = [&](Outcome& o) {
        const Family f = parse_family(c_family);
        auto a = opt_rational(c_a), b = opt_rational(c_b);
        Potential pot{f, c_n, a ? to_double(*a) : 0.0, b ? to_double(*b) : 0.0};
        MinimizationResult r = crystallize(pot, std::nullopt, c_tol);
        ZeroSet z = poly_zeros(f, c_n, a, b);
        double dev = 0;
        for (std::size_t i = 0; i < z.zeros.size(); ++i)
          dev = std::max(dev, std::abs(r.configuration[i] - z.zeros[i]));
        o.result = json{{"minimization", r}, {"zeros", z}, {"max_deviation", dev}};
        o.check("converged", r.converged, {{"gradient_norm", r.gradient_norm}});
        o.check("hessian-positive", r.hessian_min_eigenvalue > 0, {{"min_eigenvalue", r.hessian_min_eigenvalue}});
        o.check("matches-zeros", dev <= 1e-10, {{"max_deviation", dev}, {"tolerance", 1e-10}});
        std::ostringstream csv;
        csv << "index,minimizer,zero\n";
        for (std::size_t i = 0; i < z.zeros.size(); ++i)
          csv << i + 1 << ',' << fmt(r.configuration[i]) << ',' << fmt(z.zeros[i]) << '\n';
        o.csv = csv.str();
      };
    });
  }

  // sample
  std::string s_family;
  int s_n = 0;
  double s_kappa = 0, s_a = 0;
  std::size_t s_samples = 1000;
  {
    auto* s = sub("sample", "Draw spectra from the tridiagonal / bidiagonal models");
    s->add_option("--family", s_family, "g | l")->required()->check(CLI::IsMember({"g", "l", "G", "L", "gaussian", "laguerre"}));
    s->add_option("--n", s_n, "Matrix size")->required()->check(CLI::PositiveNumber);
    s->add_option("--kappa", s_kappa, "kappa = beta/2")->required()->check(CLI::PositiveNumber);
    s->add_option("--a", s_a, "Laguerre exponent");
    s->add_option("--samples", s_samples, "Number of spectra")->capture_default_str()->check(CLI::PositiveNumber);
    s->final_callback([&] {
      action = [&](Outcome& o) {
        ModelParams m{parse_family(s_family), s_n, s_kappa, s_a};
        validate(m);
        json spectra = json::array();
        std::ostringstream csv;
        csv << "sample";
        for (int i = 1; i <= s_n; ++i) csv << ",lambda_" << i;
        csv << '\n';
        bool sorted = true, nonneg = true;
        for (std::size_t i = 0; i < s_samples; ++i) {
          SpectrumSample sp = sample_spectrum(m, seed, i);
          sorted = sorted && std::is_sorted(sp.eigenvalues.begin(), sp.eigenvalues.end());
          for (double e : sp.eigenvalues) nonneg = nonneg && (m.family == Family::Gaussian || e >= 0);
          spectra.push_back(sp.eigenvalues);
          csv << i;
          for (double e : sp.eigenvalues) csv << ',' << fmt(e);
          csv << '\n';
        }
        o.result = json{{"params", m}, {"seed", seed}, {"spectra", spectra}};
        if (s_samples >= 2) {
          json est = json::array();
          const int k_max = m.family == Family::Gaussian ? 4 : std::min(4, kMaxWalkPLaguerre);
          for (const auto& e : mc_moments(m, k_max, s_samples, seed)) {
            json row = e;
            if (m.n <= kMaxWalkN) row["exact"] = exact_moment(m, e.power);
            est.push_back(row);
          }
          o.result["moment_estimates"] = est;
        }
        o.check("sorted", sorted);
        o.check("nonnegative", nonneg);
        o.csv = csv.str();
      };
    });
  }

  // density
  double h_alpha = 0;
  std::string h_grid;
  {
    auto* s = sub("density", "High-temperature Gaussian density on a grid");
    s->add_option("--alpha", h_alpha, "alpha > 0")->required();
    s->add_option("--grid", h_grid, "lo:hi:n")->required();
    s->final_callback([&] {
      action = [&](Outcome& o) {
        std::vector<double> xs = parse_grid(h_grid);
        json rows = json::array();
        std::ostringstream csv;
        csv << "x,rho\n";
        bool ok = true;
        for (double x : xs) {
          const double r = high_temp_density(x, h_alpha);
          ok = ok && std::isfinite(r) && r >= 0;
          rows.push_back({{"x", x}, {"rho", r}});
          csv << fmt(x) << ',' << fmt(r) << '\n';
        }
        o.result = json{{"alpha", h_alpha}, {"grid", rows}};
        o.check("finite-nonnegative", ok);
        o.csv = csv.str();
      };
    });
  }

  // resolvent-star
  double r_alpha = 0, r_x = 0;
  {
    auto* s = sub("resolvent-star", "High-temperature Gaussian resolvent at one point");
    s->add_option("--alpha", r_alpha, "alpha > 0, or a negative integer -N")->required();
    s->add_option("--x", r_x, "Real point")->required();
    s->final_callback([&] {
      action = [&](Outcome& o) {
        const double v = high_temp_resolvent(r_x, r_alpha);
        o.result = json{{"alpha", r_alpha}, {"x", r_x}, {"value", v}};
        if (r_alpha > 0) {
          const auto w = high_temp_resolvent_complex(r_x, r_alpha);
          o.result["imag"] = w.imag();
          o.result["density"] = high_temp_density(r_x, r_alpha);
          o.result["route"] = "integral representation";
        } else {
          o.result["route"] = "hermite";
        }
        o.check("finite", std::isfinite(v));
        o.csv = "x,alpha,value\n" + fmt(r_x) + ',' + fmt(r_alpha) + ',' + fmt(v) + '\n';
      };
    });
  }

  // hypergeom-check
  int g_n = 4;
  {
    auto* s = sub("hypergeom-check", "Jacobi polynomial against its terminating 2F1 sum");
    s->add_option("--n", g_n, "Degree")->capture_default_str()->check(CLI::NonNegativeNumber);
    s->final_callback([&] { action = [&](Outcome& o) { duality_outcome(hypergeom_identity_check(g_n), o); }; });
  }

  // catalan-check
  int k_order = 8;
  {
    auto* s = sub("catalan-check", "Catalan leading coefficients and semicircle moments");
    s->add_option("--order", k_order, "Highest p")->capture_default_str()->check(CLI::NonNegativeNumber);
    s->final_callback([&] { action = [&](Outcome& o) { duality_outcome(catalan_check(k_order), o); }; });
  }

  std::vector<std::string> argv_store{"betadual"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << '\n';
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }
  if (!app.get_subcommands().empty()) chosen = app.get_subcommands().front();
  if (!action || !chosen) {
    err << "error: no subcommand\n";
    return kExitUsage;
  }

  Outcome o;
  int code = kExitPass;
  try {
    if (verbose) err << "[betadual] running " << chosen->get_name() << '\n';
    action(o);
  } catch (const PoleError& e) {
    o.check("error", false, {{"message", e.what()}, {"kind", "pole"}});
  } catch (const OrderUnderflow& e) {
    o.check("error", false, {{"message", e.what()}, {"kind", "order-underflow"}});
  } catch (const ConvergenceError& e) {
    o.check("error", false, {{"message", e.what()}, {"kind", "convergence"}});
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    o.check("error", false, {{"message", e.what()}, {"kind", "internal"}});
  }
  const bool pass = o.pass();
  if (!pass) code = kExitCheckFailed;

  std::string text;
  if (format == "csv" && !o.csv.empty() && pass) {
    text = o.csv;
  } else if (format == "csv") {
    std::ostringstream csv;
    csv << "check,pass\n";
    for (const auto& c : o.checks) csv << csv_quote(c.value("name", "")) << ',' << (c.value("pass", false) ? "true" : "false") << '\n';
    text = csv.str();
  } else {
    json report{{"schema_version", kSchemaVersion},
                {"tool_version", kToolVersion},
                {"command", chosen->get_name()},
                {"config", {{"global", config_of(app)}, {"options", config_of(*chosen)}}},
                {"checks", o.checks},
                {"result", o.result},
                {"pass", pass}};
    text = report.dump(2) + "\n";
  }
  try {
    if (out_path.empty())
      out << text;
    else
      write_atomic(out_path, text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  if (verbose) err << "[betadual] " << (pass ? "pass" : "FAIL") << '\n';
  return code;
}

}  // namespace betadual
