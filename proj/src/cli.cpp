#include "dirac/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dirac/bari_diagnostics.hpp"

namespace dirac::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

[[noreturn]] void config_error(const std::string& what) { throw CliError(kExitConfig, what); }

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) config_error(std::string("missing key '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) config_error(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<Complex> complex_list(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) config_error(std::string(what) + " must be a nonempty array");
  std::vector<Complex> out;
  for (const auto& e : j) out.push_back(parse_complex(e));
  return out;
}

Complex horner(const std::vector<Complex>& coeffs, double x) {
  Complex acc{0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::function<Complex(double)> fourier_profile(const json& j) {
  if (!j.is_array()) config_error("fourier terms must be an array");
  std::vector<std::pair<Complex, double>> terms;
  for (const auto& t : j) {
    const json& k = require(t, "k");
    if (!k.is_number_integer()) config_error("fourier frequency k must be an integer");
    terms.emplace_back(parse_complex(require(t, "c")), static_cast<double>(k.get<int>()));
  }
  return [terms](double x) {
    Complex acc{0.0};
    for (const auto& [c, k] : terms) acc += c * std::exp(kI * (2.0 * kPi * k * x));
    return acc;
  };
}

// A profile is a complex constant or {"polynomial": [...]}.
std::function<Complex(double)> profile(const json& j, const char* what) {
  if (j.is_object()) {
    auto coeffs = complex_list(require(j, "polynomial"), what);
    return [coeffs](double x) { return horner(coeffs, x); };
  }
  const Complex v = parse_complex(j);
  return [v](double) { return v; };
}

Potential parse_potential(const json& j, const std::string& base_dir, int grid) {
  const std::string kind = require(j, "kind").get<std::string>();
  const double p_class = j.contains("p_class") ? number(j.at("p_class"), "p_class") : 2.0;
  if (kind == "zero") return Potential::zero();
  if (kind == "constant") {
    return Potential::constant(parse_complex(require(j, "q12")), parse_complex(require(j, "q21")));
  }
  if (kind == "polynomial") {
    auto c12 = complex_list(require(j, "q12"), "q12");
    auto c21 = complex_list(require(j, "q21"), "q21");
    return Potential::callable([c12](double x) { return horner(c12, x); },
                               [c21](double x) { return horner(c21, x); }, p_class);
  }
  if (kind == "fourier") {
    return Potential::callable(fourier_profile(require(j, "q12")), fourier_profile(require(j, "q21")),
                               p_class);
  }
  if (kind == "sampled") {
    std::filesystem::path path = require(j, "path").get<std::string>();
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    return read_sampled_potential(path.string(), grid);
  }
  config_error("unknown potential kind '" + kind + "'");
}

json bc_json(const CanonicalBC& bc) {
  return {{"a", complex_json(bc.a)}, {"b", complex_json(bc.b)}, {"c", complex_json(bc.c)},
          {"d", complex_json(bc.d)}, {"u", complex_json(bc.u())}};
}

json matrix_json(const BoundaryMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < 2; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json weights_json(const DiracWeights& w) {
  json j = {{"b1", w.b1()}, {"b2", w.b2()}, {"beta", w.beta()}};
  if (w.rationality()) {
    const auto& r = *w.rationality();
    j["rational"] = {r.n1, r.n2, r.b0};
  }
  return j;
}

const CanonicalBC& canonical(const ProblemConfig& cfg) {
  if (!cfg.canonical_bc) {
    throw CliError(kExitNotCanonicalizable, "boundary conditions are not canonicalizable");
  }
  return *cfg.canonical_bc;
}

json bundle(const std::string& command, const ProblemConfig& cfg, json payload,
            std::chrono::steady_clock::time_point start) {
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {{"command", command},
          {"config", cfg.source},
          {"meta", {{"version", kVersion}, {"elapsed_seconds", elapsed}}},
          {"payload", std::move(payload)}};
}

json spectrum_rows(const Spectrum& zeros, const Spectrum* unperturbed) {
  json rows = json::array();
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const auto& z = zeros[i];
    json row = {{"n", z.index},
                {"lambda", complex_json(z.value)},
                {"multiplicity", z.multiplicity},
                {"residual", z.residual},
                {"method", to_string(z.method)}};
    if (unperturbed) {
      const Complex l0 = (*unperturbed)[i].value;
      row["lambda0"] = complex_json(l0);
      row["drift"] = std::abs(z.value - l0);
    }
    rows.push_back(row);
  }
  return rows;
}

int window_count(const SpectrumWindow& win, std::size_t found) {
  if (win.n_side) return 2 * *win.n_side + 1;
  return static_cast<int>(found);
}

template <typename F>
json guarded(F&& body) {
  try {
    return body();
  } catch (const SpectralError& e) {
    throw CliError(exit_code(e), e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  config_error("complex values are numbers or [re, im] pairs, got " + j.dump());
}

json complex_json(Complex z) { return json::array({z.real() + 0.0, z.imag() + 0.0}); }

Potential read_sampled_potential(const std::string& path, int m) {
  std::ifstream in(path);
  if (!in) config_error("cannot open sampled potential '" + path + "'");
  std::vector<double> xs;
  std::vector<Complex> s12, s21;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, r12, i12, r21, i21;
    if (!(row >> x >> r12 >> i12 >> r21 >> i21)) {
      if (xs.empty()) continue;  // header
      config_error("malformed row in '" + path + "': " + line);
    }
    if (!xs.empty() && !(x > xs.back())) config_error("sampled potential needs increasing x");
    xs.push_back(x);
    s12.emplace_back(r12, i12);
    s21.emplace_back(r21, i21);
  }
  if (xs.size() < 2 || xs.front() > 0.0 || xs.back() < 1.0) {
    config_error("sampled potential must cover [0, 1]");
  }
  const auto grid = uniform_grid(std::max(m, static_cast<int>(xs.size())));
  std::vector<Complex> q12(grid.size()), q21(grid.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    while (k + 2 < xs.size() && xs[k + 1] < x) ++k;
    const double t = (x - xs[k]) / (xs[k + 1] - xs[k]);
    q12[i] = (1.0 - t) * s12[k] + t * s12[k + 1];
    q21[i] = (1.0 - t) * s21[k] + t * s21[k + 1];
  }
  return Potential::sampled(std::move(q12), std::move(q21));
}

ProblemConfig parse_config(const json& j, const std::string& base_dir) {
  if (!j.is_object()) config_error("config must be a JSON object");
  ProblemConfig cfg;
  cfg.source = j;
  try {
    if (j.contains("grid")) {
      if (!j.at("grid").is_number_integer() || j.at("grid").get<int>() < 5) {
        config_error("grid must be an integer >= 5");
      }
      cfg.grid = j.at("grid").get<int>();
    }

    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      if (!t.is_object()) config_error("tolerances must be an object");
      auto set = [&](const char* key, double& field) {
        if (!t.contains(key)) return;
        const double v = number(t.at(key), key);
        if (!(v > 0.0)) config_error(std::string("tolerance '") + key + "' must be positive");
        field = v;
      };
      auto set_int = [&](const char* key, int& field) {
        if (!t.contains(key)) return;
        if (!t.at(key).is_number_integer() || t.at(key).get<int>() <= 0) {
          config_error(std::string("tolerance '") + key + "' must be a positive integer");
        }
        field = t.at(key).get<int>();
      };
      for (const auto& [key, _] : t.items()) {
        static const char* known[] = {"det_rel",  "self_adjoint", "residual_rel",
                                      "multiplicity", "separation_rel", "ode",
                                      "quadrature", "max_ode_steps", "max_contour_retries"};
        if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return key == k; })) {
          config_error("unknown tolerance '" + key + "'");
        }
      }
      set("det_rel", cfg.tol.det_rel);
      set("self_adjoint", cfg.tol.self_adjoint);
      set("residual_rel", cfg.tol.residual_rel);
      set("multiplicity", cfg.tol.multiplicity);
      set("separation_rel", cfg.tol.separation_rel);
      set("ode", cfg.tol.ode);
      set("quadrature", cfg.tol.quadrature);
      set_int("max_ode_steps", cfg.tol.max_ode_steps);
      set_int("max_contour_retries", cfg.tol.max_contour_retries);
    }

    if (j.contains("weights")) {
      const json& w = j.at("weights");
      if (w.contains("rational")) {
        const json& r = w.at("rational");
        if (!r.is_array() || r.size() != 3 || !r[0].is_number_integer() || !r[1].is_number_integer()) {
          config_error("rational weights are [n1, n2, b0] with integer n1, n2");
        }
        cfg.weights = DiracWeights::rational(r[0].get<int>(), r[1].get<int>(), number(r[2], "b0"));
      } else {
        cfg.weights = DiracWeights(number(require(w, "b1"), "b1"), number(require(w, "b2"), "b2"));
      }
    }

    if (j.contains("bc")) {
      const json& b = j.at("bc");
      if (b.contains("canonical") == b.contains("raw")) {
        config_error("bc needs exactly one of 'canonical', 'raw'");
      }
      if (b.contains("canonical")) {
        const json& c = b.at("canonical");
        cfg.canonical_bc = CanonicalBC{parse_complex(require(c, "a")), parse_complex(require(c, "b")),
                                       parse_complex(require(c, "c")), parse_complex(require(c, "d"))};
        cfg.raw_bc = cfg.canonical_bc->to_raw();
      } else {
        const json& rows = b.at("raw");
        if (!rows.is_array() || rows.size() != 2) config_error("raw bc needs two rows");
        BoundaryMatrix m;
        for (int r = 0; r < 2; ++r) {
          if (!rows[r].is_array() || rows[r].size() != 4) config_error("raw bc rows have four entries");
          for (int c = 0; c < 4; ++c) m(r, c) = parse_complex(rows[r][c]);
        }
        cfg.raw_bc = RawBC(m);
        try {
          cfg.canonical_bc = canonicalize(*cfg.raw_bc, cfg.tol);
        } catch (const SpectralError& e) {
          if (e.kind() != ErrorKind::NotCanonicalizable) throw;
        }
      }
    }

    if (j.contains("potential")) {
      cfg.potential = parse_potential(j.at("potential"), base_dir, cfg.grid);
    }

    if (j.contains("window")) {
      const json& w = j.at("window");
      SpectrumWindow win;
      if (w.contains("n_side")) {
        if (!w.at("n_side").is_number_integer()) config_error("n_side must be an integer");
        win.n_side = w.at("n_side").get<int>();
      }
      if (w.contains("re_range")) {
        const json& r = w.at("re_range");
        if (!r.is_array() || r.size() != 2) config_error("re_range is [lo, hi]");
        win.re_range = std::make_pair(number(r[0], "re_range"), number(r[1], "re_range"));
      }
      win.validate();
      cfg.window = win;
    }

    if (j.contains("string")) {
      const json& s = j.at("string");
      StringProblem sp;
      if (s.contains("beta1")) sp.beta1 = number(s.at("beta1"), "beta1");
      if (s.contains("beta2")) sp.beta2 = number(s.at("beta2"), "beta2");
      if (s.contains("h0")) sp.h0 = parse_complex(s.at("h0"));
      if (s.contains("h1")) sp.h1 = parse_complex(s.at("h1"));
      if (s.contains("h2")) sp.h2 = parse_complex(s.at("h2"));
      if (s.contains("a1")) sp.a1 = profile(s.at("a1"), "a1");
      if (s.contains("a2")) sp.a2 = profile(s.at("a2"), "a2");
      sp.validate();
      cfg.string = sp;
    }
  } catch (const SpectralError& e) {
    if (e.kind() == ErrorKind::InvalidArgument) config_error(e.what());
    throw;
  } catch (const json::exception& e) {
    config_error(e.what());
  }
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(j, dir.empty() ? "." : dir.string());
}

ProblemConfig apply_options(ProblemConfig cfg, const RunOptions& opts) {
  if (opts.window) {
    if (*opts.window < 1) config_error("--window must be >= 1");
    cfg.window = SpectrumWindow::symmetric(*opts.window);
    cfg.source["window"] = {{"n_side", *opts.window}};
  }
  if (opts.grid) {
    if (*opts.grid < 5) config_error("--grid must be >= 5");
    cfg.grid = *opts.grid;
    cfg.source["grid"] = *opts.grid;
  }
  if (!(opts.p >= 1.0 && opts.p <= 2.0)) config_error("--p must lie in [1, 2]");
  return cfg;
}

int exit_code(const SpectralError& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidArgument: return kExitConfig;
    case ErrorKind::NotCanonicalizable: return kExitNotCanonicalizable;
    case ErrorKind::LocalizationFailure: return kExitLocalization;
    case ErrorKind::DegenerateBoundary: return kExitDegenerateBoundary;
    default: return kExitPanic;
  }
}

json run_classify(const ProblemConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  return guarded([&] {
    if (!cfg.raw_bc) config_error("classify needs 'bc'");
    const CanonicalBC& bc = canonical(cfg);
    const Classification cl = classify(bc, cfg.weights, cfg.tol);
    const SelfAdjointReport sa = self_adjoint_report(bc, cfg.weights, cfg.tol);
    json payload = {
        {"canonical", bc_json(bc)},
        {"weights", weights_json(cfg.weights)},
        {"regular", cl.regular},
        {"strictly_regular", cl.strict.to_string()},
        {"self_adjoint", cl.self_adjoint},
        {"self_adjoint_relations",
         {{"relation_1", sa.relation_1},
          {"relation_2", sa.relation_2},
          {"relation_3", sa.relation_3},
          {"matrix_defect", sa.matrix_defect}}},
        {"adjoint_bc", matrix_json(adjoint_bc(bc, cfg.weights).matrix())},
    };
    return bundle("classify", cfg, std::move(payload), start);
  });
}

json run_spectrum(const ProblemConfig& cfg, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  return guarded([&] {
    if (!cfg.raw_bc) config_error("spectrum needs 'bc'");
    const CanonicalBC& bc = canonical(cfg);
    json payload;
    if (opts.perturbed) {
      const PerturbedSpectrum ps = perturbed_zeros(bc, cfg.weights, cfg.potential, cfg.window, cfg.tol);
      const std::size_t total = ps.zeros.size() + ps.failed_indices.size();
      const int expected = std::max<int>(window_count(cfg.window, total), 1);
      if (10 * static_cast<int>(ps.failed_indices.size()) > expected) {
        throw CliError(kExitLocalization, "localization failed for more than 10% of the window");
      }
      payload["rows"] = spectrum_rows(ps.zeros, &ps.unperturbed);
      payload["failed_indices"] = ps.failed_indices;
      payload["perturbed"] = true;
    } else {
      const Spectrum zeros = unperturbed_zeros(bc, cfg.weights, cfg.window, cfg.tol);
      payload["rows"] = spectrum_rows(zeros, nullptr);
      payload["perturbed"] = false;
      payload["strip_height"] = strip_height(bc, cfg.weights, cfg.tol);
    }
    return bundle("spectrum", cfg, std::move(payload), start);
  });
}

json run_bari(const ProblemConfig& cfg, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  return guarded([&] {
    if (!cfg.raw_bc) config_error("bari needs 'bc'");
    const CanonicalBC& bc = canonical(cfg);
    const StrictVerdict strict =
        is_regular(bc, cfg.tol) ? classify_strict(bc, cfg.weights, cfg.tol) : StrictVerdict{};
    if (!strict.yes()) {
      throw CliError(kExitNotStrictlyRegular,
                     "boundary conditions are not strictly regular (" + strict.to_string() + ")");
    }
    const Spectrum zeros0 = unperturbed_zeros(bc, cfg.weights, cfg.window, cfg.tol);
    const ZeroSequences seq = derive_sequences(zeros0, bc, cfg.weights, cfg.tol);
    const BariVerdict verdict = bari_c0_check(bc, cfg.weights, zeros0, seq, cfg.tol);

    const bool analytic = cfg.potential.is_zero() && !opts.perturbed;
    std::vector<PairDiagnostic> diags;
    std::vector<int> skipped;
    if (analytic) {
      for (const auto& z : zeros0) {
        if (z.multiplicity > 1) {
          skipped.push_back(z.index);
          continue;
        }
        diags.push_back(pair_diagnostic(unperturbed_pair(z, bc, cfg.weights, cfg.grid), bc,
                                        cfg.weights, true, cfg.tol));
      }
    } else {
      const PerturbedSpectrum ps = perturbed_zeros(bc, cfg.weights, cfg.potential, cfg.window, cfg.tol);
      skipped = ps.failed_indices;
      for (const auto& z : ps.zeros) {
        if (z.multiplicity > 1) {
          skipped.push_back(z.index);
          continue;
        }
        EigenPair pair;
        pair.index = z.index;
        pair.lambda = z.value;
        const EigenFunction f = eigenfunction(z.value, bc, cfg.weights, cfg.potential, cfg.grid, cfg.tol);
        const EigenFunction g =
            adjoint_eigenfunction(z.value, bc, cfg.weights, cfg.potential, cfg.grid, cfg.tol);
        pair.grid = f.grid;
        pair.f = f.f;
        pair.g = g.f;
        diags.push_back(pair_diagnostic(pair, bc, cfg.weights, false, cfg.tol));
      }
      std::sort(skipped.begin(), skipped.end());
    }

    json rows = json::array();
    for (std::size_t i = 0; i < diags.size(); ++i) {
      const auto& d = diags[i];
      const auto it = std::find_if(zeros0.begin(), zeros0.end(),
                                   [&](const Eigenvalue& e) { return e.index == d.n; });
      json row = {{"n", d.n},
                  {"lambda", complex_json(d.lambda)},
                  {"im_lambda0", it != zeros0.end() ? it->value.imag() : std::nan("")},
                  {"alpha", d.alpha},
                  {"defect", d.defect},
                  {"rescaled_distance", d.rescaled_distance},
                  {"z", complex_json(d.z)}};
      if (d.tau_available) row["tau"] = {d.tau[0], d.tau[1], d.tau[2], d.tau[3]};
      rows.push_back(row);
    }
    const ClosenessSums sums = closeness_sums(diags, opts.p);
    json payload = {
        {"strictly_regular", strict.to_string()},
        {"pairs", analytic ? "analytic" : "numeric"},
        {"rows", rows},
        {"skipped_indices", skipped},
        {"verdict",
         {{"route", verdict.route},
          {"ratio_ok", verdict.ratio_ok},
          {"im_trend", verdict.im_trend},
          {"im_trend_quarter", verdict.im_trend_quarter},
          {"z_trend", verdict.z_trend},
          {"z_trend_quarter", verdict.z_trend_quarter},
          {"flags_pass", verdict.flags_pass},
          {"self_adjoint", verdict.self_adjoint},
          {"verdict", to_string(verdict.verdict)}}},
        {"closeness",
         {{"p", opts.p},
          {"order", sums.order},
          {"partial_sums", sums.partial_sums},
          {"tail_sup", sums.tail_sup}}},
    };
    return bundle("bari", cfg, std::move(payload), start);
  });
}

json run_string(const ProblemConfig& cfg, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  return guarded([&] {
    if (!cfg.string) config_error("string needs 'string'");
    const StringProblem& sp = *cfg.string;
    const DiracReduction red = reduce(sp, cfg.grid, cfg.tol);

    double q_max = 0.0;
    for (double x : red.grid) {
      q_max = std::max({q_max, std::abs(red.q.q12(x)), std::abs(red.q.q21(x))});
    }
    json payload = {
        {"weights", weights_json(red.weights)},
        {"raw_bc", matrix_json(red.raw_bc.matrix())},
        {"canonical", bc_json(red.canonical_bc)},
        {"w1_at_1", complex_json(red.w1_at_1)},
        {"w2_at_1", complex_json(red.w2_at_1)},
        {"w_at_1", complex_json(red.w_at_1)},
        {"quadrature_change", red.quadrature_change},
        {"q", {{"zero", red.q.is_zero()}, {"max_abs", q_max}, {"l2_norm", red.q.l2_norm()}}},
    };
    try {
      payload["bari_condition"] = string_bari_condition(sp, cfg.grid, cfg.tol);
    } catch (const SpectralError& e) {
      if (e.kind() != ErrorKind::Inapplicable) throw;
      payload["bari_condition"] = "inapplicable";
      payload["bari_condition_reason"] = e.what();
    }

    if (is_regular(red.canonical_bc, cfg.tol) && !red.c_small) {
      Spectrum zeros;
      if (red.q.is_zero() && !opts.perturbed) {
        zeros = unperturbed_zeros(red.canonical_bc, red.weights, cfg.window, cfg.tol);
      } else {
        zeros = perturbed_zeros(red.canonical_bc, red.weights, red.q, cfg.window, cfg.tol).zeros;
      }
      payload["spectrum"] = spectrum_rows(zeros, nullptr);

      auto by_index = zeros;
      std::stable_sort(by_index.begin(), by_index.end(), [](const auto& l, const auto& r) {
        if (std::abs(l.index) != std::abs(r.index)) return std::abs(l.index) < std::abs(r.index);
        return l.index < r.index;
      });
      json residuals = json::array();
      for (std::size_t i = 0; i < by_index.size() && residuals.size() < 5; ++i) {
        if (by_index[i].multiplicity > 1) continue;
        const EigenFunction ef =
            eigenfunction(by_index[i].value, red.canonical_bc, red.weights, red.q, cfg.grid, cfg.tol);
        residuals.push_back({{"n", by_index[i].index},
                             {"lambda", complex_json(by_index[i].value)},
                             {"similarity_residual", similarity_residual(sp, red, ef)}});
      }
      payload["similarity"] = residuals;
    }
    return bundle("string", cfg, std::move(payload), start);
  });
}

json run_command(const std::string& command, const ProblemConfig& cfg, const RunOptions& opts) {
  if (command == "classify") return run_classify(cfg);
  if (command == "spectrum") return run_spectrum(cfg, opts);
  if (command == "bari") return run_bari(cfg, opts);
  if (command == "string") return run_string(cfg, opts);
  config_error("unknown command '" + command + "'");
}

std::string to_csv(const json& bundle) {
  const std::string command = bundle.at("command").get<std::string>();
  const json& payload = bundle.at("payload");
  std::ostringstream out;

  auto complex_cells = [](const json& z) { return fmt(z[0].get<double>()) + "," + fmt(z[1].get<double>()); };

  if (command == "spectrum") {
    const bool perturbed = payload.at("perturbed").get<bool>();
    out << "n,re_lambda,im_lambda,multiplicity,residual,method";
    if (perturbed) out << ",re_lambda0,im_lambda0,drift";
    out << "\n";
    for (const auto& r : payload.at("rows")) {
      out << r.at("n").get<int>() << "," << complex_cells(r.at("lambda")) << ","
          << r.at("multiplicity").get<int>() << "," << fmt(r.at("residual").get<double>()) << ","
          << r.at("method").get<std::string>();
      if (perturbed) {
        out << "," << complex_cells(r.at("lambda0")) << "," << fmt(r.at("drift").get<double>());
      }
      out << "\n";
    }
  } else if (command == "bari") {
    out << "n,re_lambda,im_lambda,im_lambda0,alpha,defect,rescaled_distance,re_z,im_z,tau1,tau2,tau3,tau4\n";
    for (const auto& r : payload.at("rows")) {
      out << r.at("n").get<int>() << "," << complex_cells(r.at("lambda")) << ","
          << csv_cell(r.at("im_lambda0")) << "," << fmt(r.at("alpha").get<double>()) << ","
          << fmt(r.at("defect").get<double>()) << "," << fmt(r.at("rescaled_distance").get<double>())
          << "," << complex_cells(r.at("z"));
      for (int k = 0; k < 4; ++k) {
        out << ",";
        if (r.contains("tau")) out << fmt(r.at("tau")[k].get<double>());
      }
      out << "\n";
    }
  } else {
    // key,value over the flattened payload
    out << "key,value\n";
    const json flat = payload.flatten();
    for (const auto& [key, value] : flat.items()) out << key << "," << csv_cell(value) << "\n";
  }
  return out.str();
}

}  // namespace dirac::cli
