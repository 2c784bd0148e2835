// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "dirac/bari_diagnostics.hpp"
#include "dirac/bc_algebra.hpp"
#include "dirac/cli.hpp"
#include "dirac/det0_solver.hpp"
#include "dirac/perturbed_solver.hpp"
#include "dirac/string_transform.hpp"

using namespace dirac;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome verdict(bool pass, const std::string& detail) { return {pass, detail}; }

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_exp(double t) { return t == 0.0 ? 1.0 : std::expm1(t) / t; }

Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

// 1. lambda_n = pi n from the contour solver.
Outcome criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto zeros = zeros_contour(CanonicalBC{0, 1, 1, 0}, DiracWeights::dirac(),
                                   SpectrumWindow::symmetric(32));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double err = zeros.size() == 65 ? 0.0 : INFINITY;
  for (const auto& z : zeros) err = std::max(err, std::abs(z.value - kPi * z.index));
  return verdict(err <= 1e-8 && secs <= 10.0,
                 "max error " + num(err) + ", " + num(secs) + " s, " + std::to_string(zeros.size()) + " zeros");
}

// 2. Polynomial reduction against the contour solver for rational ratios.
Outcome criterion_2() {
  struct Case {
    DiracWeights w;
    CanonicalBC bc;
  };
  const std::vector<Case> cases = {
      {DiracWeights::rational(1, 2, 1.0), CanonicalBC{1, 0, 0, 1}},  // antiperiodic, b1 = -1, b2 = 2
      {DiracWeights::rational(1, 1, 1.0), CanonicalBC{Complex(0.3, 0.2), 0.8, Complex(-0.5, 0.1), 0.6}},
      {DiracWeights::rational(2, 3, 0.5), CanonicalBC{Complex(0.4, 0.1), 0.9, Complex(-0.3, 0.6), 1.2}},
      {DiracWeights::rational(1, 3, 0.7), CanonicalBC{0, 1, Complex(0.0, 2.0), 0}},
      {DiracWeights::rational(3, 2, 1.1), CanonicalBC{Complex(1.5, 0), Complex(0, 0.4), 0.3, Complex(0.2, -0.7)}},
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    const auto win = SpectrumWindow::symmetric(32);
    const auto p = zeros_polynomial(c.bc, c.w, win);
    const auto k = zeros_contour(c.bc, DiracWeights(c.w.b1(), c.w.b2()), win);
    if (p.size() != k.size()) return verdict(false, "zero counts differ");
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i].index != k[i].index || p[i].multiplicity != k[i].multiplicity) {
        return verdict(false, "index or multiplicity mismatch");
      }
      worst = std::max(worst, std::abs(p[i].value - k[i].value));
    }
  }
  return verdict(worst <= 1e-8, "max pairwise gap " + num(worst) + " over 5 configurations");
}

// 3. (2, 0, 0, 1/2): 2.5 + 2 cos(lambda) = 0, Im lambda = -+ ln 2.
Outcome criterion_3() {
  const auto zeros = unperturbed_zeros(CanonicalBC{2, 0, 0, 0.5}, DiracWeights::dirac(),
                                       SpectrumWindow::symmetric(32));
  const double ln2 = std::log(2.0);
  double err = 0.0, im_err = 0.0;
  for (const auto& z : zeros) {
    // nearest point of (2k + 1) pi -+ i ln 2
    const double k = std::round((z.value.real() / kPi - 1.0) / 2.0);
    const double re = (2 * k + 1) * kPi;
    const double d1 = std::abs(z.value - Complex(re, -ln2));
    const double d2 = std::abs(z.value - Complex(re, ln2));
    err = std::max(err, std::min(d1, d2));
    im_err = std::max(im_err, std::abs(std::abs(z.value.imag()) - ln2));
  }
  return verdict(!zeros.empty() && err <= 1e-10 && im_err <= 1e-10,
                 std::to_string(zeros.size()) + " zeros, max error " + num(err) + ", |Im| error " + num(im_err));
}

// 4. Coefficient relations against C B C* = D B D* on 1000 random problems.
Outcome criterion_4() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int disagreements = 0, sa = 0;
  for (int k = 0; k < 1000; ++k) {
    const double beta = 0.1 + 3 * u01(rng);
    const DiracWeights w(-1.0, beta);
    CanonicalBC bc{random_complex(rng), random_complex(rng), random_complex(rng), random_complex(rng)};
    if (k % 2 == 0) {
      // self-adjoint family: a, b on the ellipse, (c, d) = k (beta conj b, -conj a)
      const double t = u01(rng);
      bc.a = std::polar(std::sqrt(t), 2 * kPi * u01(rng));
      bc.b = std::polar(std::sqrt((1 - t) / beta), 2 * kPi * u01(rng));
      const Complex rot = std::polar(1.0, 2 * kPi * u01(rng));
      bc.c = rot * beta * std::conj(bc.b);
      bc.d = -rot * std::conj(bc.a);
    }
    const auto rep = self_adjoint_report(bc, w);
    // matrix test computed here from scratch
    Eigen::Matrix<Complex, 2, 2> c, d, b;
    c << 1.0, bc.b, 0.0, bc.d;
    d << bc.a, 0.0, bc.c, 1.0;
    b << w.b1(), 0.0, 0.0, w.b2();
    const double defect = (c * b * c.adjoint() - d * b * d.adjoint()).norm() / std::abs(w.b1());
    const bool matrix = defect <= Tolerances{}.self_adjoint * (1 + std::pow(std::max({std::abs(bc.a), std::abs(bc.b), std::abs(bc.c), std::abs(bc.d)}), 2));
    if (rep.relations_hold != rep.matrix_identity_holds || rep.relations_hold != matrix) ++disagreements;
    sa += rep.relations_hold;
  }
  return verdict(disagreements == 0,
                 std::to_string(disagreements) + " disagreements, " + std::to_string(sa) + " self-adjoint");
}

// 5. E+ E- - 1 >= (b_j Im lambda)^2 / 3.
Outcome criterion_5() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ub(0.05, 5.0), ul(-4.0, 4.0);
  double worst = INFINITY;
  for (int k = 0; k < 10000; ++k) {
    const DiracWeights w(-ub(rng), ub(rng));
    const Complex lam(ul(rng), ul(rng));
    const int j = 1 + k % 2;
    const double b = j == 1 ? w.b1() : w.b2();
    const double slack = e_factor(lam, j, 1, w) * e_factor(lam, j, -1, w) - 1.0 -
                         std::pow(b * lam.imag(), 2) / 3.0;
    worst = std::min(worst, slack);
  }
  return verdict(worst >= -1e-12, "minimum slack " + num(worst));
}

// 6. Quadrature norms against closed forms for b != 0.
Outcome criterion_6() {
  const auto w = DiracWeights::rational(1, 2, 1.0);
  const CanonicalBC g{Complex(0.4, 0.1), 0.9, Complex(-0.3, 0.6), 1.2};
  auto zeros = zeros_polynomial(g, w, SpectrumWindow::symmetric(40));
  std::stable_sort(zeros.begin(), zeros.end(),
                   [](const Eigenvalue& x, const Eigenvalue& y) { return std::abs(x.index) < std::abs(y.index); });
  if (zeros.size() < 64) return verdict(false, "fewer than 64 zeros");
  zeros.resize(64);
  const double beta = w.beta();
  double worst = 0.0, worst_gram = 0.0;
  for (const auto& z : zeros) {
    const Complex lam = z.value;
    const auto pair = unperturbed_pair(z, g, w, 4097);
    const double y = lam.imag();
    const Complex p1 = 1.0 + g.a * std::exp(kI * w.b1() * lam);
    const Complex p2 = 1.0 + g.d * std::exp(-kI * w.b2() * lam);
    const double nf = std::norm(g.b) * mean_exp(-2 * w.b1() * y) + std::norm(p1) * mean_exp(-2 * w.b2() * y);
    const double ng = std::norm(p2) * mean_exp(2 * w.b1() * y) +
                      beta * beta * std::norm(g.b) * mean_exp(2 * w.b2() * y);
    const Complex fg = g.b * (p2 + beta * p1);
    const double qf = norm(pair.f) * norm(pair.f), qg = norm(pair.g) * norm(pair.g);
    const Complex qfg = inner(pair.f, pair.g);
    worst = std::max({worst, std::abs(qf - nf) / nf, std::abs(qg - ng) / ng, std::abs(qfg - fg) / std::abs(fg)});
    const auto d = pair_diagnostic(pair, g, w, true);
    const double gram = qf * qg - std::norm(qfg);
    worst_gram = std::max(worst_gram, std::abs(gram - (d.tau[0] + d.tau[1] + d.tau[2])) / (qf * qg));
  }
  return verdict(worst <= 1e-7 && worst_gram <= 1e-7,
                 "norm error " + num(worst) + ", tau identity error " + num(worst_gram));
}

std::vector<PairDiagnostic> numeric_pairs(const CanonicalBC& bc, const DiracWeights& w, const Potential& q,
                                          int n_side, int m) {
  const auto ps = perturbed_zeros(bc, w, q, SpectrumWindow::symmetric(n_side));
  std::vector<PairDiagnostic> out;
  for (const auto& z : ps.zeros) {
    if (z.multiplicity > 1) continue;
    EigenPair p;
    p.index = z.index;
    p.lambda = z.value;
    const auto f = eigenfunction(z.value, bc, w, q, m);
    p.grid = f.grid;
    p.f = f.f;
    p.g = adjoint_eigenfunction(z.value, bc, w, q, m).f;
    out.push_back(pair_diagnostic(p, bc, w, false));
  }
  return out;
}

// 7. Self-adjoint with Hermitian Q against (2, 0, 0, 1/2).
Outcome criterion_7() {
  const double amp = 1.0 / std::sqrt(2.0);
  const auto q = Potential::callable([amp](double x) { return amp * std::exp(kI * 2.0 * kPi * x); },
                                     [amp](double x) { return amp * std::exp(-kI * 2.0 * kPi * x); });
  const CanonicalBC sa{0, 1, std::polar(1.0, 0.7), 0};
  const auto diags = numeric_pairs(sa, DiracWeights::dirac(), q, 24, 1025);
  std::vector<double> head, tail;
  for (const auto& d : diags) (std::abs(d.n) > 12 ? tail : head).push_back(std::abs(d.defect));
  const double tail_max = tail.empty() ? INFINITY : *std::max_element(tail.begin(), tail.end());
  const bool trend = median(tail) <= std::max(median(head), 1e-8);

  const CanonicalBC qp{2, 0, 0, 0.5};
  const auto w = DiracWeights::dirac();
  double min_branch1 = INFINITY;
  int branch1 = 0;
  for (const auto& z : zeros_closed_form(qp, w, SpectrumWindow::symmetric(24))) {
    if (pair_branch(z.value, qp, w) != PairBranch::QuasiPeriodic1) continue;
    ++branch1;
    const auto d = pair_diagnostic(unperturbed_pair(z, qp, w, 1025), qp, w, true);
    min_branch1 = std::min(min_branch1, d.defect);
  }
  return verdict(q.l2_norm() > 0.99 && q.l2_norm() < 1.01 && tail_max <= 1e-4 && trend && branch1 > 0 &&
                     min_branch1 >= 0.16,
                 "(i) tail max defect " + num(tail_max) + ", medians " + num(median(head)) + " -> " +
                     num(median(tail)) + "; (ii) min branch-1 defect " + num(min_branch1) + " over " +
                     std::to_string(branch1) + " zeros");
}

// 8. (f_m, g_n) = delta_mn after normalization.
Outcome criterion_8() {
  const auto w = DiracWeights::dirac();
  const CanonicalBC bc{0, 1, 2, 0};
  const auto q = Potential::callable([](double x) { return Complex(0.8 * x, 0.3); },
                                     [](double x) { return Complex(-0.5, std::sin(3 * x)); });
  const auto ps = perturbed_zeros(bc, w, q, SpectrumWindow::symmetric(8));
  std::vector<EigenFunction> f, g;
  for (const auto& z : ps.zeros) {
    if (z.multiplicity > 1 || f.size() == 16) continue;
    f.push_back(eigenfunction(z.value, bc, w, q, 1025));
    g.push_back(adjoint_eigenfunction(z.value, bc, w, q, 1025));
  }
  if (f.size() < 16) return verdict(false, "fewer than 16 simple eigenvalues");
  double off = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    const Complex s = inner(f[i].f, g[i].f);
    for (std::size_t j = 0; j < 16; ++j) {
      if (i == j) continue;
      off = std::max(off, std::abs(inner(f[i].f, g[j].f) / s));
    }
  }
  return verdict(off <= 1e-6, "max off-diagonal " + num(off));
}

// 9. Median drift decays.
Outcome criterion_9() {
  const auto ps = perturbed_zeros(CanonicalBC{0, 1, 1, 0}, DiracWeights::dirac(), Potential::constant(1.0, 1.0),
                                  SpectrumWindow::symmetric(48));
  std::vector<double> inner_band, outer_band;
  std::map<int, Complex> l0;
  for (const auto& z : ps.unperturbed) l0[z.index] = z.value;
  for (const auto& z : ps.zeros) {
    const int n = std::abs(z.index);
    const double drift = std::abs(z.value - l0.at(z.index));
    if (n >= 1 && n <= 16) inner_band.push_back(drift);
    if (n >= 33 && n <= 48) outer_band.push_back(drift);
  }
  if (inner_band.empty() || outer_band.empty()) return verdict(false, "empty bands");
  const double a = median(inner_band), b = median(outer_band);
  return verdict(ps.failed_indices.empty() && b <= 0.5 * a,
                 "median drift " + num(a) + " -> " + num(b));
}

// 10. String reduction.
Outcome criterion_10() {
  StringProblem s1;
  s1.h1 = 0;
  s1.h2 = 1;
  StringProblem s2 = s1;
  s2.h1 = 1;
  s2.h2 = 2;
  const auto r1 = reduce(s1, 2049);
  const auto r2 = reduce(s2, 2049);
  auto near = [](const CanonicalBC& x, Complex a, Complex b, Complex c, Complex d) {
    return std::abs(x.a - a) + std::abs(x.b - b) + std::abs(x.c - c) + std::abs(x.d - d) < 1e-14;
  };
  bool ok = r1.q.is_zero() && r2.q.is_zero() && near(r1.canonical_bc, 0, 1, 1, 0) &&
            near(r2.canonical_bc, 0, 1, 1.0 / 3.0, 0) && string_bari_condition(s1) && !string_bari_condition(s2);

  double worst = 0.0;
  int count = 0;
  for (const auto* pair : {&s1, &s2}) {
    const auto red = reduce(*pair, 2049);
    auto zeros = perturbed_zeros(red.canonical_bc, red.weights, red.q, SpectrumWindow::symmetric(3)).zeros;
    std::stable_sort(zeros.begin(), zeros.end(),
                     [](const Eigenvalue& x, const Eigenvalue& y) { return std::abs(x.index) < std::abs(y.index); });
    for (std::size_t i = 0; i < 5 && i < zeros.size(); ++i, ++count) {
      const auto ef = eigenfunction(zeros[i].value, red.canonical_bc, red.weights, red.q, 2049);
      worst = std::max(worst, similarity_residual(*pair, red, ef));
    }
  }
  ok = ok && count == 10 && worst <= 1e-6;
  return verdict(ok, "reductions and conditions as expected, max similarity residual " + num(worst));
}

// 11. Weyl census over the dyadic intervals of length 1/8.
Outcome criterion_11() {
  const long M = 10000;
  std::vector<std::pair<double, double>> cells;
  for (int k = 0; k < 8; ++k) cells.emplace_back(k / 8.0, (k + 1) / 8.0);
  const auto counts = weyl_census(std::sqrt(2.0), M, cells);
  double worst = 0.0;
  for (long c : counts) worst = std::max(worst, std::abs(c - 2.0 * M / 8.0));
  return verdict(worst <= 2 * 0.02 * M, "max deviation " + num(worst) + " against " + num(2 * 0.02 * M));
}

#ifdef DIRACSPEC_PATH
std::string run_tool(const std::string& args) {
  const std::string cmd = std::string(DIRACSPEC_PATH) + " " + args;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  pclose(pipe);
  return out;
}
#endif

// 12. Identical CSV payloads on repeated runs.
Outcome criterion_12() {
  const auto cfg = cli::parse_config(cli::json::parse(R"({
    "bc": {"canonical": {"a": 0.5, "b": 1, "c": [0.3, 0.2], "d": 0}},
    "potential": {"kind": "polynomial", "q12": [0.4, [0, 0.5]], "q21": [1, -0.3]},
    "window": {"n_side": 10}
  })"));
  cli::RunOptions opts;
  opts.perturbed = true;
  const std::string a = cli::to_csv(cli::run_spectrum(cfg, opts));
  const std::string b = cli::to_csv(cli::run_spectrum(cfg, opts));
  bool ok = a == b;
  std::string detail = "library payloads identical: " + std::string(ok ? "yes" : "no");
#ifdef DIRACSPEC_PATH
  const std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/acceptance_cfg.json";
  {
    FILE* f = std::fopen(path.c_str(), "w");
    const std::string text = cfg.source.dump();
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
  }
  const std::string args = "spectrum --perturbed --format csv --config " + path;
  const std::string x = run_tool(args), y = run_tool(args);
  const bool tool_ok = x == y && x == a;
  ok = ok && tool_ok;
  detail += ", tool outputs identical: " + std::string(tool_ok ? "yes" : "no");
#endif
  return verdict(ok, detail);
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,  criterion_6,
      criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
