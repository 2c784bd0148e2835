#include <doctest.h>

#include <cmath>
#include <random>

#include "dirac/bari_diagnostics.hpp"
#include "dirac/perturbed_solver.hpp"

using namespace dirac;

namespace {

// int_0^1 e^{t x} dx
double mean_exp(double t) { return t == 0.0 ? 1.0 : std::expm1(t) / t; }

double alignment(const VectorField& f, const VectorField& h) {
  return std::abs(inner(f, h)) / (norm(f) * norm(h));
}

}  // namespace

TEST_CASE("E factor values") {
  const auto w = DiracWeights::dirac();
  CHECK(e_factor(Complex(3.0, 0.0), 1, 1, w) == 1.0);
  CHECK(e_factor(Complex(3.0, 0.0), 2, -1, w) == 1.0);
  const double ln2 = std::log(2.0);
  // j = 2 has b2 = 1
  const double ep = e_factor(Complex(0.0, ln2), 2, 1, w);
  const double em = e_factor(Complex(0.0, ln2), 2, -1, w);
  CHECK(ep == doctest::Approx(0.75 / (2 * ln2)).epsilon(1e-14));
  CHECK(em == doctest::Approx(3.0 / (2 * ln2)).epsilon(1e-14));
  CHECK(ep * em == doctest::Approx(1.1707).epsilon(1e-4));
  CHECK(ep * em >= 1 + ln2 * ln2 / 3);
  CHECK_THROWS_AS(e_factor(1.0, 3, 1, w), SpectralError);
}

TEST_CASE("E factor is continuous across the series switch") {
  const DiracWeights w(-1.0, 0.5);
  for (double t : {0.999e-5, 1.001e-5, -0.999e-5, -1.001e-5}) {
    // t = -2 b2 Im lambda for sign +
    const double im = -t / (2 * w.b2());
    CHECK(std::abs(e_factor(Complex(0.0, im), 2, 1, w) - mean_exp(t)) < 1e-12);
  }
}

TEST_CASE("E+ E- - 1 >= (b Im lambda)^2 / 3") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ub(0.05, 5.0), ui(-4.0, 4.0);
  for (int k = 0; k < 10000; ++k) {
    const DiracWeights w(-ub(rng), ub(rng));
    const Complex lam(ui(rng), ui(rng));
    for (int j : {1, 2}) {
      const double b = j == 1 ? w.b1() : w.b2();
      const double lhs = e_factor(lam, j, 1, w) * e_factor(lam, j, -1, w) - 1.0;
      const double rhs = std::pow(b * lam.imag(), 2) / 3.0;
      REQUIRE(lhs >= rhs - 1e-12);
    }
  }
}

TEST_CASE("analytic pairs: quadrature matches the closed forms") {
  const DiracWeights w(-1.0, 2.0, Rationality{1, 2, 1.0});
  const CanonicalBC g{Complex(0.4, 0.1), 0.9, Complex(-0.3, 0.6), 1.2};
  const auto zeros = zeros_polynomial(g, w, SpectrumWindow::symmetric(8));
  const double beta = w.beta();
  for (const auto& z : zeros) {
    const Complex lam = z.value;
    const auto pair = unperturbed_pair(z, g, w, 2049);
    const double y = lam.imag();
    const double e1p = mean_exp(-2 * w.b1() * y), e1m = mean_exp(2 * w.b1() * y);
    const double e2p = mean_exp(-2 * w.b2() * y), e2m = mean_exp(2 * w.b2() * y);
    const Complex p1 = 1.0 + g.a * std::exp(kI * w.b1() * lam);
    const Complex p2 = 1.0 + g.d * std::exp(-kI * w.b2() * lam);
    const double nf = std::norm(g.b) * e1p + std::norm(p1) * e2p;
    const double ng = std::norm(p2) * e1m + beta * beta * std::norm(g.b) * e2m;
    const Complex fg = g.b * (p2 + beta * p1);
    CHECK(std::abs(norm(pair.f) * norm(pair.f) - nf) <= 1e-8 * nf);
    CHECK(std::abs(norm(pair.g) * norm(pair.g) - ng) <= 1e-8 * ng);
    CHECK(std::abs(inner(pair.f, pair.g) - fg) <= 1e-8 * std::abs(fg));

    const auto d = pair_diagnostic(pair, g, w, true);
    REQUIRE(d.tau_available);
    for (int k = 0; k < 3; ++k) CHECK(d.tau[k] >= -1e-8 * nf * ng);
    const double gram = nf * ng - std::norm(fg);
    CHECK(std::abs(gram - (d.tau[0] + d.tau[1] + d.tau[2])) <= 1e-8 * nf * ng);
    const Complex zz = p2 * std::conj(p1);
    CHECK(std::abs(d.tau[3] - std::norm(zz - beta * std::norm(g.b))) < 1e-10 * (1 + d.tau[3]));
    CHECK(d.alpha >= 1.0 - 1e-12);
    CHECK(std::abs(d.defect - d.rescaled_distance) <= 1e-8 * (1 + d.defect));
  }
}

TEST_CASE("analytic pairs are biorthogonal and solve the boundary problem") {
  const DiracWeights w(-1.0, 2.0, Rationality{1, 2, 1.0});
  const CanonicalBC g{Complex(0.4, 0.1), 0.9, Complex(-0.3, 0.6), 1.2};
  const auto zeros = zeros_polynomial(g, w, SpectrumWindow::symmetric(3));
  std::vector<EigenPair> pairs;
  for (const auto& z : zeros) pairs.push_back(unperturbed_pair(z, g, w, 1025));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto f = eigenfunction(pairs[i].lambda, g, w, Potential::zero(), 1025);
    CHECK(alignment(f.f, pairs[i].f) > 1 - 1e-9);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (i == j) continue;
      CHECK(std::abs(inner(pairs[i].f, pairs[j].g)) < 1e-8 * norm(pairs[i].f) * norm(pairs[j].g));
    }
  }
}

TEST_CASE("mirror branch b = 0 != c") {
  const auto w = DiracWeights(-1.0, 1.5, Rationality{2, 3, 0.5});
  const CanonicalBC g{Complex(0.5, 0.2), 0.0, Complex(0.7, -0.4), 0.9};
  const auto zeros = zeros_polynomial(g, w, SpectrumWindow::symmetric(3));
  for (const auto& z : zeros) {
    CHECK(pair_branch(z.value, g, w) == PairBranch::Mirror);
    const auto pair = unperturbed_pair(z, g, w, 1025);
    const auto f = eigenfunction(z.value, g, w, Potential::zero(), 1025);
    const auto h = adjoint_eigenfunction(z.value, g, w, Potential::zero(), 1025);
    CHECK(alignment(f.f, pair.f) > 1 - 1e-9);
    CHECK(alignment(h.f, pair.g) > 1 - 1e-9);
    // closed forms through the mirror
    const auto cf = pair_closed_form(z.value, g, w);
    CHECK(std::abs(norm(pair.f) * norm(pair.f) - cf.norm_f_sq) < 1e-8 * cf.norm_f_sq);
    CHECK(std::abs(inner(pair.f, pair.g) - cf.inner_fg) < 1e-8 * std::abs(cf.inner_fg));
  }
}

TEST_CASE("pair diagnostic basics") {
  const auto w = DiracWeights::dirac();
  const CanonicalBC s{0, 1, 1, 0};
  const auto zeros = zeros_contour(s, w, SpectrumWindow::symmetric(3));
  for (const auto& z : zeros) {
    EigenPair p = unperturbed_pair(z, s, w, 513);
    p.g = p.f;
    const auto d = pair_diagnostic(p, s, w, false);
    CHECK(d.alpha == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(d.defect) < 1e-12);

    EigenPair q = unperturbed_pair(z, s, w, 513);
    const auto d0 = pair_diagnostic(q, s, w, true);
    for (auto& v : q.f) v *= Complex(2.0, -3.0);
    for (auto& v : q.g) v *= Complex(0.0, 0.1);
    CHECK(pair_diagnostic(q, s, w, true).alpha == doctest::Approx(d0.alpha).epsilon(1e-12));
  }

  EigenPair zero;
  zero.grid = uniform_grid(5);
  zero.f.assign(5, Vec2(1.0, 0.0));
  zero.g.assign(5, Vec2(0.0, 1.0));
  CHECK_THROWS_AS(pair_diagnostic(zero, s, w, false), SpectralError);
}

TEST_CASE("quasi-periodic branch 1 defect is bounded below") {
  const auto w = DiracWeights::dirac();
  const CanonicalBC qp{2, 0, 0, 0.5};
  const auto zeros = zeros_closed_form(qp, w, SpectrumWindow::symmetric(8));
  for (const auto& z : zeros) {
    const auto p = unperturbed_pair(z, qp, w, 1025);
    const auto d = pair_diagnostic(p, qp, w, true);
    CHECK(d.defect >= std::pow(std::log(2.0), 2) / 3);
    if (pair_branch(z.value, qp, w) == PairBranch::QuasiPeriodic1) {
      CHECK(d.defect >= 0.16);
      CHECK(z.value.imag() == doctest::Approx(-std::log(2.0)));
    }
  }
}

TEST_CASE("c0 criterion examples") {
  const auto w = DiracWeights::dirac();
  auto verdict = [&](const CanonicalBC& bc) {
    const auto z = unperturbed_zeros(bc, w, SpectrumWindow::symmetric(16));
    return bari_c0_check(bc, w, z, derive_sequences(z, bc, w));
  };
  const auto sa = verdict(CanonicalBC{0, 1, 1, 0});
  CHECK(sa.route == "general");
  CHECK(sa.ratio_ok);
  CHECK(sa.verdict == BariKind::SelfAdjointBari);

  const auto nb = verdict(CanonicalBC{0, 1, 2, 0});
  CHECK_FALSE(nb.ratio_ok);
  CHECK(nb.verdict == BariKind::NotBari);

  const auto qp = verdict(CanonicalBC{2, 0, 0, 0.5});
  CHECK(qp.route == "quasi-periodic");
  CHECK(qp.verdict == BariKind::NotBari);

  // |a| = |d| = 1 on the quasi-periodic route, self-adjoint
  const auto w12 = DiracWeights::rational(1, 2, 1.0);
  const CanonicalBC ap{1, 0, 0, 1};
  const auto z = unperturbed_zeros(ap, w12, SpectrumWindow::symmetric(16));
  CHECK(bari_c0_check(ap, w12, z, derive_sequences(z, ap, w12)).verdict == BariKind::SelfAdjointBari);
}

TEST_CASE("closeness sums") {
  std::vector<std::pair<int, double>> zeros;
  for (int n = -10; n <= 10; ++n) zeros.emplace_back(n, 0.0);
  const auto z = closeness_sums(zeros, 1.5);
  for (double s : z.partial_sums) CHECK(s == 0.0);

  std::vector<std::pair<int, double>> harmonic;
  for (int n = 1; n <= 2000; ++n) {
    harmonic.emplace_back(n, 1.0 / n);
    harmonic.emplace_back(-n, 1.0 / n);
  }
  const auto h = closeness_sums(harmonic, 2.0);
  CHECK(h.partial_sums.back() <= kPi * kPi / 3);
  CHECK(h.partial_sums.back() >= kPi * kPi / 3 - 0.01);
  CHECK(h.order.front() == -1);

  const auto sup = closeness_sums(harmonic, 1.0);
  CHECK(sup.partial_sums.back() == 1.0);
  CHECK(sup.tail_sup == doctest::Approx(1.0 / 1001));
  CHECK_THROWS_AS(closeness_sums(harmonic, 2.5), SpectralError);

  // quasi-periodic data: constant terms, linear growth
  const auto w = DiracWeights::dirac();
  const CanonicalBC qp{2, 0, 0, 0.5};
  std::vector<PairDiagnostic> diags;
  for (const auto& e : zeros_closed_form(qp, w, SpectrumWindow::symmetric(8))) {
    diags.push_back(pair_diagnostic(unperturbed_pair(e, qp, w, 513), qp, w, true));
  }
  const auto lin = closeness_sums(diags, 2.0);
  for (double t : lin.terms) CHECK(t >= std::sqrt(0.16));
  const std::size_t n = lin.partial_sums.size();
  CHECK(lin.partial_sums[n - 1] - lin.partial_sums[n / 2 - 1] >= 0.16 * static_cast<double>(n - n / 2) - 1e-12);
}
