// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "ltv/error_bounds.hpp"
#include "oracles.hpp"

using namespace ltv;
using cd = std::complex<double>;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const TimeGrid<double> kGrid = TimeGrid<double>::centered(256, 1.0 / 16);

Signald unit_gaussian() { return make_gaussian(kGrid, Point2<double>(0, 0), 1.0); }

ErrorConfig config(double p, double a, Mode mode, double alpha = 0.0, Point2<double> mu = Point2<double>(0, 0)) {
  ErrorConfig cfg;
  cfg.p = p;
  cfg.a = a;
  cfg.mode = mode;
  cfg.alpha = alpha;
  cfg.mu = mu;
  return cfg;
}

CellSpreading tiny_identity(double side) {
  return CellSpreading(1, side, Eigen::MatrixXcd::Constant(1, 1, 1.0 / (side * side)), 0.0, Placement::centered);
}

}  // namespace

TEST_CASE("ErrorConfig") {
  CHECK(config(2, 1, Mode::c2).b() == kInf);
  CHECK(config(2, kInf, Mode::c2).b() == 1.0);
  CHECK(config(2, 2, Mode::c2).b() == doctest::Approx(2.0));
  CHECK(config(2, 4, Mode::c2).b() == doctest::Approx(4.0 / 3));
  CHECK_THROWS_AS(config(0.5, 2, Mode::c2).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(kInf, 2, Mode::c2).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(2, 0.9, Mode::c2).validate(), std::invalid_argument);
  CHECK(std::string(to_string(Mode::c1)) == "c1");
}

TEST_CASE("error_ep") {
  const Signald g = unit_gaussian();

  SUBCASE("identity channel has vanishing error") {
    double previous = kInf;
    for (double side : {0.1, 0.05, 0.025}) {
      const double e = error_ep(tiny_identity(side), g, g, config(2, 2, Mode::c2), 2);
      CHECK(e < previous);
      previous = e;
    }
    CHECK(previous <= 1e-3);
  }
  SUBCASE("direct and reduced routes agree") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> m(-1.5, 1.5);
    for (int trial = 0; trial < 12; ++trial) {
      const double alpha = trial % 3 == 0 ? 0.0 : (trial % 3 == 1 ? 0.5 : -0.3);
      const CellSpreading s =
          sample_cell_spreading(4, 0.3 + 0.1 * trial, 50 + trial, trial % 2 ? Placement::centered : Placement::corner,
                                alpha);
      const Signald f = oracle::random_pulse(kGrid, rng), h = oracle::random_pulse(kGrid, rng);
      const PulseProfile profile(f, h, s, 2);
      for (double p : {1.0, 2.0, 3.0})
        for (Mode mode : {Mode::c1, Mode::c2}) {
          const ErrorRoutes r = error_ep_routes(s, profile, config(p, 2, mode, alpha, Point2<double>(m(rng), m(rng))));
          CHECK(std::abs(r.direct - r.reduced) <= 1e-6 * std::max(r.direct, r.reduced) + 1e-12);
        }
    }
  }
  SUBCASE("configuration checks") {
    const CellSpreading s = sample_cell_spreading(3, 0.5, 1, Placement::centered, 0.5);
    CHECK_THROWS_AS(error_ep(s, g, g, config(2, 2, Mode::c2, 0.0), 2), std::invalid_argument);
    const PulseProfile profile(g, g, s, 2);
    CHECK_THROWS_AS(error_ep(sample_cell_spreading(4, 0.5, 1, Placement::centered, 0.5), profile,
                             config(2, 2, Mode::c2, 0.5)),
                    ShapeMismatch);
    const Signald twice = cd(2.0) * g;
    CHECK_THROWS_AS(error_ep(s, twice, g, config(2, 2, Mode::c2, 0.5), 2), PreconditionFailed);
    CHECK_THROWS_AS(rho_bar_inf(g, twice, s, Mode::c2, 0.5, 2), PreconditionFailed);
  }
  SUBCASE("default configuration ratio below the bound") {
    const CellSpreading s = sample_cell_spreading(10, 0.5, 2024, Placement::centered);
    const BoundReport rep = full_report(s, g, g, config(2, 2, Mode::c2), 4);
    REQUIRE(rep.ratio.has_value());
    CHECK(*rep.ratio <= rep.thm2_bound);
    CHECK(*rep.ratio > 0);
  }
}

TEST_CASE("rho_bar_inf") {
  const Signald g = unit_gaussian();
  CHECK(rho_bar_inf(g, g, tiny_identity(1e-3), Mode::c2, 0.0, 1) == 0.0);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 4; ++trial) {
    const Signald f = oracle::random_pulse(kGrid, rng), h = oracle::random_pulse(kGrid, rng);
    const CellSpreading s = sample_cell_spreading(3, 1.0, trial);
    const PulseProfile profile(f, h, s, 2);
    const double bound_c2 = norm(h, kInf) + norm(f, kInf);
    const double bound_c1 = norm(h, kInf) + profile.ambiguity().cwiseAbs().maxCoeff() * norm(f, kInf);
    CHECK(rho_bar_inf(f, h, s, Mode::c2, 0.0, 2) <= bound_c2);
    CHECK(rho_bar_inf(f, h, s, Mode::c1, 0.0, 2) <= bound_c1);
  }

  const CellSpreading s = sample_cell_spreading(10, 1.0, 3, Placement::centered);
  const double coarse = rho_bar_inf(g, g, s, Mode::c2, 0.0, 4);
  const double fine = rho_bar_inf(g, g, s, Mode::c2, 0.0, 16);
  CHECK(std::abs(coarse - fine) <= 0.02 * fine);
}

TEST_CASE("PulseProfile") {
  const Signald g = unit_gaussian();
  const CellSpreading s = sample_cell_spreading(10, 0.5, 4, Placement::centered);
  const PulseProfile profile(g, g, s, 4);
  CHECK(profile.converged());
  CHECK(profile.refinement_levels() >= 2);
  CHECK(profile.matches(sample_cell_spreading(10, 0.5, 99, Placement::centered), 4));
  CHECK_FALSE(profile.matches(sample_cell_spreading(10, 0.5, 99, Placement::corner), 4));
  CHECK_FALSE(profile.matches(s, 2));

  const SpreadingNodes& nodes = profile.nodes();
  for (Index i = 0; i < nodes.nu1.size(); i += 7)
    for (Index j = 0; j < nodes.nu2.size(); j += 5)
      CHECK(std::abs(profile.ambiguity()(i, j) - oracle::gaussian_ambiguity(nodes.nu1(i), nodes.nu2(j))) <= 1e-9);

  // extrema sit at the corners of the centred square, |mu|^2 = |U| / 2
  const double corner = std::exp(-std::numbers::pi * 0.5 / 4);
  CHECK(profile.inf_re_a() == doctest::Approx(corner).epsilon(1e-9));
  CHECK(profile.sup_abs_a_minus_one() == doctest::Approx(1 - corner).epsilon(1e-9));
  CHECK(profile.r_inf(Mode::c2) == doctest::Approx(2 * (1 - corner)).epsilon(1e-9));
  CHECK(profile.r_inf(Mode::c1) == doctest::Approx(1 - corner * corner).epsilon(1e-9));

  const Eigen::MatrixXd r1 = profile.r_function(Mode::c1);
  const Eigen::ArrayXXd expect = 1.0 - profile.ambiguity().array().abs2();
  CHECK((r1.array() - expect).abs().maxCoeff() <= 1e-14);
  CHECK(profile.smoothing(Mode::c2) == Eigen::MatrixXcd::Ones(40, 40));
}

TEST_CASE("thm2_bound") {
  const Signald g = unit_gaussian();
  SUBCASE("p = 2, a = 1, C2 is the sup of 2 (1 - Re A)") {
    const CellSpreading s = sample_cell_spreading(10, 0.5, 5, Placement::centered);
    const PulseProfile profile(g, g, s, 4);
    const double bound = thm2_bound(profile, config(2, 1, Mode::c2));
    CHECK(bound * bound == doctest::Approx(2 * (1 - std::exp(-std::numbers::pi * 0.5 / 4))).epsilon(1e-9));
  }
  SUBCASE("p = 2, a = 2, C1 equals r_1") {
    const CellSpreading s = sample_cell_spreading(10, 0.75, 6, Placement::centered);
    const PulseProfile profile(g, g, s, 4);
    const ErrorConfig cfg = config(2, 2, Mode::c1);
    CHECK(thm2_bound(profile, cfg) == doctest::Approx(fidelity_r1(profile, cfg)).epsilon(1e-12));
  }
  SUBCASE("signal overload") {
    const CellSpreading s = sample_cell_spreading(4, 0.5, 7);
    const ErrorConfig cfg = config(2, 2, Mode::c2);
    CHECK(thm2_bound(s, g, g, cfg, 2) == thm2_bound(PulseProfile(g, g, s, 2), cfg));
  }
}

TEST_CASE("kozek_simplified") {
  const Signald g = unit_gaussian();
  const ErrorConfig cfg = config(2, 1, Mode::c2);
  SUBCASE("sine term at |U| = 1") {
    const CellSpreading s = sample_cell_spreading(10, 1.0, 1, Placement::centered);
    const PulseProfile profile(g, g, s, 4);
    CHECK(kozek_simplified(s, profile, cfg) - 3 * profile.sup_abs_a_minus_one() == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("vanishes as U shrinks") {
    const double k = kozek_simplified(sample_cell_spreading(2, 1e-6, 1, Placement::centered), g, cfg, 2);
    CHECK(k <= 1e-5);
  }
  SUBCASE("Gaussian epsilon is attained at a corner") {
    const CellSpreading s = sample_cell_spreading(10, 0.5, 1, Placement::centered);
    const PulseProfile profile(g, g, s, 4);
    CHECK(profile.sup_abs_a_minus_one() == doctest::Approx(1 - std::exp(-std::numbers::pi / 8)).epsilon(1e-9));
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(kozek_simplified(sample_cell_spreading(10, 2.0, 1, Placement::centered), g, cfg, 2), DomainError);
    CHECK_THROWS_AS(kozek_simplified(sample_cell_spreading(10, 0.5, 1, Placement::corner), g, cfg, 2), DomainError);
    CHECK_THROWS_AS(kozek_simplified(sample_cell_spreading(10, 0.5, 1, Placement::centered), g,
                                     config(2, 2, Mode::c2), 2),
                    DomainError);
    CHECK_THROWS_AS(kozek_simplified(sample_cell_spreading(10, 0.5, 1, Placement::centered), g,
                                     config(2, 1, Mode::c1), 2),
                    DomainError);
    const CellSpreading polarized = sample_cell_spreading(10, 0.5, 1, Placement::centered, 0.5);
    CHECK_THROWS_AS(kozek_simplified(polarized, g, config(2, 1, Mode::c2, 0.5), 2), DomainError);
    std::mt19937_64 rng(3);
    const Signald other = oracle::random_pulse(kGrid, rng);
    const CellSpreading s = sample_cell_spreading(10, 0.5, 1, Placement::centered);
    CHECK_THROWS_AS(kozek_simplified(s, PulseProfile(g, other, s, 2), cfg), std::invalid_argument);
  }
}

TEST_CASE("general_bound and r_inf_bound") {
  const Signald g = unit_gaussian();
  const CellSpreading s = sample_cell_spreading(5, 0.8, 1, Placement::centered);
  CHECK(general_bound(s, g, g, config(2, 2, Mode::c2)) == doctest::Approx(2 * std::sqrt(0.8)));
  CHECK(general_bound(s, g, g, config(2, 1, Mode::c2)) == doctest::Approx(2.0));
  CHECK(general_bound(s, g, g, config(2, kInf, Mode::c2)) == doctest::Approx(2 * 0.8));
  // ||g||_4 of the unit Gaussian is 1 and ||g||_1 is 2^{1/4}
  CHECK(general_bound(s, g, g, config(4, 1, Mode::c2)) == doctest::Approx(2.0));
  CHECK(general_bound(s, g, g, config(1, 1, Mode::c2)) == doctest::Approx(2 * std::pow(2.0, 0.25)));

  const PulseProfile profile(g, g, s, 4);
  CHECK(profile.r_inf(Mode::c1) <= 1.0);
  CHECK((profile.r_inf(Mode::c2) <= 1.0) == (profile.inf_re_a() >= 0.5));
  const PulseProfile wide(g, g, sample_cell_spreading(5, 2.0, 1, Placement::centered), 4);
  CHECK(wide.r_inf(Mode::c2) > 1.0);
  CHECK(wide.inf_re_a() < 0.5);

  const CellSpreading tiny = sample_cell_spreading(2, 1e-8, 1, Placement::centered);
  const PulseProfile small(g, g, tiny, 2);
  CHECK(small.r_inf(Mode::c1) <= 1e-7);
  CHECK(small.r_inf(Mode::c2) <= 1e-7);
  CHECK(r_inf_bound(small, config(2, 2, Mode::c2)) <= 1e-7);
  CHECK(r_inf_bound(tiny, g, g, config(2, 2, Mode::c1), 2) <= 1e-7);
}

TEST_CASE("fidelity bounds") {
  const Signald g = unit_gaussian();
  SUBCASE("explicit formulas") {
    const CellSpreading s = sample_cell_spreading(10, 0.6, 1, Placement::centered);
    const PulseProfile profile(g, g, s, 4);
    const ErrorConfig cfg = config(2, 2, Mode::c2);
    const Fidelities fid = fidelities(profile);
    double two = 0, one = 0;
    const SpreadingNodes& n = profile.nodes();
    for (Index i = 0; i < n.nu1.size(); ++i)
      for (Index j = 0; j < n.nu2.size(); ++j) {
        const double a = oracle::gaussian_ambiguity(n.nu1(i), n.nu2(j));
        two += a * a * n.cell_area;
        one += a * n.cell_area;
      }
    CHECK(fid.two_channel == doctest::Approx(two).epsilon(1e-9));
    CHECK(fid.one_channel == doctest::Approx(one).epsilon(1e-9));
    const FidelityBounds fb = fidelity_bounds(profile, cfg);
    CHECK(fb.r1 == doctest::Approx(std::sqrt(0.6 - two)).epsilon(1e-8));
    CHECK(fb.r2 == doctest::Approx(std::sqrt(2 * (0.6 - one))).epsilon(1e-8));
  }
  SUBCASE("vanish as U shrinks") {
    const FidelityBounds fb = fidelity_bounds(sample_cell_spreading(2, 1e-8, 1, Placement::centered), g, g,
                                              config(2, 2, Mode::c2), 2);
    CHECK(fb.r1 <= 1e-7);
    CHECK(fb.r2 <= 1e-7);
  }
  SUBCASE("b = infinity limit and refinement") {
    const CellSpreading s = sample_cell_spreading(10, 1.0, 1, Placement::centered);
    const PulseProfile coarse(g, g, s, 4), fine(g, g, s, 16);
    CHECK(fidelity_r1(coarse, config(2, 1, Mode::c1)) == 1.0);
    CHECK(fidelity_r1(coarse, config(2, 2, Mode::c1)) ==
          doctest::Approx(fidelity_r1(fine, config(2, 2, Mode::c1))).epsilon(0.02));
  }
  SUBCASE("preconditions") {
    const CellSpreading s = sample_cell_spreading(10, 1.0, 1, Placement::centered);
    const PulseProfile profile(g, g, s, 4);
    try {
      fidelity_r1(profile, config(4, 4, Mode::c1));
      FAIL("expected PreconditionFailed");
    } catch (const PreconditionFailed& e) {
      CHECK(e.condition() == "b>=p");
    }
    try {
      fidelity_r2(profile, config(2, 2, Mode::c2));
      FAIL("expected PreconditionFailed");
    } catch (const PreconditionFailed& e) {
      CHECK(e.condition() == "C2-feasibility");
    }
    CHECK_THROWS_AS(fidelity_bounds(profile, config(2, 2, Mode::c2)), PreconditionFailed);
  }
}

TEST_CASE("ambiguity_mass_check") {
  const Signald g = unit_gaussian();
  const double e = std::numbers::e;
  const MassCheck tiny = ambiguity_mass_check(g, g, 2.0, 1e-6, 0.0);
  CHECK(tiny.lhs <= 1.1e-6);
  CHECK(tiny.rhs <= 1.1e-6);
  CHECK(ambiguity_mass_check(g, g, 1.0, 0.0, 0.0).lhs == 0.0);

  const MassCheck two = ambiguity_mass_check(g, g, 2.0, 1.0, 0.0);
  CHECK(two.rhs == doctest::Approx(std::exp(-1.0 / e)));
  CHECK(two.lhs == doctest::Approx(oracle::gaussian_mass(2.0, 1.0)).epsilon(2e-3));
  CHECK(two.lhs <= two.rhs);

  const MassCheck one = ambiguity_mass_check(g, g, 1.0, e, 0.0);
  CHECK(one.rhs == doctest::Approx(e * std::exp(-0.5)));
  CHECK(one.lhs == doctest::Approx(oracle::gaussian_mass(1.0, e)).epsilon(2e-3));

  CHECK_THROWS_AS(ambiguity_mass_check(g, g, 1.0, 2.8, 0.0), DomainError);
  CHECK_THROWS_AS(ambiguity_mass_check(g, g, 4.0, 1.5, 0.0), DomainError);
  CHECK_THROWS_AS(ambiguity_mass_check(g, g, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("c2_feasibility") {
  const Signald g = unit_gaussian();
  CHECK(c2_support_threshold() == doctest::Approx(2 * std::numbers::e * std::numbers::ln2).epsilon(1e-15));
  CHECK(c2_support_threshold() == doctest::Approx(3.76834).epsilon(1e-5));

  const C2Feasibility origin = c2_feasibility(g, g, tiny_identity(1e-4), 0.0, 1);
  CHECK(origin.feasible);
  CHECK(origin.within_threshold);

  const C2Feasibility big = c2_feasibility(g, g, sample_cell_spreading(4, 4.0, 1, Placement::centered), 0.0, 2);
  CHECK_FALSE(big.within_threshold);
  CHECK_FALSE(big.feasible);

  // centred square: the corner radius is |U| / 2, so the disk condition reads |U| <= 4 ln 2 / pi
  const double limit = 4 * std::numbers::ln2 / std::numbers::pi;
  CHECK(c2_feasibility(g, g, sample_cell_spreading(10, 0.97 * limit, 1, Placement::centered), 0.0, 4).feasible);
  CHECK_FALSE(c2_feasibility(g, g, sample_cell_spreading(10, 1.03 * limit, 1, Placement::centered), 0.0, 4).feasible);
}

TEST_CASE("necessary_u_bound") {
  SUBCASE("scan oracle") {
    const auto f = [](double x) { return necessary_condition_lhs(x, 1, 2.0, 1.0, 1.0); };
    const NecessaryBound nb = necessary_u_bound(0.1, 1, 2.0, 1.0, 1.0);
    CHECK_FALSE(nb.saturated);
    CHECK(std::abs(nb.measure - oracle::scan_root(f, 0.1, std::numbers::e, 1e-6)) <= 1e-6);
    CHECK(std::abs(nb.measure * (1 - std::exp(-nb.measure / std::numbers::e)) - 0.1) <= 1e-8);
  }
  SUBCASE("equality at the root") {
    for (double delta : {0.1, 0.3, 0.5})
      for (int k : {1, 2})
        for (double b : {1.0, 2.0, 3.0}) {
          const NecessaryBound nb = necessary_u_bound(delta, k, 2.0, b, 0.7);
          CHECK(std::abs(necessary_condition_lhs(nb.measure, k, 2.0, b, 0.7) - delta) <= 1e-8);
        }
  }
  SUBCASE("monotone in delta and k") {
    CHECK(necessary_u_bound(1e-6, 1, 2.0, 1.0, 1.0).measure < 1e-2);
    CHECK(necessary_u_bound(0.2, 1, 2.0, 1.0, 1.0).measure > necessary_u_bound(0.1, 1, 2.0, 1.0, 1.0).measure);
    for (double delta : {0.1, 0.3, 0.5})
      CHECK(necessary_u_bound(delta, 2, 2.0, 2.0, 1.0).measure < necessary_u_bound(delta, 1, 2.0, 2.0, 1.0).measure);
  }
  SUBCASE("saturation and no solution") {
    const NecessaryBound sat = necessary_u_bound(0.5, 1, 4.0, 1.0, 0.01);
    CHECK(sat.saturated);
    CHECK(sat.measure == std::numbers::e);
    CHECK_THROWS_AS(necessary_u_bound(0.5, 1, 2.0, kInf, 1.0), NoSolution);
    CHECK_THROWS_AS(necessary_u_bound(0.0, 1, 2.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(necessary_u_bound(0.5, 3, 2.0, 1.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("full_report") {
  const Signald g = unit_gaussian();
  SUBCASE("identity channel") {
    const BoundReport rep = full_report(tiny_identity(1e-3), g, g, config(2, 2, Mode::c2), 1);
    REQUIRE(rep.e_p.has_value());
    CHECK(*rep.e_p <= 1e-6);
    CHECK(rep.thm2_bound <= 1e-6);
    CHECK(rep.c2_feasible);
  }
  SUBCASE("absent fields carry reasons") {
    const BoundReport rep =
        full_report(sample_cell_spreading(10, 2.0, 1, Placement::centered), g, g, config(2, 1, Mode::c2), 4);
    CHECK_FALSE(rep.kozek_simplified.has_value());
    CHECK(rep.kozek_simplified.reason.find("|U| <= 1") != std::string::npos);
    CHECK_FALSE(rep.r2.has_value());
    CHECK(rep.r2.reason == "C2-feasibility");
    CHECK(rep.r1.has_value());
    CHECK(rep.c2_modulus_bound >= rep.thm2_bound * rep.thm2_bound - 1e-12);
  }
  SUBCASE("all bound fields are non-negative") {
    for (Mode mode : {Mode::c1, Mode::c2}) {
      const BoundReport rep =
          full_report(sample_cell_spreading(10, 0.5, 3, Placement::centered), g, g, config(2, 1, mode), 4);
      CHECK(rep.kozek_simplified.has_value() == (mode == Mode::c2));
      for (double v : {rep.thm2_bound, rep.general_bound, rep.r_inf_bound, rep.rho_bar_inf, rep.r_inf, rep.fidelity1,
                       rep.fidelity2, rep.c2_modulus_bound})
        CHECK(v >= 0);
      CHECK(rep.sup_converged);
    }
  }
}

TEST_CASE("property: domination, optimality and ordering") {
  const Signald g = unit_gaussian();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> m(-1, 1);
  int checked = 0;
  for (double measure : {0.25, 1.0, 2.0}) {
    for (double alpha : {0.0, 0.5}) {
      const CellSpreading support = sample_cell_spreading(6, measure, 0, Placement::centered, alpha);
      const Signald h = alpha == 0.0 ? g : oracle::random_pulse(kGrid, rng, 1);
      const PulseProfile profile(g, h, support, 3);
      for (int trial = 0; trial < 4; ++trial) {
        const CellSpreading s = sample_cell_spreading(6, measure, 300 + trial, Placement::centered, alpha);
        const Point2<double> mu(m(rng), m(rng));
        for (double a : {1.0, 2.0, kInf}) {
          const ErrorConfig c1 = config(2, a, Mode::c1, alpha, mu), c2 = config(2, a, Mode::c2, alpha, mu);
          for (const ErrorConfig& cfg : {c1, c2}) {
            const double ratio = error_ep(s, profile, cfg) / spreading_norm(s, a);
            CHECK(ratio <= thm2_bound(profile, cfg) + 1e-6);
            ++checked;
          }
          CHECK(thm2_bound(profile, c1) <= thm2_bound(profile, c2) + 1e-12);
          if (h.samples() == g.samples())
            for (double p : {2.0, 4.0}) {
              const ErrorConfig cfg = config(p, a, Mode::c1, alpha, mu);
              CHECK(thm2_bound(profile, cfg) <= r_inf_bound(profile, cfg) + 1e-12);
              CHECK(r_inf_bound(profile, cfg) <= general_bound(s, g, h, cfg) + 1e-12);
            }
        }
      }
    }
  }
  CHECK(checked == 3 * 2 * 4 * 3 * 2);
}

TEST_CASE("property: rho_2 kernel identity and Hoelder chain") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const Signald f = oracle::random_pulse(kGrid, rng, 1), h = oracle::random_pulse(kGrid, rng, 1);
    const double alpha = trial % 2 ? 0.5 : 0.0;
    const CellSpreading s = sample_cell_spreading(4, 0.3 + 0.2 * trial, 700 + trial, Placement::corner, alpha);
    const PulseProfile profile(f, h, s, 2);
    for (Mode mode : {Mode::c1, Mode::c2}) {
      for (double a : {2.0, 1.0}) {
        const ErrorConfig cfg = config(2, a, mode, alpha);
        const double direct = rho_p_norm(profile, cfg);
        CHECK(std::abs(direct - rho_kernel_bound(profile, cfg)) <= 1e-8 * direct);
      }
      for (double p : {1.0, 2.0, 3.0})
        for (double a : {1.0, 2.0, kInf}) {
          const ErrorConfig cfg = config(p, a, mode, alpha, Point2<double>(0.3, -0.2));
          CHECK(error_ep(s, profile, cfg) <= spreading_norm(s, a) * rho_p_norm(profile, cfg) * (1 + 1e-6));
        }
    }
  }
}
