#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "ceco/comfort.hpp"
#include "support/pmv_reference.hpp"

using namespace ceco;

TEST_CASE("clothing area factor branches") {
  CHECK(clothing_area_factor(0.0) == doctest::Approx(1.0));
  CHECK(clothing_area_factor(0.078) == doctest::Approx(1.10062).epsilon(1e-12));
  CHECK(clothing_area_factor(0.1) == doctest::Approx(1.1145).epsilon(1e-12));
}

TEST_CASE("convective coefficient") {
  CHECK(convective_coeff(25.0, 25.0, 1.0) == doctest::Approx(12.1));
  CHECK(convective_coeff(41.0, 25.0, 0.0) == doctest::Approx(4.76).epsilon(1e-12));
  CHECK(convective_coeff(26.0, 25.0, 4.0) == doctest::Approx(24.2).epsilon(1e-12));
}

TEST_CASE("cloth surface temperature") {
  SUBCASE("all loss terms vanish") {
    OccupantParams occ;
    occ.metabolic_rate = 58.15;
    occ.mech_power = 58.15;  // M == W_mech
    occ.clothing_insulation = 0.0;
    CHECK(cloth_surface_temp(occ, 26.0) == doctest::Approx(35.7).epsilon(1e-12));
  }
  SUBCASE("regression constant") {
    OccupantParams occ;
    occ.clothing_insulation = 0.155;
    // frozen from the independent straight-line evaluation
    CHECK(cloth_surface_temp(occ, 26.0) ==
          doctest::Approx(27.551547880750).epsilon(1e-12));
  }
  SUBCASE("slope in air temperature matches the closed form") {
    OccupantParams occ;
    const double slope = (cloth_surface_temp(occ, 30.0) - cloth_surface_temp(occ, 20.0)) / 10.0;
    CHECK(slope == doctest::Approx(-0.0014 * occ.metabolic_rate * occ.clothing_insulation)
                       .epsilon(1e-9));
  }
}

TEST_CASE("dry heat loss") {
  ComfortEnv env;
  SUBCASE("vanishes at uniform temperature") {
    env.t_a = 26.0;
    env.t_mr = 26.0;
    CHECK(dry_heat_loss(26.0, env, 1.1, 4.0) == doctest::Approx(0.0));
  }
  SUBCASE("convection-only example") {
    env.t_a = 26.0;
    env.t_mr = 30.0;
    CHECK(dry_heat_loss(30.0, env, 1.1, 4.0) == doctest::Approx(17.6).epsilon(1e-12));
  }
  SUBCASE("radiation-only example") {
    env.t_a = 30.0;
    env.t_mr = 26.0;
    const double h = dry_heat_loss(30.0, env, 1.1, 123.0);
    const double expected =
        3.96e-8 * 1.1 * (std::pow(303.0, 4.0) - std::pow(299.0, 4.0));
    CHECK(h == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("skin and respiratory exchange terms") {
  OccupantParams occ;
  CHECK(respiratory_convective(occ, 34.0) == doctest::Approx(0.0));
  CHECK(respiratory_evaporative(occ) == doctest::Approx(1.7e-5 * 58.15 * 4167.0).epsilon(1e-12));
  CHECK(evaporative_heat(occ) == doctest::Approx(3.05e-3 * (5733.0 - 6.99 * 58.15 - 1700.0)).epsilon(1e-12));

  SUBCASE("sweating term clamps at zero below the sedentary rate") {
    OccupantParams low;
    low.metabolic_rate = 50.0;  // below 58.15
    const double e = evaporative_heat(low);
    CHECK(e == doctest::Approx(3.05e-3 * (5733.0 - 6.99 * 50.0 - 1700.0)).epsilon(1e-12));
  }
}

TEST_CASE("pmv sign behavior") {
  OccupantParams occ;
  ComfortEnv hot{40.0, 40.0, 0.1, 0.0};
  ComfortEnv cold{10.0, 10.0, 0.1, 0.0};
  CHECK(pmv_original(occ, hot) > 0.0);
  CHECK(pmv_original(occ, cold) < 0.0);
}

TEST_CASE("pmv equals the independent reference evaluation") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ta(10.0, 40.0);
  std::uniform_real_distribution<double> tmr(10.0, 45.0);
  std::uniform_real_distribution<double> vair(0.0, 1.0);
  std::uniform_real_distribution<double> met(46.0, 150.0);
  std::uniform_real_distribution<double> work(0.0, 20.0);
  std::uniform_real_distribution<double> icl(0.0, 0.2);
  std::uniform_real_distribution<double> pa(800.0, 2800.0);

  double max_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    OccupantParams occ;
    occ.metabolic_rate = met(rng);
    occ.mech_power = work(rng);
    occ.clothing_insulation = icl(rng);
    occ.vapor_pressure = pa(rng);
    ComfortEnv env{ta(rng), tmr(rng), vair(rng), 0.0};

    ceco_test::PmvRefInput ref;
    ref.met = occ.metabolic_rate;
    ref.work = occ.mech_power;
    ref.i_cl = occ.clothing_insulation;
    ref.p_a = occ.vapor_pressure;
    ref.t_a = env.t_a;
    ref.t_mr = env.t_mr;
    ref.v_air = env.v_air;
    max_err = std::max(max_err,
                       std::fabs(pmv_original(occ, env) - ceco_test::pmv_reference(ref)));
  }
  CHECK(max_err <= 1e-9);
}

TEST_CASE("blended air temperature and vent velocity") {
  OccupantParams occ;
  occ.alpha1 = 1.0;
  occ.alpha2 = 0.0;
  CHECK(blended_air_temp(26.0, 5.0, occ) == doctest::Approx(26.0));
  occ.alpha1 = 0.5;
  occ.alpha2 = 0.5;
  CHECK(blended_air_temp(30.0, 10.0, occ) == doctest::Approx(20.0));
  occ.alpha1 = 0.8;
  occ.alpha2 = 0.2;
  CHECK(blended_air_temp(28.0, 8.0, occ) == doctest::Approx(24.0).epsilon(1e-12));

  CHECK(vent_air_velocity(0.0, occ) == doctest::Approx(0.0));
  CHECK(vent_air_velocity(0.1, occ) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(vent_air_velocity(0.17, occ) == doctest::Approx(0.85).epsilon(1e-12));
}

TEST_CASE("modified pmv") {
  OccupantParams occ;

  SUBCASE("reduces to the indoor model without radiation or vent blending") {
    OccupantParams reduced = occ;
    reduced.alpha1 = 1.0;
    reduced.alpha2 = 0.0;
    reduced.mech_power = 0.0;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> tcab(15.0, 40.0);
    std::uniform_real_distribution<double> tint(15.0, 45.0);
    std::uniform_real_distribution<double> flow(0.05, 0.17);
    double max_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double t_cab = tcab(rng);
      const double t_int = tint(rng);
      const double m_bl = flow(rng);
      ComfortEnv env{t_cab, t_int, vent_air_velocity(m_bl, reduced), 0.0};
      max_err = std::max(max_err,
                         std::fabs(pmv_modified(t_cab, 10.0, t_int, m_bl, 0.0, reduced) -
                                   pmv_original(reduced, env)));
    }
    CHECK(max_err <= 1e-12);
  }

  SUBCASE("strictly increasing in the solar load") {
    double prev = pmv_modified(26.0, 10.0, 28.0, 0.1, 0.0, occ);
    for (double w = 10.0; w <= 300.0; w += 10.0) {
      const double y = pmv_modified(26.0, 10.0, 28.0, 0.1, w, occ);
      CHECK(y > prev);
      prev = y;
    }
  }

  SUBCASE("regression constant at the reference point") {
    // frozen from the independent straight-line evaluation
    CHECK(pmv_modified(26.0, 10.0, 28.0, 0.1, 150.0, occ) ==
          doctest::Approx(6.705715862555).epsilon(1e-12));
  }

  SUBCASE("more air flow does not warm the occupant in the forced branch") {
    // forced branch: 12.1*sqrt(v) dominates, cloth warmer than air
    double prev = pmv_modified(22.0, 8.0, 24.0, 0.08, 50.0, occ);
    for (double m = 0.09; m <= 0.17; m += 0.01) {
      const double y = pmv_modified(22.0, 8.0, 24.0, m, 50.0, occ);
      CHECK(y <= prev + 1e-12);
      prev = y;
    }
  }
}

TEST_CASE("pmv nondecreasing in air temperature over the cabin range") {
  OccupantParams occ;
  double prev = -1e9;
  for (double t = 15.0; t <= 40.0; t += 0.25) {
    ComfortEnv env{t, 26.0, 0.3, 0.0};
    const double y = pmv_original(occ, env);
    CHECK(y >= prev - 1e-9);
    prev = y;
  }
}

TEST_CASE("sensation levels") {
  CHECK(std::string(sensation_level(0.0)) == "Neutral");
  CHECK(std::string(sensation_level(3.0)) == "Hot");
  CHECK(std::string(sensation_level(-0.4)) == "Neutral");
  CHECK(std::string(sensation_level(1.6)) == "Warm");
  CHECK(std::string(sensation_level(-2.7)) == "Cold");
  CHECK(std::string(sensation_level(9.9)) == "Hot");

  SUBCASE("total mapping over a wide sweep") {
    const char* labels[] = {"Hot", "Warm", "Slightly warm", "Neutral",
                            "Slightly cool", "Cool", "Cold"};
    for (double y = -10.0; y <= 10.0; y += 0.01) {
      const std::string s = sensation_level(y);
      bool known = false;
      for (const char* l : labels) known = known || s == l;
      CHECK(known);
    }
  }
}

TEST_CASE("comfort bounds trajectory") {
  ComfortBoundsSpec spec;
  CHECK(comfort_bounds(0.0, spec).ub == doctest::Approx(spec.ub_initial));
  CHECK(comfort_bounds(1e9, spec).ub == doctest::Approx(0.5));
  CHECK(comfort_bounds(1e9, spec).lb == doctest::Approx(-0.5));

  ComfortBoundsSpec ex;
  ex.ub_initial = 3.0;
  ex.ub_final = 0.5;
  ex.ub_decay_tau = 120.0;
  CHECK(comfort_bounds(120.0, ex).ub == doctest::Approx(0.5 + 2.5 / std::exp(1.0)).epsilon(1e-12));

  SUBCASE("upper bound strictly decays and stays above the lower bound") {
    double prev = comfort_bounds(0.0, spec).ub;
    for (double t = 5.0; t <= 1200.0; t += 5.0) {
      const ComfortBounds b = comfort_bounds(t, spec);
      CHECK(b.ub < prev);
      CHECK(b.ub > b.lb);
      CHECK(b.lb == spec.lb_const);
      prev = b.ub;
    }
  }
}

TEST_CASE("report clamp") {
  CHECK(clamp_pmv_for_report(11.3) == doctest::Approx(4.0));
  CHECK(clamp_pmv_for_report(-7.0) == doctest::Approx(-4.0));
  CHECK(clamp_pmv_for_report(0.37) == doctest::Approx(0.37));
}

TEST_CASE("occupant invariants") {
  OccupantParams occ;
  CHECK(occ.validate().empty());
  occ.alpha1 = 0.7;  // no longer sums to 1
  CHECK(!occ.validate().empty());

  ComfortBoundsSpec b;
  b.ub_final = -1.0;  // lb >= ub_final
  CHECK(!b.validate().empty());
}
