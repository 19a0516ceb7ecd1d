#include <doctest.h>

#include <sstream>

#include "cwalk/metric.hpp"

using namespace cwalk;

TEST_CASE("metric kind names round-trip") {
    for (auto k : {MetricKind::constant, MetricKind::gaussian_bump_static, MetricKind::exponential_time,
                   MetricKind::power_time, MetricKind::tabulated}) {
        CHECK(metric_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(metric_kind_from_string("schwarzschild"), ConfigError);
}

TEST_CASE("omega_field normalizes by the window maximum") {
    const Grid g = Grid::make(16, 0.25, -2);

    SUBCASE("constant field gives omega = 1 everywhere") {
        const OmegaSlice s = omega_field(ConformalField::constant(4.0), 0, g, TimeWindow{0, 1});
        CHECK(s.scale == 4.0);
        CHECK(s.omega.minCoeff() == 1.0);
        CHECK(s.omega.maxCoeff() == 1.0);
    }
    SUBCASE("bump peaks at 1 on the center site") {
        const ConformalField bump = ConformalField::gaussian_bump(3.0, 0.5);
        const OmegaSlice s = omega_field(bump, 0, g, TimeWindow{0, 0});
        REQUIRE(g.position(8) == 0.0);
        CHECK(s.scale == 4.0);
        CHECK(s.omega[8] == 1.0);
        const Real far = std::sqrt(bump.value(0, g.position(0)) / 4.0);
        CHECK(s.omega[0] == doctest::Approx(far).epsilon(1e-15));
        CHECK(s.omega.maxCoeff() <= 1.0);
        CHECK(s.omega.minCoeff() > 0.0);
    }
    SUBCASE("exponential growth: scale taken at the end of the window") {
        const ConformalField cf = ConformalField::exponential_time(1.0, 0.5);
        const Real scale = omega_scale(cf, g, TimeWindow{0, 1});
        CHECK(scale == doctest::Approx(std::exp(0.5)).epsilon(1e-14));
        const OmegaSlice start = omega_field(cf, 0, g, scale);
        CHECK(start.omega[3] == doctest::Approx(std::exp(-0.25)).epsilon(1e-14));
    }
    SUBCASE("window must be ordered") {
        CHECK_THROWS_AS(omega_scale(ConformalField::constant(1), g, TimeWindow{1, 0}), std::invalid_argument);
    }
}

TEST_CASE("nonpositive conformal factors are rejected") {
    const Grid g = Grid::make(8, 0.25);
    CHECK_THROWS_AS(ConformalField::constant(0), PreconditionError);
    CHECK_THROWS_AS(ConformalField::constant(-1), PreconditionError);
    CHECK_THROWS_AS(ConformalField::gaussian_bump(-1.5, 0.5), PreconditionError);
    CHECK_THROWS_AS(ConformalField::exponential_time(0, 1), PreconditionError);
    // t^p at t = 0 vanishes inside the sampled window
    const ConformalField p = ConformalField::power_time(1, 2);
    try {
        omega_scale(p, g, TimeWindow{0, 1});
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("nonpositive conformal factor") != std::string::npos);
    }
}

TEST_CASE("christoffel classes") {
    SUBCASE("constant") {
        const CurvatureReport r = curvature_report(ConformalField::constant(2.5), 0.3, -1.2);
        CHECK(r.christoffel_time_class == 0.0);
        CHECK(r.christoffel_space_class == 0.0);
        CHECK(r.ricci == 0.0);
    }
    SUBCASE("exponential: time class equals the rate") {
        const CurvatureReport r = christoffel(ConformalField::exponential_time(1, 2), 0.7, 0.0);
        CHECK(r.christoffel_time_class == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(r.christoffel_space_class == 0.0);
    }
    SUBCASE("bump: space class at x = 0.3") {
        // A = 0.5, s = 0.7: Omega'/Omega = -A r/s^2 g / (1 + A g), g = exp(-r^2 / 2s^2)
        const CurvatureReport r = christoffel(ConformalField::gaussian_bump(0.5, 0.7), 0, 0.3);
        CHECK(r.christoffel_space_class == doctest::Approx(-0.19178371441717593).epsilon(1e-14));
        CHECK(r.christoffel_time_class == 0.0);
    }
}

TEST_CASE("ricci scalar") {
    SUBCASE("Omega = exp(2t) is flat") {
        const ConformalField cf = ConformalField::exponential_time(1, 2);
        for (Real t : {-1.0, 0.0, 0.5, 2.0}) CHECK(std::abs(ricci_scalar(cf, t, 0.1)) <= 1e-12 * std::exp(-4 * t) + 1e-15);
    }
    SUBCASE("Omega = t^2 gives 4 / t^6") {
        const ConformalField cf = ConformalField::power_time(1, 2);
        for (Real t : {0.5, 1.0, 1.7, 3.0}) {
            const Real expected = 4 / std::pow(t, 6);
            CHECK(std::abs(ricci_scalar(cf, t, 0.0) - expected) <= 1e-12 * expected);
        }
    }
    SUBCASE("constant is exactly zero") { CHECK(ricci_scalar(ConformalField::constant(7), 1, 1) == 0.0); }
    SUBCASE("general form on a static bump") {
        const ConformalField bump = ConformalField::gaussian_bump(0.5, 0.7);
        CHECK(ricci_conformal_general(bump, 0, 0.3) == doctest::Approx(-0.38364883404519929).epsilon(1e-13));
        CHECK(ricci_scalar(bump, 0, 0.3) == 0.0);
    }
    SUBCASE("for uniform Omega the two forms differ by the factor Omega / 2") {
        const ConformalField cf = ConformalField::power_time(0.7, 3);
        for (Real t : {0.6, 1.3}) {
            CHECK(ricci_conformal_general(cf, t, 0) ==
                  doctest::Approx(ricci_scalar(cf, t, 0) * cf.value(t, 0) / 2).epsilon(1e-12));
        }
    }
}

TEST_CASE("finite differences converge at second order to the analytic derivatives") {
    const ConformalField bump = ConformalField::gaussian_bump(0.8, 0.6, 0.1);
    const ConformalField power = ConformalField::power_time(1.3, 2.5);
    const auto error = [](const ConformalField& cf, Real t, Real x, Real h) {
        const FdDerivatives fd = fd_derivatives(cf, t, x, h);
        return std::abs(fd.dt - cf.dt(t, x)) + std::abs(fd.dx - cf.dx(t, x)) + std::abs(fd.dtt - cf.dtt(t, x)) +
               std::abs(fd.dxx - cf.dxx(t, x));
    };
    for (Real h : {1e-2, 5e-3}) {
        const Real rb = error(bump, 0, 0.45, h) / error(bump, 0, 0.45, h / 2);
        const Real rp = error(power, 1.4, 0, h) / error(power, 1.4, 0, h / 2);
        CHECK(rb >= 3.5);
        CHECK(rb <= 4.5);
        CHECK(rp >= 3.5);
        CHECK(rp <= 4.5);
    }
}

TEST_CASE("normalized omega is invariant under rescaling Omega") {
    const Grid g = Grid::make(32, 1.0 / 8, -2);
    const ConformalField fields[] = {ConformalField::gaussian_bump(0.6, 0.4),
                                     ConformalField::exponential_time(0.3, -0.7),
                                     ConformalField::power_time(2, 1.5)};
    const TimeWindow window{0.5, 1.5};
    for (const auto& cf : fields) {
        for (Real factor : {0.01, 3.0, 1e4}) {
            const ConformalField scaled = cf.scaled(factor);
            for (Real t : {0.5, 1.0, 1.5}) {
                const RealVector a = omega_field(cf, t, g, window).omega;
                const RealVector b = omega_field(scaled, t, g, window).omega;
                CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-14);
            }
        }
    }
}

TEST_CASE("metric table CSV") {
    SUBCASE("round trip and bilinear interpolation") {
        std::istringstream in("t,x,omega2\n0,-1,1\n0,1,3\n1,-1,2\n1,1,4\n");
        const MetricTable table = read_metric_table(in);
        CHECK(table.t == std::vector<Real>{0, 1});
        CHECK(table.x == std::vector<Real>{-1, 1});
        const ConformalField cf = ConformalField::tabulated(table, 0.25);
        CHECK(cf.value(0.5, 0.0) == doctest::Approx(2.5));
        CHECK(cf.value(0, -1) == 1.0);
        CHECK(cf.value(5, 5) == 4.0);  // clamped
        CHECK(cf.dx(0.5, 0.0) == doctest::Approx(1.0));
        CHECK(cf.dt(0.5, 0.0) == doctest::Approx(1.0));
        CHECK_FALSE(cf.is_static());

        std::ostringstream out;
        write_metric_table(out, table);
        std::istringstream back(out.str());
        const MetricTable again = read_metric_table(back);
        CHECK(again.omega2 == table.omega2);
    }
    SUBCASE("single time slice is static") {
        std::istringstream in("t,x,omega2\n0,0,1\n0,1,2\n0,2,1\n");
        CHECK(ConformalField::tabulated(read_metric_table(in)).is_static());
    }
    SUBCASE("malformed input") {
        const char* bad[] = {
            "x,t,omega2\n0,0,1\n0,1,1\n",          // header
            "t,x,omega2\n",                        // no rows
            "t,x,omega2\n0,0,1\n0,1\n",            // missing column
            "t,x,omega2\n0,0,1\n0,1,1,7\n",        // extra column
            "t,x,omega2\n0,0,1\n0,1,abc\n",        // bad number
            "t,x,omega2\n0,0,1\n0,1,1\n1,0,1\n",   // incomplete grid
            "t,x,omega2\n0,1,1\n0,0,1\n",          // x decreasing
            "t,x,omega2\n1,0,1\n1,1,1\n0,0,1\n0,1,1\n",  // t decreasing
            "t,x,omega2\n0,0,1\n0,1,1\n1,0,1\n1,2,1\n",  // x axis not shared
            "t,x,omega2\n0,0,1\n",                 // single x sample
        };
        for (const char* text : bad) {
            std::istringstream in(text);
            CHECK_THROWS_AS(read_metric_table(in), ConfigError);
        }
    }
    SUBCASE("nonpositive entry") {
        std::istringstream in("t,x,omega2\n0,0,1\n0,1,0\n");
        try {
            read_metric_table(in);
            FAIL("expected PreconditionError");
        } catch (const PreconditionError& e) {
            CHECK(std::string(e.what()).find("nonpositive conformal factor") != std::string::npos);
        }
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(read_metric_table_file("/nonexistent/table.csv"), ConfigError); }
}
