#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "viscodg/study.hpp"

using namespace viscodg;

namespace {

std::string csv_of(const StudyResult& r)
{
    std::ostringstream out;
    write_csv(out, r);
    return out.str();
}

std::string config_error(std::string_view text)
{
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

double integrate_square(const std::function<double(double, double)>& f)
{
    return oracle::adaptive_simpson(
        [&](double x) { return oracle::adaptive_simpson([&](double y) { return f(x, y); }, 0.0, 1.0, 1e-13); },
        0.0, 1.0, 1e-12);
}

StudyRow row(Scheme s, int k, int n, double dt, double err)
{
    StudyRow r{s, k, n, std::sqrt(2.0) / n, dt, {}, false, {}};
    r.errors = {{err, 2 * err, 3 * err}, {4 * err, 5 * err, 6 * err}, 1.0};
    return r;
}

}  // namespace

TEST(ParseConfig, EmptyTextGivesDefaults)
{
    const auto c = parse_config("");
    EXPECT_EQ(c.study, StudyKind::Single);
    ASSERT_EQ(c.schemes.size(), 1u);
    EXPECT_EQ(c.schemes[0], Scheme::Displacement);
    EXPECT_EQ(c.degrees, std::vector<int>{1});
    EXPECT_EQ(c.ns, std::vector<int>{4});
    EXPECT_EQ(c.dts, std::vector<double>{0.25});
    EXPECT_FALSE(c.dt_equals_h);
    EXPECT_EQ(c.T, 1.0);
    EXPECT_EQ(c.penalty.alpha0, 10.0);
    EXPECT_EQ(c.penalty.beta0, 1.0);
    EXPECT_EQ(c.data, DataKind::Manufactured);
    EXPECT_EQ(c.solver, SolverMethod::Cholesky);
    const auto m = c.material();
    const auto ref = PronyMaterial::reference();
    EXPECT_EQ(m.rho(), ref.rho());
    EXPECT_EQ(m.phi0(), ref.phi0());
    EXPECT_EQ(m.phis(), ref.phis());
    EXPECT_EQ(m.taus(), ref.taus());
}

TEST(ParseConfig, ConvergenceTableConfiguration)
{
    const auto c = parse_config("study = hconv   # spatial\n"
                                "scheme = both\n"
                                "ns = 4, 8,16,32\n"
                                "dt = 1/2048\n"
                                "k = 2\n");
    EXPECT_EQ(c.study, StudyKind::HConvergence);
    EXPECT_EQ(c.schemes.size(), 2u);
    EXPECT_EQ(c.ns, (std::vector<int>{4, 8, 16, 32}));
    EXPECT_EQ(c.dts, std::vector<double>{1.0 / 2048.0});
    EXPECT_EQ(c.degrees, std::vector<int>{2});
}

TEST(ParseConfig, OtherKeys)
{
    const auto c = parse_config("study = tconv\nn = 8\ndt = 1/4, 1/8\nalpha0 = 5\nbeta0 = 1.5\nsolver = lu\n"
                                "lambda = 1\nmu = 2\nrho = 2\nphi0 = 0.3\nphis = 0.7\ntaus = 2\n");
    EXPECT_EQ(c.dts, (std::vector<double>{0.25, 0.125}));
    EXPECT_EQ(c.penalty.alpha0, 5.0);
    EXPECT_EQ(c.penalty.beta0, 1.5);
    EXPECT_EQ(c.solver, SolverMethod::LU);
    ASSERT_TRUE(c.elastic.has_value());
    EXPECT_EQ(c.elastic->lambda, 1.0);
    EXPECT_EQ(c.elastic->mu, 2.0);
    EXPECT_EQ(c.material().num_terms(), 1u);

    const auto h = parse_config("dt = h\nns = 2,4\n");
    EXPECT_TRUE(h.dt_equals_h);
    EXPECT_EQ(h.time_steps(4), std::vector<double>{0.25});

    const auto s = parse_config("study = stability\ndt = 1/4\n");
    EXPECT_EQ(s.data, DataKind::Homogeneous);
    EXPECT_EQ(s.stability_times, (std::vector<double>{5.0, 10.0}));

    // Later lines override earlier ones.
    EXPECT_EQ(parse_config("k = 1\nk = 3\n").degrees, std::vector<int>{3});
}

TEST(ParseConfig, ErrorsNameTheLine)
{
    EXPECT_THROW((void)parse_config("alpha0 = -1\n"), ConfigError);
    EXPECT_NE(config_error("alpha0 = -1\n").find("alpha0"), std::string::npos);
    EXPECT_EQ(config_error("# header\n\nfoo = 1\n").rfind("line 3: unknown key 'foo'", 0), 0u);
    EXPECT_EQ(config_error("k = two\n").rfind("line 1:", 0), 0u);
    EXPECT_EQ(config_error("k = 1\njust words\n").rfind("line 2:", 0), 0u);
    EXPECT_EQ(config_error("dt = 1/0\n").rfind("line 1:", 0), 0u);
    EXPECT_EQ(config_error("scheme = implicit\n").rfind("line 1:", 0), 0u);
    EXPECT_EQ(config_error("solver = qr\n").rfind("line 1:", 0), 0u);
    EXPECT_FALSE(config_error("beta0 = 0.5\n").empty());
    EXPECT_FALSE(config_error("k = 0\n").empty());
    EXPECT_FALSE(config_error("lambda = 1\n").empty());
    EXPECT_FALSE(config_error("dt = 0.3\n").empty());
    EXPECT_FALSE(config_error("phi0 = 0\n").empty());
    EXPECT_FALSE(config_error("study = stability\ndata = manufactured\n").empty());
    EXPECT_FALSE(config_error("study = stability\nTs = 2, 1\n").empty());
}

TEST(ParseNumber, FractionsAndDecimals)
{
    EXPECT_EQ(parse_number("1/2048"), 1.0 / 2048.0);
    EXPECT_EQ(parse_number(" 0.25 "), 0.25);
    EXPECT_EQ(parse_number("5e-3"), 5e-3);
    EXPECT_THROW((void)parse_number("1/"), ConfigError);
    EXPECT_THROW((void)parse_number("abc"), ConfigError);
}

TEST(Study, ZeroDataErrorsAreExactNorms)
{
    const auto c = parse_config("data = zero\nscheme = both\nk = 1\nn = 2\ndt = 1/4\nT = 1\n");
    const auto result = run_study(c);
    ASSERT_EQ(result.rows.size(), 2u);

    // Independent norms of u = (e^{1-t} xy, cos t sin xy) and w = du/dt at t = 1.
    const double t = 1.0;
    const double a = std::exp(1.0 - t);
    const double ad = -a;
    const double b = std::cos(t);
    const double bd = -std::sin(t);
    auto norms = [](double p, double q) {
        const double l2 = integrate_square([&](double x, double y) {
            const double u0 = p * x * y;
            const double u1 = q * std::sin(x * y);
            return u0 * u0 + u1 * u1;
        });
        const double strain = integrate_square([&](double x, double y) {
            const double g00 = p * y;
            const double g01 = p * x;
            const double g10 = q * y * std::cos(x * y);
            const double g11 = q * x * std::cos(x * y);
            const double off = 0.5 * (g01 + g10);
            return g00 * g00 + 2.0 * off * off + g11 * g11;
        });
        const double grad = integrate_square([&](double x, double y) {
            const double c = std::cos(x * y);
            return p * p * (x * x + y * y) + q * q * c * c * (x * x + y * y);
        });
        return std::array<double, 3>{std::sqrt(l2), std::sqrt(l2 + grad), std::sqrt(strain)};
    };
    const auto nu = norms(a, b);
    const auto nw = norms(ad, bd);
    for (const auto& r : result.rows) {
        EXPECT_FALSE(r.breakdown);
        EXPECT_NEAR(r.errors.t, 1.0, 1e-14);
        EXPECT_NEAR(r.errors.u.l2, nu[0], 1e-9);
        EXPECT_NEAR(r.errors.u.h1, nu[1], 1e-9);
        EXPECT_NEAR(r.errors.u.energy, nu[2], 1e-9);
        EXPECT_NEAR(r.errors.w.l2, nw[0], 1e-9);
        EXPECT_NEAR(r.errors.w.h1, nw[1], 1e-9);
        EXPECT_NEAR(r.errors.w.energy, nw[2], 1e-9);
    }
}

TEST(Study, CsvIsDeterministicAndOrdered)
{
    const auto c = parse_config("study = hconv\nscheme = both\nk = 1\nns = 4, 2\ndt = 1/4\nT = 1/2\n");
    const std::string first = csv_of(run_study(c));
    const std::string second = csv_of(run_study(c));
    EXPECT_EQ(first, second);

    std::istringstream in(first);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    ASSERT_EQ(lines.size(), 5u);
    EXPECT_EQ(lines[0].rfind("scheme,k,n,h,dt,err_u_L2,err_u_H1,err_u_energy,err_w_L2,err_w_H1,err_w_energy,", 0), 0u);
    EXPECT_EQ(lines[1].rfind("displacement,1,2,", 0), 0u);
    EXPECT_EQ(lines[2].rfind("displacement,1,4,", 0), 0u);
    EXPECT_EQ(lines[3].rfind("velocity,1,2,", 0), 0u);
    EXPECT_EQ(lines[4].rfind("velocity,1,4,", 0), 0u);
    // First row of a group has empty rate cells.
    EXPECT_EQ(lines[1].substr(lines[1].size() - 6), ",,,,,,");
    EXPECT_NE(lines[2].back(), ',');
}

TEST(Study, RowRatesFollowGroups)
{
    StudyResult r;
    r.study = StudyKind::HConvergence;
    r.rows = {row(Scheme::Displacement, 1, 4, 0.1, 1.0), row(Scheme::Displacement, 1, 8, 0.1, 0.25),
              row(Scheme::Displacement, 2, 16, 0.1, 0.1), row(Scheme::Velocity, 2, 32, 0.1, 0.05),
              row(Scheme::Velocity, 2, 64, 0.1, 0.025)};
    r.rows[4].breakdown = true;
    const auto rates = row_rates(r);
    ASSERT_EQ(rates.size(), 5u);
    EXPECT_FALSE(rates[0]);
    ASSERT_TRUE(rates[1]);
    for (double v : *rates[1]) {
        EXPECT_NEAR(v, 2.0, 1e-14);
    }
    EXPECT_FALSE(rates[2]);  // degree changes
    EXPECT_FALSE(rates[3]);  // scheme changes
    EXPECT_FALSE(rates[4]);  // breakdown

    StudyResult t;
    t.study = StudyKind::TConvergence;
    t.rows = {row(Scheme::Velocity, 2, 8, 0.5, 0.4), row(Scheme::Velocity, 2, 8, 0.25, 0.1)};
    const auto tr = row_rates(t);
    ASSERT_TRUE(tr[1]);
    EXPECT_NEAR((*tr[1])[0], 2.0, 1e-14);

    StudyResult single;
    single.rows = t.rows;
    EXPECT_FALSE(row_rates(single)[1]);
}

TEST(Study, PenaltyBreakdownIsRecorded)
{
    const auto c = parse_config("study = penalty\nscheme = both\nk = 1\nn = 2\ndt = h\nalpha0 = 0.1\n");
    const auto result = run_study(c);
    ASSERT_EQ(result.rows.size(), 2u);
    for (const auto& r : result.rows) {
        EXPECT_TRUE(r.breakdown);
        EXPECT_TRUE(std::isnan(r.errors.u.l2));
        EXPECT_NE(r.message.find("(alpha0=0.1, n=2, k=1)"), std::string::npos) << r.message;
        EXPECT_NE(r.message.find("n=2, k=1)"), std::string::npos) << r.message;
    }
    EXPECT_NE(csv_of(result).find(",nan,"), std::string::npos);

    auto single = c;
    single.study = StudyKind::Single;
    try {
        (void)run_study(single);
        FAIL() << "expected SolverError";
    } catch (const SolverError& e) {
        EXPECT_NE(std::string(e.what()).find("n=2, k=1)"), std::string::npos);
    }

    auto lu = c;
    lu.solver = SolverMethod::LU;
    for (const auto& r : run_study(lu).rows) {
        EXPECT_FALSE(r.breakdown);
        EXPECT_TRUE(std::isfinite(r.errors.u.l2));
    }
}

TEST(Study, StabilityReportsRunningMaxima)
{
    const auto c = parse_config("study = stability\nscheme = both\nk = 1\nn = 2\ndt = 1/4\nTs = 1, 2\n");
    const auto result = run_study(c);
    EXPECT_TRUE(result.rows.empty());
    ASSERT_EQ(result.stability.size(), 4u);
    for (std::size_t i = 0; i < 4; i += 2) {
        EXPECT_EQ(result.stability[i].T, 1.0);
        EXPECT_EQ(result.stability[i + 1].T, 2.0);
        EXPECT_GT(result.stability[i].max_energy, 0.0);
        EXPECT_GE(result.stability[i + 1].max_energy, result.stability[i].max_energy);
    }
    const std::string csv = csv_of(result);
    EXPECT_EQ(csv.rfind("scheme,k,n,h,dt,T,max_energy,ratio_to_first\n", 0), 0u);
    // Ratio column: 1 on the first horizon of each group.
    const auto second_line = csv.substr(csv.find('\n') + 1);
    EXPECT_EQ(second_line.substr(second_line.find('\n') - 2, 2), ",1");
}
