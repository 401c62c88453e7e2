#include "viscodg/study.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "viscodg/manufactured.hpp"

namespace viscodg {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s)
{
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        s.remove_prefix(comma + 1);
    }
    return out;
}

double parse_plain(std::string_view text)
{
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

int parse_int(std::string_view text)
{
    text = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("not an integer: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<double> parse_numbers(std::string_view text)
{
    std::vector<double> out;
    for (auto item : split_list(text)) {
        out.push_back(parse_number(item));
    }
    return out;
}

std::vector<int> parse_ints(std::string_view text)
{
    std::vector<int> out;
    for (auto item : split_list(text)) {
        out.push_back(parse_int(item));
    }
    return out;
}

double mesh_h(int n) { return std::sqrt(2.0) / n; }

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::array<double, 6> error_columns(const ErrorReport& e)
{
    return {e.u.l2, e.u.h1, e.u.energy, e.w.l2, e.w.h1, e.w.energy};
}

ErrorReport nan_report(double t)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {{nan, nan, nan}, {nan, nan, nan}, t};
}

// Names the offending penalty and discretization in a solver failure.
std::string with_context(const std::string& what, const StudyConfig& config, int n, int k)
{
    char alpha[32];
    std::snprintf(alpha, sizeof alpha, "%g", config.penalty.alpha0);
    return what + " (alpha0=" + alpha + ", n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")";
}

// Assembled data shared by every run on one (n, k) pair.
struct Discretization {
    DGSpace space;
    AssembledSystem system;
    std::optional<InitialData> initial;
    std::unique_ptr<SeparableLoad> load;
    std::unique_ptr<ErrorEvaluator> evaluator;
};

InitialData initial_data(const StudyConfig& config, const ManufacturedCase& mc, Discretization& d)
{
    if (config.data == DataKind::Zero) {
        const std::vector<double> zero(d.space.total_dofs(), 0.0);
        return {zero, zero};
    }
    return project_initial_data(d.space, mc.material(), d.system, mc.displacement_at(0.0),
                                [&mc](const Vec2& x) { return mc.velocity(x, 0.0).value; }, config.solver);
}

}  // namespace

std::string_view study_name(StudyKind kind)
{
    switch (kind) {
    case StudyKind::Single: return "single";
    case StudyKind::HConvergence: return "hconv";
    case StudyKind::TConvergence: return "tconv";
    case StudyKind::Penalty: return "penalty";
    case StudyKind::Stability: return "stability";
    }
    return "unknown";
}

std::string_view data_name(DataKind kind)
{
    switch (kind) {
    case DataKind::Manufactured: return "manufactured";
    case DataKind::Zero: return "zero";
    case DataKind::Homogeneous: return "homogeneous";
    }
    return "unknown";
}

double parse_number(std::string_view text)
{
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return parse_plain(text);
    }
    const double num = parse_plain(text.substr(0, slash));
    const double den = parse_plain(text.substr(slash + 1));
    if (den == 0.0) {
        throw ConfigError("zero denominator in '" + std::string(text) + "'");
    }
    return num / den;
}

void StudyConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (schemes.empty()) {
        fail("no scheme selected");
    }
    if (degrees.empty() || ns.empty()) {
        fail("k and n lists must not be empty");
    }
    for (int k : degrees) {
        if (k < 1 || k > 6) {
            fail("k must lie in 1..6");
        }
    }
    for (int n : ns) {
        if (n < 1) {
            fail("n must be positive");
        }
    }
    if (!dt_equals_h && dts.empty()) {
        fail("no time step given");
    }
    for (double dt : dts) {
        if (!(dt > 0.0)) {
            fail("dt must be positive");
        }
    }
    if (!(T > 0.0)) {
        fail("T must be positive");
    }
    if (!(penalty.alpha0 > 0.0)) {
        fail("alpha0 must be positive");
    }
    if (!(penalty.beta0 >= 1.0)) {
        fail("beta0 must be at least 1");
    }
    try {
        (void)material();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (study == StudyKind::Stability) {
        if (data == DataKind::Manufactured) {
            fail("the stability study runs without loads; use data = homogeneous or zero");
        }
        if (stability_times.empty()) {
            fail("stability study needs at least one time in Ts");
        }
        for (std::size_t i = 0; i < stability_times.size(); ++i) {
            if (!(stability_times[i] > 0.0) || (i > 0 && !(stability_times[i] > stability_times[i - 1]))) {
                fail("Ts must be positive and increasing");
            }
        }
    }
    const std::vector<double> horizons = study == StudyKind::Stability ? stability_times : std::vector<double>{T};
    for (int n : ns) {
        for (double dt : time_steps(n)) {
            for (double t : horizons) {
                try {
                    (void)step_count(t, dt);
                } catch (const std::invalid_argument&) {
                    fail("T = " + format_double(t) + " is not a whole number of steps of dt = " + format_double(dt));
                }
            }
        }
    }
}

PronyMaterial StudyConfig::material() const
{
    if (elastic) {
        return PronyMaterial(rho, phi0, phis, taus, *elastic);
    }
    return PronyMaterial(rho, phi0, phis, taus);
}

std::vector<double> StudyConfig::time_steps(int n) const
{
    if (dt_equals_h) {
        return {1.0 / n};
    }
    return dts;
}

StudyConfig parse_config(std::string_view text)
{
    StudyConfig c;
    bool data_set = false;
    std::optional<double> lambda;
    std::optional<double> mu;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        try {
            if (key == "study") {
                static const std::map<std::string, StudyKind, std::less<>> kinds{
                    {"single", StudyKind::Single},       {"hconv", StudyKind::HConvergence},
                    {"tconv", StudyKind::TConvergence},  {"penalty", StudyKind::Penalty},
                    {"stability", StudyKind::Stability}};
                const auto it = kinds.find(value);
                if (it == kinds.end()) {
                    throw ConfigError("unknown study '" + std::string(value) + "'");
                }
                c.study = it->second;
            } else if (key == "scheme") {
                if (value == "displacement") {
                    c.schemes = {Scheme::Displacement};
                } else if (value == "velocity") {
                    c.schemes = {Scheme::Velocity};
                } else if (value == "both") {
                    c.schemes = {Scheme::Displacement, Scheme::Velocity};
                } else {
                    throw ConfigError("unknown scheme '" + std::string(value) + "'");
                }
            } else if (key == "k") {
                c.degrees = parse_ints(value);
            } else if (key == "n" || key == "ns") {
                c.ns = parse_ints(value);
            } else if (key == "dt" || key == "dts") {
                if (value == "h") {
                    c.dt_equals_h = true;
                    c.dts.clear();
                } else {
                    c.dt_equals_h = false;
                    c.dts = parse_numbers(value);
                }
            } else if (key == "T") {
                c.T = parse_number(value);
            } else if (key == "Ts") {
                c.stability_times = parse_numbers(value);
            } else if (key == "alpha0") {
                c.penalty.alpha0 = parse_number(value);
            } else if (key == "beta0") {
                c.penalty.beta0 = parse_number(value);
            } else if (key == "rho") {
                c.rho = parse_number(value);
            } else if (key == "phi0") {
                c.phi0 = parse_number(value);
            } else if (key == "phis") {
                c.phis = value.empty() ? std::vector<double>{} : parse_numbers(value);
            } else if (key == "taus") {
                c.taus = value.empty() ? std::vector<double>{} : parse_numbers(value);
            } else if (key == "lambda") {
                lambda = parse_number(value);
            } else if (key == "mu") {
                mu = parse_number(value);
            } else if (key == "data") {
                if (value == "manufactured") {
                    c.data = DataKind::Manufactured;
                } else if (value == "zero") {
                    c.data = DataKind::Zero;
                } else if (value == "homogeneous") {
                    c.data = DataKind::Homogeneous;
                } else {
                    throw ConfigError("unknown data '" + std::string(value) + "'");
                }
                data_set = true;
            } else if (key == "solver") {
                if (value == "cholesky") {
                    c.solver = SolverMethod::Cholesky;
                } else if (value == "lu") {
                    c.solver = SolverMethod::LU;
                } else if (value == "cg") {
                    c.solver = SolverMethod::ConjugateGradient;
                } else {
                    throw ConfigError("unknown solver '" + std::string(value) + "'");
                }
            } else if (key == "output") {
                c.output = std::string(value);
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (lambda.has_value() != mu.has_value()) {
        throw ConfigError("lambda and mu must be given together");
    }
    if (lambda) {
        c.elastic = IsotropicElastic{*lambda, *mu};
    }
    if (c.study == StudyKind::Stability && !data_set) {
        c.data = DataKind::Homogeneous;
    }
    c.validate();
    return c;
}

StudyResult run_study(const StudyConfig& config, std::ostream* log)
{
    config.validate();
    const ManufacturedCase mc(config.material());
    const PronyMaterial& material = mc.material();
    StudyResult result;
    result.study = config.study;
    result.dt_equals_h = config.dt_equals_h;
    const bool stability = config.study == StudyKind::Stability;
    const bool with_loads = config.data == DataKind::Manufactured;
    const double horizon = stability ? config.stability_times.back() : config.T;

    for (int k : config.degrees) {
        for (int n : config.ns) {
            Discretization d{DGSpace(build_structured_mesh(n), k), {}, std::nullopt, nullptr, nullptr};
            d.system = assemble_system(d.space, material, config.penalty);
            if (with_loads) {
                d.load = std::make_unique<SeparableLoad>(d.space, mc.load_terms());
            }
            d.evaluator = std::make_unique<ErrorEvaluator>(d.space, material, config.penalty);
            std::string init_failure;
            try {
                d.initial = initial_data(config, mc, d);
            } catch (const SolverError& e) {
                if (config.study != StudyKind::Penalty) {
                    throw SolverError(with_context(e.what(), config, n, k));
                }
                init_failure = e.what();
            }
            for (double dt : config.time_steps(n)) {
                for (Scheme scheme : config.schemes) {
                    if (log) {
                        *log << "running " << scheme_name(scheme) << " k=" << k << " n=" << n
                             << " dt=" << format_double(dt) << std::endl;
                    }
                    StudyRow row{scheme, k, n, mesh_h(n), dt, {}, false, {}};
                    const std::size_t steps = step_count(horizon, dt);
                    try {
                        if (!init_failure.empty()) {
                            throw SolverError(init_failure);
                        }
                        const TimeStepper stepper(scheme, d.system, material, dt, config.solver);
                        const State s0 = initial_state(scheme, *d.initial, material.num_terms());
                        LoadFunction load;
                        if (d.load) {
                            load = [&d](double t) { return (*d.load)(t); };
                        }
                        if (stability) {
                            std::vector<double> maxima(config.stability_times.size(), 0.0);
                            const double e0 = discrete_energy(d.system, s0);
                            std::fill(maxima.begin(), maxima.end(), e0);
                            (void)stepper.run(s0, load, steps, [&](const State& s) {
                                const double e = discrete_energy(d.system, s);
                                for (std::size_t i = 0; i < maxima.size(); ++i) {
                                    if (s.t <= config.stability_times[i] * (1.0 + 1e-12)) {
                                        maxima[i] = std::max(maxima[i], e);
                                    }
                                }
                            });
                            for (std::size_t i = 0; i < maxima.size(); ++i) {
                                result.stability.push_back(
                                    {scheme, k, n, mesh_h(n), dt, config.stability_times[i], maxima[i]});
                            }
                            continue;
                        }
                        const State fin = stepper.run(s0, load, steps);
                        row.errors.t = fin.t;
                        row.errors.u = d.evaluator->evaluate(fin.U, mc.displacement_at(fin.t));
                        row.errors.w = d.evaluator->evaluate(fin.W, mc.velocity_at(fin.t));
                        for (double v : error_columns(row.errors)) {
                            if (!std::isfinite(v)) {
                                throw SolverError("non-finite error norm");
                            }
                        }
                    } catch (const SolverError& e) {
                        if (config.study != StudyKind::Penalty) {
                            throw SolverError(with_context(e.what(), config, n, k));
                        }
                        row.breakdown = true;
                        row.errors = nan_report(horizon);
                        row.message = with_context(e.what(), config, n, k);
                        if (log) {
                            *log << "breakdown: " << row.message << std::endl;
                        }
                    }
                    if (!stability) {
                        result.rows.push_back(std::move(row));
                    }
                }
            }
        }
    }

    // Order rows so that each rate group is contiguous.
    auto scheme_rank = [&](Scheme s) {
        return std::find(config.schemes.begin(), config.schemes.end(), s) - config.schemes.begin();
    };
    auto dt_rank = [](double dt) { return -dt; };
    std::stable_sort(result.rows.begin(), result.rows.end(), [&](const StudyRow& a, const StudyRow& b) {
        const auto ka = std::make_tuple(scheme_rank(a.scheme), a.k);
        const auto kb = std::make_tuple(scheme_rank(b.scheme), b.k);
        if (ka != kb) {
            return ka < kb;
        }
        if (config.study == StudyKind::TConvergence) {
            return std::make_tuple(a.n, dt_rank(a.dt)) < std::make_tuple(b.n, dt_rank(b.dt));
        }
        if (config.dt_equals_h) {
            return a.n < b.n;
        }
        return std::make_tuple(dt_rank(a.dt), a.n) < std::make_tuple(dt_rank(b.dt), b.n);
    });
    std::stable_sort(result.stability.begin(), result.stability.end(), [&](const StabilityRow& a, const StabilityRow& b) {
        return scheme_rank(a.scheme) < scheme_rank(b.scheme);
    });
    return result;
}

std::vector<std::optional<std::array<double, 6>>> row_rates(const StudyResult& result)
{
    std::vector<std::optional<std::array<double, 6>>> rates(result.rows.size());
    const bool spatial = result.study == StudyKind::HConvergence || result.study == StudyKind::Penalty;
    const bool temporal = result.study == StudyKind::TConvergence;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        const StudyRow& a = result.rows[i - 1];
        const StudyRow& b = result.rows[i];
        if (a.scheme != b.scheme || a.k != b.k || a.breakdown || b.breakdown) {
            continue;
        }
        double sa = 0.0;
        double sb = 0.0;
        if (spatial && a.n != b.n && (result.dt_equals_h || a.dt == b.dt)) {
            sa = a.h;
            sb = b.h;
        } else if (temporal && a.n == b.n && a.dt != b.dt) {
            sa = a.dt;
            sb = b.dt;
        } else {
            continue;
        }
        const auto ea = error_columns(a.errors);
        const auto eb = error_columns(b.errors);
        std::array<double, 6> r{};
        bool ok = true;
        for (std::size_t c = 0; c < 6; ++c) {
            if (!(ea[c] > 0.0) || !(eb[c] > 0.0)) {
                ok = false;
                break;
            }
            r[c] = convergence_rate(ea[c], eb[c], sa, sb);
        }
        if (ok) {
            rates[i] = r;
        }
    }
    return rates;
}

void write_csv(std::ostream& out, const StudyResult& result)
{
    if (result.study == StudyKind::Stability) {
        out << "scheme,k,n,h,dt,T,max_energy,ratio_to_first\n";
        for (std::size_t i = 0; i < result.stability.size(); ++i) {
            const auto& r = result.stability[i];
            // First entry of the same (scheme, k, n, dt) group.
            std::size_t first = i;
            while (first > 0) {
                const auto& p = result.stability[first - 1];
                if (p.scheme != r.scheme || p.k != r.k || p.n != r.n || p.dt != r.dt) {
                    break;
                }
                --first;
            }
            out << scheme_name(r.scheme) << ',' << r.k << ',' << r.n << ',' << format_double(r.h) << ','
                << format_double(r.dt) << ',' << format_double(r.T) << ',' << format_double(r.max_energy) << ','
                << format_double(r.max_energy / result.stability[first].max_energy) << '\n';
        }
        return;
    }
    out << "scheme,k,n,h,dt,err_u_L2,err_u_H1,err_u_energy,err_w_L2,err_w_H1,err_w_energy,"
           "rate_u_L2,rate_u_H1,rate_u_energy,rate_w_L2,rate_w_H1,rate_w_energy\n";
    const auto rates = row_rates(result);
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& r = result.rows[i];
        out << scheme_name(r.scheme) << ',' << r.k << ',' << r.n << ',' << format_double(r.h) << ','
            << format_double(r.dt);
        for (double v : error_columns(r.errors)) {
            out << ',' << format_double(v);
        }
        for (std::size_t c = 0; c < 6; ++c) {
            out << ',';
            if (rates[i]) {
                out << format_double((*rates[i])[c]);
            }
        }
        out << '\n';
    }
}

void write_rate_table(std::ostream& out, const StudyResult& result)
{
    char buf[256];
    if (result.study == StudyKind::Stability) {
        out << "scheme        k    n          dt        T   max energy\n";
        for (const auto& r : result.stability) {
            std::snprintf(buf, sizeof buf, "%-12s %2d %4d %11.4e %8.3g %12.6e\n", std::string(scheme_name(r.scheme)).c_str(),
                          r.k, r.n, r.dt, r.T, r.max_energy);
            out << buf;
        }
        return;
    }
    const auto rates = row_rates(result);
    out << "scheme        k    n          dt   |e|_L2 (rate)        |e|_H1 (rate)        |w-W|_L2 (rate)      "
           "|w-W|_H1 (rate)\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& r = result.rows[i];
        const auto e = error_columns(r.errors);
        auto cell = [&](std::size_t c) {
            char s[64];
            if (rates[i]) {
                std::snprintf(s, sizeof s, "%10.3e (%5.2f)", e[c], (*rates[i])[c]);
            } else {
                std::snprintf(s, sizeof s, "%10.3e        ", e[c]);
            }
            return std::string(s);
        };
        std::snprintf(buf, sizeof buf, "%-12s %2d %4d %11.4e   %s   %s   %s   %s", std::string(scheme_name(r.scheme)).c_str(),
                      r.k, r.n, r.dt, cell(0).c_str(), cell(1).c_str(), cell(3).c_str(), cell(4).c_str());
        out << buf;
        if (r.breakdown) {
            out << "   breakdown: " << r.message;
        }
        out << '\n';
    }
}

}  // namespace viscodg
