// Command-line front end for the swap-engine statistics library.
//
// Subcommands: moments, sweep, pdist, charfn, mc-validate, tur-scan,
// max-work, finite-time. Every subcommand is deterministic given its
// options plus --seed, prints CSV (default) or JSON, and exits with
// 0 = success, 1 = validation failure (mc-validate z-score breach),
// 2 = bad input.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qoswap/analysis.hpp"
#include "qoswap/engine.hpp"
#include "qoswap/finite_time.hpp"
#include "qoswap/spectral.hpp"
#include "qoswap/tpm.hpp"

namespace {

using ojson = nlohmann::ordered_json;
using qoswap::EngineParams;

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Formatting helpers
// ---------------------------------------------------------------------------

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_cell(const ojson& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return fmt17(v.get<double>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_string()) return csv_escape(v.get<std::string>());
    return csv_escape(v.dump());
}

std::string csv_line(const ojson& row) {
    std::string line;
    bool first = true;
    for (const auto& item : row.items()) {
        if (!first) line += ',';
        first = false;
        line += csv_cell(item.value());
    }
    return line;
}

std::string csv_header(const ojson& row) {
    std::string line;
    bool first = true;
    for (const auto& item : row.items()) {
        if (!first) line += ',';
        first = false;
        line += csv_escape(item.key());
    }
    return line;
}

// Full report: config echo + rows + summary. CSV prints the row table only;
// JSON prints the whole object.
struct Report {
    ojson config = ojson::object();
    std::vector<ojson> rows;
    ojson summary = ojson::object();
};

void write_report(const Report& rep, const std::string& format, std::ostream& os) {
    if (format == "json") {
        ojson doc = ojson::object();
        doc["config"] = rep.config;
        doc["rows"] = ojson::array();
        for (const auto& r : rep.rows) doc["rows"].push_back(r);
        doc["summary"] = rep.summary;
        os << doc.dump(2) << '\n';
        return;
    }
    if (rep.rows.empty()) return;
    os << csv_header(rep.rows.front()) << '\n';
    for (const auto& r : rep.rows) os << csv_line(r) << '\n';
}

// ---------------------------------------------------------------------------
// Axis / list parsing
// ---------------------------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream iss(s);
    while (std::getline(iss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": not a number: '" + s + "'");
    }
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": not an integer: '" + s + "'");
    }
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& tok : split(s, ','))
        out.push_back(parse_double(tok, what));
    if (out.empty()) throw std::invalid_argument(what + ": empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
    std::vector<int> out;
    for (const auto& tok : split(s, ','))
        out.push_back(parse_int(tok, what));
    if (out.empty()) throw std::invalid_argument(what + ": empty list");
    return out;
}

// "min:max:points[:lin|log]". points >= 1; points >= 2 requires min < max;
// log scale requires positive endpoints.
struct AxisSpec {
    double min = 0;
    double max = 0;
    int points = 1;
    bool log_scale = false;

    double at(int i) const {
        if (points == 1) return min;
        double t = static_cast<double>(i) / (points - 1);
        return log_scale ? min * std::pow(max / min, t) : min + (max - min) * t;
    }
};

AxisSpec parse_axis(const std::string& spec, const std::string& what,
                    int min_points) {
    auto parts = split(spec, ':');
    if (parts.size() != 3 && parts.size() != 4)
        throw std::invalid_argument(what + ": expected min:max:points[:lin|log], got '" +
                                    spec + "'");
    AxisSpec ax;
    ax.min = parse_double(parts[0], what + " min");
    ax.max = parse_double(parts[1], what + " max");
    ax.points = parse_int(parts[2], what + " points");
    if (parts.size() == 4) {
        if (parts[3] == "log") ax.log_scale = true;
        else if (parts[3] == "lin") ax.log_scale = false;
        else throw std::invalid_argument(what + ": scale must be lin or log, got '" +
                                         parts[3] + "'");
    }
    if (ax.points < min_points)
        throw std::invalid_argument(what + ": points must be >= " +
                                    std::to_string(min_points));
    if (ax.points == 1) {
        if (ax.min != ax.max)
            throw std::invalid_argument(what + ": a single-point axis needs min == max");
    } else if (!(ax.min < ax.max)) {
        throw std::invalid_argument(what + ": min must be strictly below max");
    }
    if (ax.log_scale && !(ax.min > 0.0))
        throw std::invalid_argument(what + ": log scale needs positive endpoints");
    return ax;
}

// "var:min:max:points[:lin|log]" for parameter sweeps.
struct SweepAxis {
    std::string var;
    AxisSpec axis;
};

const std::vector<std::string>& sweepable_vars() {
    static const std::vector<std::string> vars = {
        "omega-a", "omega-b", "beta-a", "beta-b", "theta", "theta-pi"};
    return vars;
}

SweepAxis parse_sweep_axis(const std::string& spec, const std::string& what) {
    auto pos = spec.find(':');
    if (pos == std::string::npos)
        throw std::invalid_argument(what +
                                    ": expected var:min:max:points[:lin|log], got '" +
                                    spec + "'");
    SweepAxis sa;
    sa.var = spec.substr(0, pos);
    const auto& vars = sweepable_vars();
    if (std::find(vars.begin(), vars.end(), sa.var) == vars.end()) {
        std::string known;
        for (const auto& v : vars) known += (known.empty() ? "" : ", ") + v;
        throw std::invalid_argument(what + ": unknown sweep variable '" + sa.var +
                                    "' (known: " + known + ")");
    }
    sa.axis = parse_axis(spec.substr(pos + 1), what, 2);
    return sa;
}

void apply_sweep_var(EngineParams& p, const std::string& var, double value) {
    if (var == "omega-a") p.omega_a = value;
    else if (var == "omega-b") p.omega_b = value;
    else if (var == "beta-a") p.beta_a = value;
    else if (var == "beta-b") p.beta_b = value;
    else if (var == "theta") p.theta = value;
    else if (var == "theta-pi") p.theta = value * kPi;
}

// ---------------------------------------------------------------------------
// Deterministic worker pool: fn(i) must only touch slot i of preallocated
// storage; rows are emitted in index order afterwards.
// ---------------------------------------------------------------------------

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto body = [&]() {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Shared option blocks
// ---------------------------------------------------------------------------

struct CommonOpts {
    std::string format = "csv";
    std::string output = "-";
    int jobs = 1;
    std::string config_path;
};

void add_common_opts(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("-o,--output", c.output, "Output path ('-' = stdout)")
        ->capture_default_str();
    sub->add_option("--jobs", c.jobs, "Worker threads")
        ->envname("QO_JOBS")
        ->check(CLI::Range(1, 4096))
        ->capture_default_str();
    sub->add_option("--config", c.config_path,
                    "Read options from a 'key = value' file (# comments); "
                    "command-line flags override file values");
}

// ---------------------------------------------------------------------------
// Config-file preprocessing. A config file is a flat UTF-8 document of
// 'key = value' lines with '#' comments, the keys being the subcommand's
// long option names. It is expanded into '--key=value' tokens appended
// after the real command line; keys already given as flags are dropped,
// so flags override the file. Options that alias the same parameter
// (e.g. theta and theta-pi) count as one key for that rule.
// ---------------------------------------------------------------------------

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Alias groups: giving any member on the command line overrides all of them.
std::string alias_group(const std::string& key) {
    static const std::vector<std::vector<std::string>> groups = {
        {"theta", "theta-pi", "theta-pi-list"},
        {"tau", "tau-q"},
        {"tau-w", "tau-w-list"},
        {"ratio", "ratio-list"},
        {"ref-theta", "ref-theta-pi"},
    };
    for (const auto& g : groups)
        for (const auto& name : g)
            if (name == key) return g.front();
    return key;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> items;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                                  (value.front() == '\'' && value.back() == '\'')))
            value = value.substr(1, value.size() - 2);
        if (key.empty())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
        if (key == "config")
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": config files cannot nest");
        items.emplace_back(key, value);
    }
    return items;
}

// Expands --config FILE into option tokens. args is the raw command line
// after the program name; the first token must be the subcommand.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string config_path;
    for (size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw std::invalid_argument("--config needs a file argument");
            config_path = args[i + 1];
            ++i;
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        }
    }
    if (config_path.empty()) return args;

    std::vector<std::string> given;
    for (size_t i = 1; i < args.size(); ++i) {
        const std::string& t = args[i];
        if (t.rfind("--", 0) == 0) {
            auto eq = t.find('=');
            given.push_back(alias_group(t.substr(2, eq == std::string::npos
                                                        ? std::string::npos
                                                        : eq - 2)));
        } else if (t == "-o") {
            given.push_back("output");
        } else if (t == "-n") {
            given.push_back("count");
        }
    }

    std::vector<std::string> out = args;
    for (const auto& [key, value] : read_config_file(config_path)) {
        if (std::find(given.begin(), given.end(), alias_group(key)) != given.end())
            continue;
        given.push_back(alias_group(key));
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

struct EngineOpts {
    int d = 2;
    double omega_a = 1.0;
    double omega_b = 1.0;
    double beta_a = 1.0;
    double beta_b = 1.0;
    double theta = kPi / 2;
    double theta_pi = 0.5;
    CLI::Option* theta_opt = nullptr;
    CLI::Option* theta_pi_opt = nullptr;

    EngineParams params() const {
        EngineParams p;
        p.d = d;
        p.omega_a = omega_a;
        p.omega_b = omega_b;
        p.beta_a = beta_a;
        p.beta_b = beta_b;
        p.theta = theta_pi_opt->count() ? theta_pi * kPi : theta;
        return p;
    }

    // Config echo with keys matching the option names, so the JSON block can
    // be written back out as a config file.
    void echo(ojson& cfg) const {
        cfg["d"] = d;
        cfg["omega-a"] = omega_a;
        cfg["omega-b"] = omega_b;
        cfg["beta-a"] = beta_a;
        cfg["beta-b"] = beta_b;
        if (theta_pi_opt->count()) cfg["theta-pi"] = theta_pi;
        else cfg["theta"] = theta;
    }
};

void add_engine_opts(CLI::App* sub, EngineOpts& e) {
    sub->add_option("--d", e.d, "Number of levels per qudit (>= 2)")
        ->capture_default_str();
    sub->add_option("--omega-a", e.omega_a, "Hot-side level spacing")
        ->capture_default_str();
    sub->add_option("--omega-b", e.omega_b, "Cold-side level spacing")
        ->capture_default_str();
    sub->add_option("--beta-a", e.beta_a, "Hot-bath inverse temperature")
        ->capture_default_str();
    sub->add_option("--beta-b", e.beta_b, "Cold-bath inverse temperature")
        ->capture_default_str();
    e.theta_opt = sub->add_option("--theta", e.theta, "Swap angle in radians")
                      ->capture_default_str();
    e.theta_pi_opt =
        sub->add_option("--theta-pi", e.theta_pi,
                        "Swap angle as a fraction of pi (0.5 means pi/2)");
    e.theta_opt->excludes(e.theta_pi_opt);
    e.theta_pi_opt->excludes(e.theta_opt);
}

void echo_common(ojson& cfg, const CommonOpts& c) {
    cfg["format"] = c.format;
    cfg["jobs"] = c.jobs;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

ojson nan_or(double v) {
    // nlohmann serializes NaN/inf as null; keep that for JSON, CSV prints
    // "nan"/"inf" via fmt17. Rows store doubles directly.
    return v;
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

struct MomentsCmd {
    CommonOpts common;
    EngineOpts engine;

    int run() const {
        EngineParams p = engine.params();
        qoswap::MomentSet m = qoswap::moments(p);

        ojson row = ojson::object();
        row["regime"] = qoswap::to_string(m.regime);
        row["mean_w"] = m.mean_w;
        row["mean_qh"] = m.mean_qh;
        row["mean_qc"] = m.mean_qc;
        row["second_w"] = m.second_w;
        row["second_qh"] = m.second_qh;
        row["var_w"] = m.var_w;
        row["var_qh"] = m.var_qh;
        row["cov_w_qh"] = m.cov_w_qh;
        row["entropy_production"] = m.entropy_production;

        qoswap::EfficiencyResult eta = qoswap::otto_efficiency(p);
        row["eta"] = eta.value;
        row["eta_regime_ok"] = eta.regime_ok;
        if (p.omega_a != p.omega_b) {
            qoswap::EfficiencyResult cop = qoswap::otto_cop(p);
            row["cop"] = cop.value;
            row["cop_regime_ok"] = cop.regime_ok;
        } else {
            row["cop"] = nullptr;
            row["cop_regime_ok"] = false;
        }
        row["eta_carnot"] = qoswap::carnot_efficiency(p);
        row["eta_ca"] = qoswap::curzon_ahlborn_efficiency(p);

        bool tur_defined = true;
        qoswap::analysis::TurCheck tc;
        try {
            tc = qoswap::analysis::tur_bound_check(p);
        } catch (const std::domain_error&) {
            tur_defined = false;
        }
        row["tur_defined"] = tur_defined;
        if (tur_defined) {
            row["tur_lhs"] = tc.lhs;
            row["tur_rhs_bound"] = tc.rhs_bound;
            row["tur_rhs_standard"] = tc.rhs_standard;
            row["tur_ratio"] = tc.ratio;
            row["tur_bound_ok"] = tc.bound_ok;
            row["tur_standard_violated"] = tc.standard_violated;
        } else {
            row["tur_lhs"] = nullptr;
            row["tur_rhs_bound"] = nullptr;
            row["tur_rhs_standard"] = nullptr;
            row["tur_ratio"] = nullptr;
            row["tur_bound_ok"] = true;
            row["tur_standard_violated"] = false;
        }

        Report rep;
        rep.config["subcommand"] = "moments";
        engine.echo(rep.config);
        echo_common(rep.config, common);
        rep.rows.push_back(std::move(row));
        rep.summary["first_law_residual"] = m.mean_w + m.mean_qh + m.mean_qc;
        rep.summary["hot_cold_convention_ok"] = p.hot_cold_convention_ok();
        rep.summary["swap_weight"] = p.swap_weight();
        rep.summary["x_a"] = p.xa();
        rep.summary["x_b"] = p.xb();

        std::ofstream file;
        write_report(rep, common.format, open_output(common.output, file));
        return 0;
    }
};

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepCmd {
    CommonOpts common;
    EngineOpts engine;
    std::string sweep_spec;
    std::string sweep2_spec;
    std::string d_list_spec;
    CLI::Option* sweep2_opt = nullptr;
    CLI::Option* d_list_opt = nullptr;

    int run() const {
        SweepAxis ax1 = parse_sweep_axis(sweep_spec, "--sweep");
        bool have2 = sweep2_opt->count() > 0;
        SweepAxis ax2;
        if (have2) {
            ax2 = parse_sweep_axis(sweep2_spec, "--sweep2");
            // theta and theta-pi alias the same parameter.
            auto base = [](const std::string& v) {
                return v == "theta-pi" ? std::string("theta") : v;
            };
            if (base(ax1.var) == base(ax2.var))
                throw std::invalid_argument("--sweep and --sweep2 reference the same parameter '" +
                                            ax1.var + "'");
        }
        std::vector<int> d_values = d_list_opt->count()
                                        ? parse_int_list(d_list_spec, "--d-list")
                                        : std::vector<int>{engine.d};

        EngineParams base = engine.params();
        std::size_t n1 = static_cast<std::size_t>(ax1.axis.points);
        std::size_t n2 = have2 ? static_cast<std::size_t>(ax2.axis.points) : 1;
        std::size_t total = d_values.size() * n1 * n2;
        std::vector<ojson> rows(total);

        parallel_for(total, common.jobs, [&](std::size_t idx) {
            std::size_t per_d = n1 * n2;
            std::size_t di = idx / per_d;
            std::size_t rem = idx % per_d;
            int i1 = static_cast<int>(rem / n2);
            int i2 = static_cast<int>(rem % n2);

            EngineParams p = base;
            p.d = d_values[di];
            apply_sweep_var(p, ax1.var, ax1.axis.at(i1));
            if (have2) apply_sweep_var(p, ax2.var, ax2.axis.at(i2));

            qoswap::MomentSet m = qoswap::moments(p);
            ojson row = ojson::object();
            row["d"] = p.d;
            row["omega_a"] = p.omega_a;
            row["omega_b"] = p.omega_b;
            row["beta_a"] = p.beta_a;
            row["beta_b"] = p.beta_b;
            row["theta"] = p.theta;
            row["mean_w"] = m.mean_w;
            row["mean_qh"] = m.mean_qh;
            row["mean_qc"] = m.mean_qc;
            row["second_w"] = m.second_w;
            row["second_qh"] = m.second_qh;
            row["var_w"] = m.var_w;
            row["var_qh"] = m.var_qh;
            row["cov_w_qh"] = m.cov_w_qh;
            row["entropy_production"] = m.entropy_production;
            row["regime"] = qoswap::to_string(m.regime);
            bool tur_defined = true;
            double ratio = std::numeric_limits<double>::quiet_NaN();
            bool violated = false;
            try {
                qoswap::analysis::TurCheck tc = qoswap::analysis::tur_bound_check(p);
                ratio = tc.ratio;
                violated = tc.standard_violated;
            } catch (const std::domain_error&) {
                tur_defined = false;
            }
            row["tur_defined"] = tur_defined;
            row["tur_ratio"] = nan_or(ratio);
            row["tur_standard_violated"] = violated;
            rows[idx] = std::move(row);
        });

        Report rep;
        rep.config["subcommand"] = "sweep";
        engine.echo(rep.config);
        rep.config["sweep"] = sweep_spec;
        if (have2) rep.config["sweep2"] = sweep2_spec;
        if (d_list_opt->count()) rep.config["d-list"] = d_list_spec;
        echo_common(rep.config, common);
        rep.rows = std::move(rows);
        rep.summary["rows"] = total;
        rep.summary["d_values"] = d_values;

        std::ofstream file;
        write_report(rep, common.format, open_output(common.output, file));
        return 0;
    }
};

// ---------------------------------------------------------------------------
// pdist
// ---------------------------------------------------------------------------

struct PdistCmd {
    CommonOpts common;
    EngineOpts engine;
    std::string theta_pi_list_spec;
    double floor = 1e-300;
    CLI::Option* theta_pi_list_opt = nullptr;

    int run() const {
        std::vector<double> thetas;
        if (theta_pi_list_opt->count()) {
            for (double f : parse_double_list(theta_pi_list_spec, "--theta-pi-list"))
                thetas.push_back(f * kPi);
        } else {
            thetas.push_back(engine.params().theta);
        }

        Report rep;
        rep.config["subcommand"] = "pdist";
        engine.echo(rep.config);
        if (theta_pi_list_opt->count()) {
            rep.config.erase("theta");
            rep.config.erase("theta-pi");
            rep.config["theta-pi-list"] = theta_pi_list_spec;
        }
        rep.config["floor"] = floor;
        echo_common(rep.config, common);

        ojson totals = ojson::array();
        double max_ft_residual = 0.0;
        for (double theta : thetas) {
            EngineParams p = engine.params();
            p.theta = theta;
            qoswap::spectral::WorkHeatDistribution dist =
                qoswap::spectral::joint_distribution(p);
            double gap_x = p.xb() - p.xa();
            for (int n = dist.min_n(); n <= dist.max_n(); ++n) {
                double prob = dist.prob(n);
                if (prob == 0.0) continue;
                ojson row = ojson::object();
                row["theta"] = theta;
                row["n"] = n;
                row["work"] = dist.work(n);
                row["heat_hot"] = dist.heat_hot(n);
                row["heat_cold"] = dist.heat_cold(n);
                row["probability"] = prob;
                double pm = dist.prob(-n);
                if (n != 0 && prob > floor && pm > floor) {
                    double log_ratio = std::log(prob / pm);
                    row["ft_log_ratio"] = log_ratio;
                    double residual = log_ratio - gap_x * n;
                    row["ft_residual"] = residual;
                    max_ft_residual = std::max(max_ft_residual, std::abs(residual));
                } else if (n == 0) {
                    row["ft_log_ratio"] = 0.0;
                    row["ft_residual"] = 0.0;
                } else {
                    row["ft_log_ratio"] = nullptr;
                    row["ft_residual"] = nullptr;
                }
                rep.rows.push_back(std::move(row));
            }
            double total = dist.total();
            ojson footer = ojson::object();
            footer["theta"] = theta;
            footer["n"] = "TOTAL";
            footer["work"] = nullptr;
            footer["heat_hot"] = nullptr;
            footer["heat_cold"] = nullptr;
            footer["probability"] = total;
            footer["ft_log_ratio"] = nullptr;
            footer["ft_residual"] = nullptr;
            rep.rows.push_back(std::move(footer));
            ojson t = ojson::object();
            t["theta"] = theta;
            t["total_probability"] = total;
            totals.push_back(std::move(t));
        }
        rep.summary["totals"] = totals;
        rep.summary["max_abs_ft_residual"] = max_ft_residual;

        std::ofstream file;
        write_report(rep, common.format, open_output(common.output, file));
        return 0;
    }
};

// ---------------------------------------------------------------------------
// charfn
// ---------------------------------------------------------------------------

struct CharfnCmd {
    CommonOpts common;
    EngineOpts engine;
    std::string lambda_spec = "0:0:1";
    std::string mu_spec = "0:0:1";

    int run() const {
        AxisSpec la = parse_axis(lambda_spec, "--lambda", 1);
        AxisSpec mu = parse_axis(mu_spec, "--mu", 1);
        EngineParams p = engine.params();
        p.validate();

        Report rep;
        rep.config["subcommand"] = "charfn";
        engine.echo(rep.config);
        rep.config["lambda"] = lambda_spec;
        rep.config["mu"] = mu_spec;
        echo_common(rep.config, common);

        std::size_t total = static_cast<std::size_t>(la.points) *
                            static_cast<std::size_t>(mu.points);
        std::vector<ojson> rows(total);
        parallel_for(total, common.jobs, [&](std::size_t idx) {
            int i = static_cast<int>(idx / static_cast<std::size_t>(mu.points));
            int j = static_cast<int>(idx % static_cast<std::size_t>(mu.points));
            double lv = la.at(i);
            double mv = mu.at(j);
            std::complex<double> chi =
                qoswap::spectral::characteristic_function(p, lv, mv);
            ojson row = ojson::object();
            row["lambda"] = lv;
            row["mu"] = mv;
            row["chi_re"] = chi.real();
            row["chi_im"] = chi.imag();
            row["chi_abs"] = std::abs(chi);
            rows[idx] = std::move(row);
        });
        rep.rows = std::move(rows);

        std::complex<double> chi00 =
            qoswap::spectral::characteristic_function(p, 0.0, 0.0);
        std::complex<double> chi_ft = qoswap::spectral::characteristic_function(
            p, std::complex<double>(0.0, p.beta_b),
            std::complex<double>(0.0, p.beta_b - p.beta_a));
        rep.summary["chi00_re"] = chi00.real();
        rep.summary["chi00_im"] = chi00.imag();
        rep.summary["ft_identity_residual"] = std::abs(chi_ft - 1.0);

        std::ofstream file;
        write_report(rep, common.format, open_output(common.output, file));
        return 0;
    }
};

// ---------------------------------------------------------------------------
// mc-validate
// ---------------------------------------------------------------------------

struct McValidateCmd {
    CommonOpts common;
    EngineOpts engine;
    EngineOpts ref;  // closed-form reference; defaults to the sample params
    std::uint64_t count = 1000000;
    std::uint64_t seed = 1;
    double z_max = 5.0;
    CLI::Option* ref_opts[6] = {nullptr, nullptr, nullptr, nullptr, nullptr, nullptr};

    EngineParams reference_params(const EngineParams& sample) const {
        EngineParams r = sample;
        if (ref_opts[0]->count()) r.d = ref.d;
        if (ref_opts[1]->count()) r.omega_a = ref.omega_a;
        if (ref_opts[2]->count()) r.omega_b = ref.omega_b;
        if (ref_opts[3]->count()) r.beta_a = ref.beta_a;
        if (ref_opts[4]->count()) r.beta_b = ref.beta_b;
        if (ref.theta_opt->count()) r.theta = ref.theta;
        if (ref.theta_pi_opt->count()) r.theta = ref.theta_pi * kPi;
        return r;
    }

    int run() const {
        if (count < 10000)
            throw std::invalid_argument("--count must be >= 10000 for meaningful z-scores");
        EngineParams p = engine.params();
        EngineParams r = reference_params(p);
        if (r.d != p.d)
            throw std::invalid_argument("--ref-d must match --d: the lattice sizes differ");

        qoswap::tpm::EmpiricalStats emp =
            qoswap::tpm::sample(p, count, seed, common.jobs);
        qoswap::spectral::WorkHeatDistribution exact =
            qoswap::spectral::joint_distribution(r);
        qoswap::MomentSet em = qoswap::moments(r);

        Report rep;
        rep.config["subcommand"] = "mc-validate";
        engine.echo(rep.config);
        rep.config["count"] = count;
        rep.config["seed"] = seed;
        rep.config["z-max"] = z_max;
        if (ref_opts[0]->count()) rep.config["ref-d"] = ref.d;
        if (ref_opts[1]->count()) rep.config["ref-omega-a"] = ref.omega_a;
        if (ref_opts[2]->count()) rep.config["ref-omega-b"] = ref.omega_b;
        if (ref_opts[3]->count()) rep.config["ref-beta-a"] = ref.beta_a;
        if (ref_opts[4]->count()) rep.config["ref-beta-b"] = ref.beta_b;
        if (ref.theta_opt->count()) rep.config["ref-theta"] = ref.theta;
        if (ref.theta_pi_opt->count()) rep.config["ref-theta-pi"] = ref.theta_pi;
        echo_common(rep.config, common);

        double max_abs_z = 0.0;
        for (int n = exact.min_n(); n <= exact.max_n(); ++n) {
            double pe = exact.prob(n);
            double ph = emp.prob(n);
            if (pe == 0.0 && ph == 0.0) continue;
            double se = std::sqrt(pe * (1.0 - pe) / static_cast<double>(count));
            double z;
            if (se > 0.0) z = (ph - pe) / se;
            else z = (ph == pe) ? 0.0 : std::numeric_limits<double>::infinity();
            max_abs_z = std::max(max_abs_z, std::abs(z));
            ojson row = ojson::object();
            row["n"] = n;
            row["p_exact"] = pe;
            row["p_mc"] = ph;
            row["se"] = se;
            row["z"] = z;
            row["exceeds"] = std::abs(z) > z_max;
            rep.rows.push_back(std::move(row));
        }

        auto moment_z = [&](double mc, double exact_v, double sem) {
            if (sem > 0.0) return (mc - exact_v) / sem;
            return mc == exact_v ? 0.0 : std::numeric_limits<double>::infinity();
        };
        double z_mean_w = moment_z(emp.mean_w, em.mean_w, emp.sem_w);
        double z_mean_qh = moment_z(emp.mean_qh, em.mean_qh, emp.sem_qh);
        double z_second_w = moment_z(emp.second_w, em.second_w, emp.sem_second_w);
        double z_jarzynski = moment_z(emp.jarzynski, 1.0, emp.sem_jarzynski);
        max_abs_z = std::max({max_abs_z, std::abs(z_mean_w), std::abs(z_mean_qh),
                              std::abs(z_second_w), std::abs(z_jarzynski)});
        bool pass = max_abs_z <= z_max;

        rep.summary["count"] = count;
        rep.summary["seed"] = seed;
        rep.summary["mean_w_mc"] = emp.mean_w;
        rep.summary["mean_w_exact"] = em.mean_w;
        rep.summary["sem_w"] = emp.sem_w;
        rep.summary["mean_qh_mc"] = emp.mean_qh;
        rep.summary["mean_qh_exact"] = em.mean_qh;
        rep.summary["sem_qh"] = emp.sem_qh;
        rep.summary["second_w_mc"] = emp.second_w;
        rep.summary["second_w_exact"] = em.second_w;
        rep.summary["sem_second_w"] = emp.sem_second_w;
        rep.summary["jarzynski"] = emp.jarzynski;
        rep.summary["sem_jarzynski"] = emp.sem_jarzynski;
        rep.summary["z_mean_w"] = z_mean_w;
        rep.summary["z_mean_qh"] = z_mean_qh;
        rep.summary["z_second_w"] = z_second_w;
        rep.summary["z_jarzynski"] = z_jarzynski;
        rep.summary["max_abs_z"] = max_abs_z;
        rep.summary["z_max"] = z_max;
        rep.summary["pass"] = pass;

        std::ofstream file;
        write_report(rep, common.format, open_output(common.output, file));
        if (!pass) {
            std::cerr << "mc-validate: FAIL: max |z| = " << fmt17(max_abs_z)
                      << " exceeds " << fmt17(z_max) << "\n";
            return 1;
        }
        return 0;
    }
};

// ---------------------------------------------------------------------------
// tur-scan
// ---------------------------------------------------------------------------

struct TurScanCmd {
    CommonOpts common;
    EngineOpts engine;
    std::string xa_spec = "1e-2:1e1:60:log";
    std::string xb_spec = "1e-2:1e1:60:log";
    std::string d_list_spec;
    std::string theta_pi_list_spec;
    CLI::Option* d_list_opt = nullptr;
    CLI::Option* theta_pi_list_opt = nullptr;

    int run() const {
        AxisSpec xa = parse_axis(xa_spec, "--xa", 1);
        AxisSpec xb = parse_axis(xb_spec, "--xb", 1);
        if (!(xa.min > 0.0) || !(xb.min > 0.0))
            throw std::invalid_argument("tur-scan: x axes must be positive (x = beta*omega)");
        std::vector<int> d_values = d_list_opt->count()
                                        ? parse_int_list(d_list_spec, "--d-list")
                                        : std::vector<int>{engine.d};
        std::vector<double> thetas;
        if (theta_pi_list_opt->count()) {
            for (double f : parse_double_list(theta_pi_list_spec, "--theta-pi-list"))
                thetas.push_back(f * kPi);
        } else {
            thetas.push_back(engine.params().theta);
        }

        qoswap::analysis::GridAxis ga{xa.min, xa.max, xa.points, xa.log_scale};
        qoswap::analysis::GridAxis gb{xb.min, xb.max, xb.points, xb.log_scale};

        Report rep;
        rep.config["subcommand"] = "tur-scan";
        engine.echo(rep.config);
        rep.config["xa"] = xa_spec;
        rep.config["xb"] = xb_spec;
        if (d_list_opt->count()) rep.config["d-list"] = d_list_spec;
        if (theta_pi_list_opt->count()) rep.config["theta-pi-list"] = theta_pi_list_spec;
        echo_common(rep.config, common);

        std::ofstream file;
        std::ostream& os = open_output(common.output, file);
        bool csv = common.format == "csv";
        bool header_written = false;

        long total_rows = 0;
        long violations = 0;
        double min_ratio = std::numeric_limits<double>::infinity();
        ojson argmin = ojson::object();

        for (int d : d_values) {
            for (double theta : thetas) {
                qoswap::analysis::tur_scan(
                    d, theta, ga, gb,
                    [&](const qoswap::analysis::TurScanRow& sr) {
                        ojson row = ojson::object();
                        row["d"] = d;
                        row["theta"] = theta;
                        row["x_a"] = sr.x_a;
                        row["x_b"] = sr.x_b;
                        double snr = std::numeric_limits<double>::quiet_NaN();
                        double entropy_half = std::numeric_limits<double>::quiet_NaN();
                        if (!sr.degenerate) {
                            // The scan quantities depend on the baths only
                            // through x = beta*omega; any frequency pair with
                            // omega_a != omega_b realizes them.
                            EngineParams p;
                            p.d = d;
                            p.theta = theta;
                            p.omega_a = 2.0;
                            p.omega_b = 1.0;
                            p.beta_a = sr.x_a / 2.0;
                            p.beta_b = sr.x_b;
                            qoswap::MomentSet m = qoswap::moments(p);
                            snr = m.mean_w * m.mean_w / m.var_w;
                            entropy_half = m.entropy_production / 2.0;
                        }
                        row["ratio"] = nan_or(sr.ratio);
                        row["snr_w"] = nan_or(snr);
                        row["entropy_half"] = nan_or(entropy_half);
                        row["standard_violated"] = sr.standard_violated;
                        row["degenerate"] = sr.degenerate;

                        ++total_rows;
                        if (sr.standard_violated) ++violations;
                        if (!sr.degenerate && sr.ratio < min_ratio) {
                            min_ratio = sr.ratio;
                            argmin["d"] = d;
                            argmin["theta"] = theta;
                            argmin["x_a"] = sr.x_a;
                            argmin["x_b"] = sr.x_b;
                        }
                        if (csv) {
                            if (!header_written) {
                                os << csv_header(row) << '\n';
                                header_written = true;
                            }
                            os << csv_line(row) << '\n';
                        } else {
                            rep.rows.push_back(std::move(row));
                        }
                    });
            }
        }

        rep.summary["rows"] = total_rows;
        rep.summary["violations"] = violations;
        rep.summary["min_ratio"] =
            std::isfinite(min_ratio) ? ojson(min_ratio) : ojson(nullptr);
        rep.summary["min_ratio_at"] = argmin;
        if (!csv) write_report(rep, common.format, os);
        return 0;
    }
};

// ---------------------------------------------------------------------------
// max-work
// ---------------------------------------------------------------------------

struct MaxWorkCmd {
    CommonOpts common;
    EngineOpts engine;
    std::string ratio_spec = "0.05:0.95:19:lin";
    std::string ratio_list_spec;
    std::string d_list_spec;
    CLI::Option* ratio_opt = nullptr;
    CLI::Option* ratio_list_opt = nullptr;
    CLI::Option* d_list_opt = nullptr;

    int run() const {
        std::vector<double> ratios;
        if (ratio_list_opt->count()) {
            ratios = parse_double_list(ratio_list_spec, "--ratio-list");
        } else {
            AxisSpec ax = parse_axis(ratio_spec, "--ratio", 1);
            for (int i = 0; i < ax.points; ++i) ratios.push_back(ax.at(i));
        }
        for (double r : ratios)
            if (!(r > 0.0 && r < 1.0))
                throw std::invalid_argument(
                    "max-work: temperature ratio T_B/T_A must lie in (0, 1), got " +
                    fmt17(r));
        std::vector<int> d_values = d_list_opt->count()
                                        ? parse_int_list(d_list_spec, "--d-list")
                                        : std::vector<int>{engine.d};
        double theta = engine.params().theta;

        std::size_t total = d_values.size() * ratios.size();
        std::vector<ojson> rows(total);
        std::atomic<bool> all_converged{true};
        parallel_for(total, common.jobs, [&](std::size_t idx) {
            std::size_t di = idx / ratios.size();
            std::size_t ri = idx % ratios.size();
            qoswap::analysis::MaxWorkResult mw =
                qoswap::analysis::efficiency_at_max_work(d_values[di], ratios[ri], theta);
            if (!mw.converged) all_converged = false;
            ojson row = ojson::object();
            row["d"] = mw.d;
            row["tb_over_ta"] = mw.tb_over_ta;
            row["eta_m"] = mw.eta_m;
            row["eta_ca"] = mw.eta_ca;
            row["eta_carnot"] = mw.eta_carnot;
            row["x_opt"] = mw.x_opt;
            row["w_max"] = mw.w_max;
            row["converged"] = mw.converged;
            rows[idx] = std::move(row);
        });

        Report rep;
        rep.config["subcommand"] = "max-work";
        engine.echo(rep.config);
        if (ratio_list_opt->count()) rep.config["ratio-list"] = ratio_list_spec;
        else rep.config["ratio"] = ratio_spec;
        if (d_list_opt->count()) rep.config["d-list"] = d_list_spec;
        echo_common(rep.config, common);
        rep.rows = std::move(rows);
        rep.summary["rows"] = total;
        rep.summary["all_converged"] = all_converged.load();

        std::ofstream file;
        write_report(rep, common.format, open_output(common.output, file));
        return 0;
    }
};

// ---------------------------------------------------------------------------
// finite-time
// ---------------------------------------------------------------------------

struct FiniteTimeCmd {
    CommonOpts common;
    EngineOpts engine;
    std::string mode = "power";
    double alpha_a = 1.0;
    double alpha_b = 1.0;
    std::string tau_spec = "1e-2:1e1:40:log";
    double tau_q_single = 1.0;
    double tau_w = 0.0;
    std::string tau_w_list_spec;
    bool optimize = false;
    std::string na_spec;
    double nb = 2.0;
    std::string alpha_tau_list_spec = "inf";
    CLI::Option* tau_opt = nullptr;
    CLI::Option* tau_q_opt = nullptr;
    CLI::Option* tau_w_list_opt = nullptr;
    CLI::Option* na_opt = nullptr;
    CLI::Option* nb_opt = nullptr;

    std::vector<double> tau_values() const {
        if (tau_q_opt->count()) return {tau_q_single};
        AxisSpec ax = parse_axis(tau_spec, "--tau", 1);
        std::vector<double> out;
        for (int i = 0; i < ax.points; ++i) out.push_back(ax.at(i));
        return out;
    }

    qoswap::finite_time::FiniteTimeParams base_params() const {
        qoswap::finite_time::FiniteTimeParams fp;
        fp.engine = engine.params();
        fp.alpha_a = alpha_a;
        fp.alpha_b = alpha_b;
        fp.tau_q = 1.0;
        fp.tau_w = tau_w;
        return fp;
    }

    void echo(ojson& cfg) const {
        cfg["subcommand"] = "finite-time";
        engine.echo(cfg);
        cfg["mode"] = mode;
        cfg["alpha-a"] = alpha_a;
        cfg["alpha-b"] = alpha_b;
        if (mode != "snr") {
            if (tau_q_opt->count()) cfg["tau-q"] = tau_q_single;
            else cfg["tau"] = tau_spec;
        }
        if (tau_w_list_opt->count()) cfg["tau-w-list"] = tau_w_list_spec;
        else cfg["tau-w"] = tau_w;
        if (optimize) cfg["optimize"] = true;
        if (mode == "snr") {
            cfg["na"] = na_spec;
            cfg["nb"] = nb;
            cfg["alpha-tau-list"] = alpha_tau_list_spec;
        }
    }

    int run_steady(Report& rep) const {
        std::vector<double> taus = tau_values();
        std::vector<ojson> rows(taus.size());
        parallel_for(taus.size(), common.jobs, [&](std::size_t i) {
            qoswap::finite_time::FiniteTimeParams fp = base_params();
            fp.tau_q = taus[i];
            qoswap::finite_time::SteadyMoments sm =
                qoswap::finite_time::steady_moments(fp);
            ojson row = ojson::object();
            row["tau_q"] = fp.tau_q;
            row["tau_w"] = fp.tau_w;
            row["n_a_star"] = sm.state.n_a_star;
            row["n_b_star"] = sm.state.n_b_star;
            row["x_a_star"] = sm.state.x_a_star;
            row["x_b_star"] = sm.state.x_b_star;
            row["beta_a_star"] = sm.state.beta_a_star;
            row["beta_b_star"] = sm.state.beta_b_star;
            row["degenerate_tau"] = sm.state.degenerate_tau;
            row["beta_capped"] = sm.state.beta_capped;
            row["entropy_bath"] = sm.entropy_production_bath;
            row["entropy_internal"] = sm.entropy_production_internal;
            row["power"] = sm.power;
            rows[i] = std::move(row);
        });
        rep.rows = std::move(rows);
        rep.summary["rows"] = rep.rows.size();
        return 0;
    }

    int run_power(Report& rep) const {
        std::vector<double> tau_ws = tau_w_list_opt->count()
                                         ? parse_double_list(tau_w_list_spec, "--tau-w-list")
                                         : std::vector<double>{tau_w};
        std::vector<double> taus = tau_values();
        qoswap::finite_time::FiniteTimeParams base = base_params();
        double na = qoswap::mean_occupation(base.engine.xa(), base.engine.d);
        double nb_bath = qoswap::mean_occupation(base.engine.xb(), base.engine.d);
        double unit = (base.engine.omega_a - base.engine.omega_b) * (na - nb_bath);

        std::size_t total = tau_ws.size() * taus.size();
        std::vector<ojson> rows(total);
        parallel_for(total, common.jobs, [&](std::size_t idx) {
            std::size_t wi = idx / taus.size();
            std::size_t ti = idx % taus.size();
            qoswap::finite_time::FiniteTimeParams fp = base_params();
            fp.tau_w = tau_ws[wi];
            fp.tau_q = taus[ti];
            double pw = qoswap::finite_time::power(fp);
            ojson row = ojson::object();
            row["tau_w"] = fp.tau_w;
            row["tau_q"] = fp.tau_q;
            row["power"] = pw;
            row["power_scaled"] =
                nan_or(unit != 0.0 ? pw / unit : std::numeric_limits<double>::quiet_NaN());
            row["optimal"] = false;
            row["boundary"] = false;
            row["converged"] = true;
            rows[idx] = std::move(row);
        });
        rep.rows = std::move(rows);

        if (optimize) {
            ojson optima = ojson::array();
            for (double tw : tau_ws) {
                qoswap::finite_time::FiniteTimeParams fp = base_params();
                fp.tau_w = tw;
                qoswap::finite_time::OptimalPower op =
                    qoswap::finite_time::optimal_power(fp);
                ojson row = ojson::object();
                row["tau_w"] = tw;
                row["tau_q"] = op.tau_q_opt;
                row["power"] = op.p_opt;
                row["power_scaled"] = nan_or(
                    unit != 0.0 ? op.p_opt / unit : std::numeric_limits<double>::quiet_NaN());
                row["optimal"] = true;
                row["boundary"] = op.boundary;
                row["converged"] = op.converged;
                rep.rows.push_back(row);
                optima.push_back(std::move(row));
            }
            rep.summary["optima"] = optima;
        }
        rep.summary["rows"] = rep.rows.size();
        rep.summary["power_unit"] = unit;
        return 0;
    }

    int run_snr(Report& rep) const {
        if (!na_opt->count())
            throw std::invalid_argument("finite-time --mode snr requires --na min:max:points[:lin|log]");
        EngineParams ep = engine.params();
        if (ep.omega_a == ep.omega_b)
            throw std::invalid_argument(
                "finite-time --mode snr requires omega_a != omega_b (work is zero otherwise)");
        AxisSpec na_axis = parse_axis(na_spec, "--na", 1);
        double top = (ep.d - 1) / 2.0;
        if (!(nb > 0.0 && nb < top))
            throw std::invalid_argument("--nb must lie in (0, (d-1)/2)");

        std::vector<double> alpha_taus;  // NaN encodes ideal thermalization
        std::vector<std::string> alpha_tau_labels;
        for (const auto& tok : split(alpha_tau_list_spec, ',')) {
            if (tok == "inf") {
                alpha_taus.push_back(std::numeric_limits<double>::quiet_NaN());
                alpha_tau_labels.push_back("inf");
            } else {
                double v = parse_double(tok, "--alpha-tau-list");
                if (!(v > 0.0))
                    throw std::invalid_argument("--alpha-tau-list entries must be positive or 'inf'");
                alpha_taus.push_back(v);
                alpha_tau_labels.push_back(fmt17(v));
            }
        }
        if (alpha_taus.empty())
            throw std::invalid_argument("--alpha-tau-list: empty list");

        double x_b = qoswap::mean_occupation_inverse(nb, ep.d);

        std::size_t total = alpha_taus.size() * static_cast<std::size_t>(na_axis.points);
        std::vector<ojson> rows(total);
        parallel_for(total, common.jobs, [&](std::size_t idx) {
            std::size_t ai = idx / static_cast<std::size_t>(na_axis.points);
            int ni = static_cast<int>(idx % static_cast<std::size_t>(na_axis.points));
            double n_a = na_axis.at(ni);
            double x_a = qoswap::mean_occupation_inverse(n_a, ep.d);

            EngineParams p = ep;
            p.beta_a = x_a / p.omega_a;
            p.beta_b = x_b / p.omega_b;

            double snr;
            double tau_q_used;
            if (std::isnan(alpha_taus[ai])) {
                qoswap::MomentSet m = qoswap::moments(p);
                snr = m.mean_w * m.mean_w / m.var_w;
                tau_q_used = std::numeric_limits<double>::infinity();
            } else {
                qoswap::finite_time::FiniteTimeParams fp;
                fp.engine = p;
                fp.alpha_a = alpha_a;
                fp.alpha_b = alpha_b;
                fp.tau_q = alpha_taus[ai] / alpha_a;
                fp.tau_w = tau_w;
                qoswap::finite_time::SteadyMoments sm =
                    qoswap::finite_time::steady_moments(fp);
                snr = sm.at_star.mean_w * sm.at_star.mean_w / sm.at_star.var_w;
                tau_q_used = fp.tau_q;
            }
            ojson row = ojson::object();
            row["alpha_tau"] = alpha_tau_labels[ai];
            row["tau_q"] = tau_q_used;
            row["n_a"] = n_a;
            row["x_a"] = x_a;
            row["snr_w"] = snr;
            rows[idx] = std::move(row);
        });
        rep.rows = std::move(rows);
        rep.summary["rows"] = rep.rows.size();
        rep.summary["n_b"] = nb;
        rep.summary["x_b"] = x_b;
        return 0;
    }

    int run() const {
        Report rep;
        echo(rep.config);
        echo_common(rep.config, common);
        int rc;
        if (mode == "steady") rc = run_steady(rep);
        else if (mode == "power") rc = run_power(rep);
        else rc = run_snr(rep);
        std::ofstream file;
        write_report(rep, common.format, open_output(common.output, file));
        return rc;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact statistics of a two-qudit two-stroke swap engine"};
    app.set_version_flag("--version", "qoswap 1.0.0");
    app.require_subcommand(1);

    MomentsCmd moments_cmd;
    SweepCmd sweep_cmd;
    PdistCmd pdist_cmd;
    CharfnCmd charfn_cmd;
    McValidateCmd mc_cmd;
    TurScanCmd tur_cmd;
    MaxWorkCmd mw_cmd;
    FiniteTimeCmd ft_cmd;

    // --- moments ---
    CLI::App* s_moments = app.add_subcommand(
        "moments", "First and second moments, regime, efficiency, TUR check");
    add_engine_opts(s_moments, moments_cmd.engine);
    add_common_opts(s_moments, moments_cmd.common);

    // --- sweep ---
    CLI::App* s_sweep = app.add_subcommand(
        "sweep", "Moment table over one or two parameter axes");
    add_engine_opts(s_sweep, sweep_cmd.engine);
    add_common_opts(s_sweep, sweep_cmd.common);
    s_sweep->add_option("--sweep", sweep_cmd.sweep_spec,
                        "Axis var:min:max:points[:lin|log]; vars: omega-a, omega-b, "
                        "beta-a, beta-b, theta, theta-pi")
        ->required();
    sweep_cmd.sweep2_opt =
        s_sweep->add_option("--sweep2", sweep_cmd.sweep2_spec, "Second (inner) axis");
    sweep_cmd.d_list_opt = s_sweep->add_option(
        "--d-list", sweep_cmd.d_list_spec, "Comma list of level counts, e.g. 2,4,8");

    // --- pdist ---
    CLI::App* s_pdist = app.add_subcommand(
        "pdist", "Exact joint work/heat distribution on the integer lattice");
    add_engine_opts(s_pdist, pdist_cmd.engine);
    add_common_opts(s_pdist, pdist_cmd.common);
    pdist_cmd.theta_pi_list_opt = s_pdist->add_option(
        "--theta-pi-list", pdist_cmd.theta_pi_list_spec,
        "Comma list of swap angles as fractions of pi; one histogram each");
    pdist_cmd.theta_pi_list_opt->excludes(pdist_cmd.engine.theta_opt);
    pdist_cmd.theta_pi_list_opt->excludes(pdist_cmd.engine.theta_pi_opt);
    s_pdist->add_option("--floor", pdist_cmd.floor,
                        "Probability floor below which log-ratios are omitted")
        ->capture_default_str();

    // --- charfn ---
    CLI::App* s_charfn = app.add_subcommand(
        "charfn", "Characteristic function on a (lambda, mu) grid");
    add_engine_opts(s_charfn, charfn_cmd.engine);
    add_common_opts(s_charfn, charfn_cmd.common);
    s_charfn->add_option("--lambda", charfn_cmd.lambda_spec,
                         "Work-conjugate axis min:max:points[:lin|log]")
        ->capture_default_str();
    s_charfn->add_option("--mu", charfn_cmd.mu_spec,
                         "Heat-conjugate axis min:max:points[:lin|log]")
        ->capture_default_str();

    // --- mc-validate ---
    CLI::App* s_mc = app.add_subcommand(
        "mc-validate",
        "Monte Carlo sampler vs closed forms: per-lattice and moment z-scores");
    add_engine_opts(s_mc, mc_cmd.engine);
    add_common_opts(s_mc, mc_cmd.common);
    s_mc->add_option("-n,--count", mc_cmd.count, "Sample count (>= 10000)")
        ->capture_default_str();
    s_mc->add_option("--seed", mc_cmd.seed, "RNG seed")->capture_default_str();
    s_mc->add_option("--z-max", mc_cmd.z_max, "Pass/fail threshold on |z|")
        ->capture_default_str();
    mc_cmd.ref_opts[0] = s_mc->add_option("--ref-d", mc_cmd.ref.d,
                                          "Reference level count (self-test)");
    mc_cmd.ref_opts[1] = s_mc->add_option("--ref-omega-a", mc_cmd.ref.omega_a,
                                          "Reference hot-side spacing");
    mc_cmd.ref_opts[2] = s_mc->add_option("--ref-omega-b", mc_cmd.ref.omega_b,
                                          "Reference cold-side spacing");
    mc_cmd.ref_opts[3] = s_mc->add_option("--ref-beta-a", mc_cmd.ref.beta_a,
                                          "Reference hot inverse temperature");
    mc_cmd.ref_opts[4] = s_mc->add_option("--ref-beta-b", mc_cmd.ref.beta_b,
                                          "Reference cold inverse temperature");
    mc_cmd.ref.theta_opt = s_mc->add_option("--ref-theta", mc_cmd.ref.theta,
                                            "Reference swap angle (radians)");
    mc_cmd.ref.theta_pi_opt = s_mc->add_option(
        "--ref-theta-pi", mc_cmd.ref.theta_pi, "Reference swap angle / pi");
    mc_cmd.ref.theta_opt->excludes(mc_cmd.ref.theta_pi_opt);
    mc_cmd.ref_opts[5] = mc_cmd.ref.theta_opt;

    // --- tur-scan ---
    CLI::App* s_tur = app.add_subcommand(
        "tur-scan", "Uncertainty-ratio scan over (beta_a omega_a, beta_b omega_b)");
    add_engine_opts(s_tur, tur_cmd.engine);
    add_common_opts(s_tur, tur_cmd.common);
    s_tur->add_option("--xa", tur_cmd.xa_spec,
                      "beta_a*omega_a axis min:max:points[:lin|log]")
        ->capture_default_str();
    s_tur->add_option("--xb", tur_cmd.xb_spec,
                      "beta_b*omega_b axis min:max:points[:lin|log]")
        ->capture_default_str();
    tur_cmd.d_list_opt =
        s_tur->add_option("--d-list", tur_cmd.d_list_spec, "Comma list of level counts");
    tur_cmd.theta_pi_list_opt = s_tur->add_option(
        "--theta-pi-list", tur_cmd.theta_pi_list_spec,
        "Comma list of swap angles as fractions of pi");
    tur_cmd.theta_pi_list_opt->excludes(tur_cmd.engine.theta_opt);
    tur_cmd.theta_pi_list_opt->excludes(tur_cmd.engine.theta_pi_opt);

    // --- max-work ---
    CLI::App* s_mw = app.add_subcommand(
        "max-work", "Efficiency at maximum work versus temperature ratio");
    add_engine_opts(s_mw, mw_cmd.engine);
    add_common_opts(s_mw, mw_cmd.common);
    mw_cmd.ratio_opt = s_mw->add_option("--ratio", mw_cmd.ratio_spec,
                                        "T_B/T_A axis min:max:points[:lin|log]")
                           ->capture_default_str();
    mw_cmd.ratio_list_opt = s_mw->add_option(
        "--ratio-list", mw_cmd.ratio_list_spec, "Comma list of T_B/T_A values");
    mw_cmd.ratio_list_opt->excludes(mw_cmd.ratio_opt);
    mw_cmd.d_list_opt =
        s_mw->add_option("--d-list", mw_cmd.d_list_spec, "Comma list of level counts");

    // --- finite-time ---
    CLI::App* s_ft = app.add_subcommand(
        "finite-time",
        "Limit cycle with finite thermalization strokes: steady state, power, SNR");
    add_engine_opts(s_ft, ft_cmd.engine);
    add_common_opts(s_ft, ft_cmd.common);
    s_ft->add_option("--mode", ft_cmd.mode, "steady | power | snr")
        ->check(CLI::IsMember({"steady", "power", "snr"}))
        ->capture_default_str();
    s_ft->add_option("--alpha-a", ft_cmd.alpha_a, "Hot-side relaxation rate")
        ->capture_default_str();
    s_ft->add_option("--alpha-b", ft_cmd.alpha_b, "Cold-side relaxation rate")
        ->capture_default_str();
    ft_cmd.tau_opt = s_ft->add_option("--tau", ft_cmd.tau_spec,
                                      "Thermalization-stroke axis min:max:points[:lin|log]")
                         ->capture_default_str();
    ft_cmd.tau_q_opt =
        s_ft->add_option("--tau-q", ft_cmd.tau_q_single, "Single thermalization time");
    ft_cmd.tau_q_opt->excludes(ft_cmd.tau_opt);
    s_ft->add_option("--tau-w", ft_cmd.tau_w, "Swap-stroke duration")
        ->capture_default_str();
    ft_cmd.tau_w_list_opt = s_ft->add_option(
        "--tau-w-list", ft_cmd.tau_w_list_spec, "Comma list of swap-stroke durations");
    s_ft->add_flag("--optimize", ft_cmd.optimize,
                   "Append the power-optimal tau_q row per tau_w");
    ft_cmd.na_opt = s_ft->add_option(
        "--na", ft_cmd.na_spec, "snr mode: hot occupation axis min:max:points[:lin|log]");
    ft_cmd.nb_opt = s_ft->add_option("--nb", ft_cmd.nb,
                                     "snr mode: fixed cold occupation")
                        ->capture_default_str();
    s_ft->add_option("--alpha-tau-list", ft_cmd.alpha_tau_list_spec,
                     "snr mode: comma list of alpha*tau_q values; 'inf' = ideal")
        ->capture_default_str();

    int rc = 0;
    s_moments->callback([&] { rc = moments_cmd.run(); });
    s_sweep->callback([&] { rc = sweep_cmd.run(); });
    s_pdist->callback([&] { rc = pdist_cmd.run(); });
    s_charfn->callback([&] { rc = charfn_cmd.run(); });
    s_mc->callback([&] { rc = mc_cmd.run(); });
    s_tur->callback([&] { rc = tur_cmd.run(); });
    s_mw->callback([&] { rc = mw_cmd.run(); });
    s_ft->callback([&] { rc = ft_cmd.run(); });

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(args);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
