#include "hartree/io.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hartree/errors.hpp"

namespace hartree {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config parse_config(std::istream& in) {
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("config line {}: expected key=value", lineno));
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(fmt::format("config line {}: empty key", lineno));
        cfg[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

Config read_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
    return parse_config(in);
}

const std::string& require_key(const Config& cfg, const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) throw ConfigError(fmt::format("missing required config key '{}'", key));
    return it->second;
}

double config_double(const Config& cfg, const std::string& key, double fallback) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("config key '{}': '{}' is not a number", key, it->second));
    }
}

int config_int(const Config& cfg, const std::string& key, int fallback) {
    const double v = config_double(cfg, key, fallback);
    if (v != std::floor(v)) throw ConfigError(fmt::format("config key '{}' must be an integer", key));
    return int(v);
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("'{}' is not a number", item));
        }
    }
    return out;
}

OutPolicy parse_out_policy(const std::string& text) {
    if (text == "overwrite") return OutPolicy::overwrite;
    if (text == "fail") return OutPolicy::fail;
    throw ConfigError(fmt::format("out_policy must be overwrite or fail, got '{}'", text));
}

void prepare_out_dir(const fs::path& dir, OutPolicy policy) {
    std::error_code ec;
    if (fs::exists(dir, ec)) {
        if (!fs::is_directory(dir, ec)) throw IoError(fmt::format("'{}' exists and is not a directory", dir.string()));
        if (policy == OutPolicy::fail && !fs::is_empty(dir, ec))
            throw IoError(fmt::format("output directory '{}' already exists (policy fail)", dir.string()));
    }
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
}

std::string csv_number(double x) { return fmt::format("{:.17g}", x); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
    s += '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) s += ',';
            s += csv_number(r[i]);
        }
        s += '\n';
    }
    write_text(path, s);
}

void write_ground_state(const fs::path& dir, const GroundState& st) {
    const RadialGrid& g = *st.grid;
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < g.size(); ++i) rows.push_back({g.r(i), st.u.values(i)});
    write_csv(dir / "groundstate.csv", {"r", "u"}, rows);
    std::string meta;
    meta += fmt::format("dim={}\n", st.dim.n);
    meta += fmt::format("radius={}\n", csv_number(g.R));
    meta += fmt::format("eps={}\n", csv_number(st.eps));
    meta += fmt::format("nodes={}\n", g.size());
    meta += fmt::format("grading={}\n", csv_number(g.grading));
    meta += fmt::format("order={}\n", g.order);
    meta += fmt::format("boundary={}\n", st.bc == BoundaryCondition::dirichlet ? "dirichlet" : "decay");
    meta += fmt::format("sup_norm={}\n", csv_number(st.sup_norm));
    meta += fmt::format("mu={}\n", csv_number(st.mu));
    meta += fmt::format("residual={}\n", csv_number(st.residual));
    meta += fmt::format("mu0={}\n", csv_number(st.mu0));
    meta += fmt::format("picard_iterations={}\n", st.picard_iterations);
    meta += fmt::format("newton_iterations={}\n", st.newton_iterations);
    write_text(dir / "groundstate_meta.txt", meta);
}

void write_spectrum(const fs::path& dir, const Spectrum& sp, const RadialGrid& g, int count) {
    count = std::min<int>(count, int(sp.lambdas.size()));
    std::vector<std::vector<double>> rows;
    for (int i = 1; i <= count; ++i) {
        const EigenPair& p = sp.at(i);
        rows.push_back({double(i), sp.lambdas[i - 1], double(p.ell), double(p.multiplicity)});
    }
    write_csv(dir / "spectrum.csv", {"i", "lambda", "ell", "multiplicity"}, rows);
    fs::create_directories(dir / "profiles");
    std::vector<int> written;
    for (int i = 1; i <= count; ++i) {
        const int k = sp.pair_of[i - 1];
        if (std::find(written.begin(), written.end(), k) != written.end()) continue;
        written.push_back(k);
        const EigenPair& p = sp.pairs[k];
        std::vector<std::vector<double>> prow;
        for (int j = 0; j < g.size(); ++j) prow.push_back({g.r(j), p.profile.values(j)});
        write_csv(dir / "profiles" / fmt::format("pair_{}.csv", p.global_index), {"r", "v"}, prow);
    }
}

void write_sweep(const fs::path& dir, const SweepTable& t) {
    std::vector<std::vector<double>> rows;
    const std::size_t width = sweep_columns(t.dim.n).size();
    std::string status = "eps,status\n";
    for (const auto& r : t.rows) {
        auto v = sweep_row_values(r);
        if (!r.ok) {
            v.assign(width, std::numeric_limits<double>::quiet_NaN());
            v[0] = r.eps;
        }
        rows.push_back(std::move(v));
        std::string msg = r.status;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        status += csv_number(r.eps) + "," + msg + "\n";
    }
    write_csv(dir / "sweep.csv", sweep_columns(t.dim.n), rows);
    write_text(dir / "sweep_status.csv", status);
}

void write_fits(const fs::path& dir, const FitReport& rep) {
    std::string s = "metric,estimate,ci_low,ci_high,reference_value,flag\n";
    if (!rep.enabled) {
        const std::string nan = csv_number(std::numeric_limits<double>::quiet_NaN());
        s += fmt::format("fits_disabled,{0},{0},{0},{0},{1}\n", nan, rep.reason);
    }
    for (const auto& e : rep.entries)
        s += fmt::format("{},{},{},{},{},{}\n", e.metric, csv_number(e.estimate), csv_number(e.ci_low),
                         csv_number(e.ci_high), csv_number(e.reference_value), e.flag);
    write_text(dir / "fits.csv", s);
}

std::string svg_line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                           const std::vector<double>& x, const std::vector<ChartSeries>& series, bool logx,
                           bool logy) {
    const double W = 640, H = 420, L = 80, Rm = 20, T = 40, B = 60;
    auto tx = [&](double v) { return logx ? std::log10(v) : v; };
    auto ty = [&](double v) { return logy ? std::log10(v) : v; };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (double v : x)
        if (std::isfinite(tx(v))) x0 = std::min(x0, tx(v)), x1 = std::max(x1, tx(v));
    for (const auto& s : series)
        for (double v : s.y)
            if (std::isfinite(ty(v))) y0 = std::min(y0, ty(v)), y1 = std::max(y1, ty(v));
    if (!(x1 > x0)) x0 -= 1, x1 += 1;
    if (!(y1 > y0)) y0 -= 1, y1 += 1;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad, y1 += pad;
    auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - Rm); };
    auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::string s = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        W, H);
    s += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n", W / 2, title);
    s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", L, H - B, W - Rm);
    s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", L, T, H - B);
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        const double xs = L + (W - L - Rm) * k / 4, ys = H - B - (H - T - B) * k / 4;
        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.4g}</text>\n", xs, H - B + 18,
                         logx ? std::pow(10.0, xv) : xv);
        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.5g}</text>\n", L - 6, ys + 4,
                         logy ? std::pow(10.0, yv) : yv);
    }
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", L + (W - L - Rm) / 2, H - 16,
                     xlabel);
    s += fmt::format("<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
                     T + (H - T - B) / 2, ylabel);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* col = colors[k % 5];
        std::string pts;
        for (std::size_t i = 0; i < x.size() && i < series[k].y.size(); ++i) {
            if (!std::isfinite(tx(x[i])) || !std::isfinite(ty(series[k].y[i]))) continue;
            pts += fmt::format("{:.2f},{:.2f} ", px(x[i]), py(series[k].y[i]));
            s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", px(x[i]),
                             py(series[k].y[i]), col);
        }
        s += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", pts, col);
        s += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", L + 10, T + 14 + 16 * k, col,
                         series[k].name);
    }
    s += "</svg>\n";
    return s;
}

void write_plots(const fs::path& dir, const SweepTable& t, const FitReport& rep) {
    const fs::path pd = dir / "plots";
    fs::create_directories(pd);
    const int n = t.dim.n;
    std::vector<double> eps, l1, slope, l2m1, esq, hhat;
    for (const auto& r : t.rows) {
        if (!r.ok) continue;
        eps.push_back(r.eps);
        l1.push_back(r.lambdas[0]);
        slope.push_back((r.lambdas[n + 1] - 1.0) / r.eps);
        l2m1.push_back(r.lambdas[1] - 1.0);
        esq.push_back(r.eps_supnorm_sq);
    }
    auto constant = [&](double v) { return std::vector<double>(eps.size(), v); };
    auto ref = [&](const char* m) {
        const FitEntry* e = rep.find(m);
        return e ? e->reference_value : std::numeric_limits<double>::quiet_NaN();
    };
    auto est = [&](const char* m) {
        const FitEntry* e = rep.find(m);
        return e ? e->estimate : std::numeric_limits<double>::quiet_NaN();
    };
    write_text(pd / "lambda1.svg",
               svg_line_chart("lambda_1 vs eps", "eps", "lambda_1", eps,
                              {{"lambda_1", l1}, {"limit 1/(2p-1)", constant(1.0 / (2 * t.dim.p - 1))}}));
    write_text(pd / "c0_slope.svg",
               svg_line_chart(fmt::format("(lambda_{} - 1)/eps vs eps", n + 2), "eps", "ratio", eps,
                              {{"(lambda-1)/eps", slope}, {"fitted slope", constant(est("c0_slope"))}}));
    write_text(pd / "ell1_exponent.svg",
               svg_line_chart("lambda_2 - 1 vs eps (log-log)", "eps", "lambda_2 - 1", eps, {{"lambda_2 - 1", l2m1}},
                              true, true));
    write_text(pd / "eps_supnorm_sq.svg",
               svg_line_chart("eps |u|_inf^2 vs eps", "eps", "eps |u|^2", eps,
                              {{"eps |u|^2", esq}, {"F_n", constant(ref("F_n_extrapolation"))}}));
    for (std::size_t i = 0; i < eps.size(); ++i) hhat.push_back(l2m1[i] / std::pow(eps[i], double(n) / (n - 2)));
    write_text(pd / "h_hat.svg",
               svg_line_chart("(lambda_2 - 1)/eps^{n/(n-2)} vs eps", "eps", "ratio", eps, {{"ratio", hhat}}));
}

void write_manifest(const fs::path& dir, const std::string& command, const Config& cfg, double wall_seconds) {
    std::string s;
    s += "command=" + command + "\n";
    for (const auto& [k, v] : cfg) s += "config." + k + "=" + v + "\n";
    s += "version.hartree=1.0.0\n";
    s += fmt::format("version.eigen={}.{}.{}\n", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION);
    s += fmt::format("version.fmt={}\n", FMT_VERSION);
    s += fmt::format("version.boost={}\n", BOOST_LIB_VERSION);
    s += fmt::format("version.compiler={}\n", __VERSION__);
    s += fmt::format("wall_time_seconds={:.3f}\n", wall_seconds);
    write_text(dir / "manifest.txt", s);
}

}  // namespace hartree
