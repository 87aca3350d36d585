#include "fraq/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fraq {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

double opt_double(const std::map<std::string, std::string>& m, const std::string& key,
                  double fallback) {
    const auto it = m.find(key);
    return it == m.end() ? fallback : parse_fraction(it->second);
}

}  // namespace

double parse_fraction(const std::string& text) {
    const std::string t = trim(text);
    const auto slash = t.find('/');
    std::size_t used = 0;
    if (slash != std::string::npos) {
        const long num = std::stol(t.substr(0, slash), &used);
        if (used != slash) throw std::invalid_argument("bad fraction: " + text);
        const long den = std::stol(t.substr(slash + 1), &used);
        if (used != t.size() - slash - 1 || den == 0)
            throw std::invalid_argument("bad fraction: " + text);
        return double(num) / double(den);
    }
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("bad number: " + text);
    return v;
}

std::vector<double> parse_fraction_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ','))
        if (!item.empty()) out.push_back(parse_fraction(item));
    return out;
}

std::map<std::string, std::string> parse_config_text(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line with empty key");
        out[key] = val;
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (schemes.empty()) throw std::invalid_argument("config: no schemes");
    if (!(alpha1 > 0.0 && alpha1 < 1.0 && alpha2 > 0.0 && alpha2 < 1.0))
        throw std::invalid_argument("config: alphas must be in (0,1)");
    if (grid_m < 1) throw std::invalid_argument("config: grid_m must be >= 1");
    if (taus.empty()) throw std::invalid_argument("config: no taus");
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (!(taus[i] < taus[i - 1]))
            throw std::invalid_argument("config: taus must be sorted descending");
    if (!(ref_tau > 0.0) || !(ref_tau < taus.back()))
        throw std::invalid_argument("config: ref_tau must be strictly below every study tau");
    if (!(t_final > 0.0)) throw std::invalid_argument("config: t_final must be > 0");
}

ExperimentConfig resolve_config(const std::map<std::string, std::string>& file_opts,
                                const std::map<std::string, std::string>& cli_opts) {
    std::map<std::string, std::string> merged = file_opts;
    for (const auto& [k, v] : cli_opts) merged[k] = v;

    ExperimentConfig cfg;
    if (const auto it = merged.find("scheme"); it != merged.end()) {
        cfg.schemes.clear();
        for (const auto& name : split(it->second, ','))
            cfg.schemes.push_back(scheme_from_name(name));
    }
    cfg.alpha1 = opt_double(merged, "alpha1", cfg.alpha1);
    cfg.alpha2 = opt_double(merged, "alpha2", cfg.alpha2);
    if (const auto it = merged.find("m"); it != merged.end())
        cfg.coupling_a = coupling_from_transition(parse_fraction(it->second));
    if (const auto it = merged.find("a"); it != merged.end())
        cfg.coupling_a = parse_fraction(it->second);
    cfg.grid_m = int(opt_double(merged, "grid-m", cfg.grid_m));
    if (const auto it = merged.find("taus"); it != merged.end())
        cfg.taus = parse_fraction_list(it->second);
    cfg.ref_tau = opt_double(merged, "ref-tau", cfg.ref_tau);
    cfg.t_final = opt_double(merged, "t-final", cfg.t_final);
    if (const auto it = merged.find("init"); it != merged.end()) {
        if (it->second == "poly_sin")
            cfg.initial = InitialData::poly_sin;
        else if (it->second == "indicator")
            cfg.initial = InitialData::indicator;
        else
            throw std::invalid_argument("config: unknown init " + it->second);
    }
    cfg.kernel.be_points = int(opt_double(merged, "np", cfg.kernel.be_points));
    cfg.kernel.sbd_points_1 = int(opt_double(merged, "np1", cfg.kernel.sbd_points_1));
    cfg.kernel.sbd_points_2 = int(opt_double(merged, "np2", cfg.kernel.sbd_points_2));
    cfg.kernel.sbd_head = int(opt_double(merged, "ns", cfg.kernel.sbd_head));
    cfg.kernel.eps_tol = opt_double(merged, "eps-tol", cfg.kernel.eps_tol);
    if (const auto it = merged.find("auto-kernel"); it != merged.end())
        cfg.kernel.auto_size = (it->second == "1" || it->second == "true" || it->second == "on");
    if (const auto it = merged.find("out-dir"); it != merged.end()) cfg.out_dir = it->second;
    return cfg;
}

std::vector<double> compute_rates(const std::vector<std::pair<double, double>>& tau_and_error) {
    std::vector<double> rates;
    for (std::size_t i = 0; i + 1 < tau_and_error.size(); ++i) {
        const auto [tau_c, err_c] = tau_and_error[i];
        const auto [tau_f, err_f] = tau_and_error[i + 1];
        if (std::abs(tau_c / tau_f - 2.0) > 1e-9)
            throw std::invalid_argument("compute_rates: taus must halve");
        if (err_c == 0.0 || err_f == 0.0)
            rates.push_back(std::numeric_limits<double>::quiet_NaN());
        else
            rates.push_back(std::log(err_c / err_f) / std::log(2.0));
    }
    return rates;
}

int sweep_threads(int fallback) {
    if (const char* env = std::getenv("FRAQ_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return fallback > 0 ? fallback : 1;
}

std::vector<ConvergenceReport> run_convergence(const ExperimentConfig& cfg) {
    cfg.validate();
    ProblemSpec base;
    base.alpha1 = cfg.alpha1;
    base.alpha2 = cfg.alpha2;
    base.coupling_a = cfg.coupling_a;
    base.grid_m = cfg.grid_m;
    base.t_final = cfg.t_final;
    base.initial = cfg.initial;

    // Shared reference: the fast member of the scheme family at ref_tau,
    // computed once with horizon-certified kernels.
    const bool family_sbd = scheme_is_sbd(cfg.schemes.front());
    for (Scheme s : cfg.schemes)
        if (scheme_is_sbd(s) != family_sbd)
            throw std::invalid_argument("convergence: schemes must share one family (BE or SBD)");
    ProblemSpec ref_spec = base;
    ref_spec.n_steps = std::lround(cfg.t_final / cfg.ref_tau);
    KernelConfig ref_kernel = cfg.kernel;
    ref_kernel.auto_size = true;  // the reference must not carry compression error
    const RunResult ref = run(ref_spec, family_sbd ? Scheme::FastSBD : Scheme::FastBE, ref_kernel);

    const double h = base.h();
    std::vector<ConvergenceReport> reports;
    for (Scheme scheme : cfg.schemes) {
        ConvergenceReport rep;
        rep.scheme = scheme;
        rep.ref_tau = cfg.ref_tau;
        rep.ref_seconds = ref.loop_seconds;
        rep.rows.resize(cfg.taus.size());

        std::vector<std::thread> pool;
        std::size_t next = 0;
        std::mutex mtx;
        const int nthreads = std::min<int>(sweep_threads(int(cfg.taus.size())), int(cfg.taus.size()));
        auto worker = [&]() {
            while (true) {
                std::size_t idx;
                {
                    std::lock_guard<std::mutex> lk(mtx);
                    if (next >= cfg.taus.size()) return;
                    idx = next++;
                }
                ProblemSpec spec = base;
                spec.n_steps = std::lround(cfg.t_final / cfg.taus[idx]);
                const RunResult rr = run(spec, scheme, cfg.kernel);
                ConvergenceRow row;
                row.tau = cfg.taus[idx];
                std::vector<double> diff(spec.grid_m);
                for (int k = 0; k < spec.grid_m; ++k)
                    diff[k] = rr.final_state.g1[k] - ref.final_state.g1[k];
                row.e1 = l2_norm(diff, h);
                for (int k = 0; k < spec.grid_m; ++k)
                    diff[k] = rr.final_state.g2[k] - ref.final_state.g2[k];
                row.e2 = l2_norm(diff, h);
                row.seconds = rr.loop_seconds;
                rep.rows[idx] = row;
            }
        };
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();

        std::vector<std::pair<double, double>> te1, te2;
        for (const auto& r : rep.rows) {
            te1.emplace_back(r.tau, r.e1);
            te2.emplace_back(r.tau, r.e2);
        }
        const auto r1 = compute_rates(te1);
        const auto r2 = compute_rates(te2);
        rep.rows[0].rate1 = rep.rows[0].rate2 = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 1; i < rep.rows.size(); ++i) {
            rep.rows[i].rate1 = r1[i - 1];
            rep.rows[i].rate2 = r2[i - 1];
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<BenchRow> timing_sweep(const ExperimentConfig& cfg,
                                   const std::vector<long>& step_counts) {
    ProblemSpec base;
    base.alpha1 = cfg.alpha1;
    base.alpha2 = cfg.alpha2;
    base.coupling_a = cfg.coupling_a;
    base.grid_m = cfg.grid_m;
    base.t_final = cfg.t_final;
    base.initial = cfg.initial;
    std::vector<BenchRow> rows;
    for (Scheme scheme : cfg.schemes) {
        for (long n : step_counts) {
            ProblemSpec spec = base;
            spec.n_steps = n;
            const RunResult rr = run(spec, scheme, cfg.kernel);
            rows.push_back({scheme_name(scheme), n, rr.loop_seconds, rr.setup_seconds});
        }
    }
    return rows;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_weights_csv(std::ostream& out, const WeightTable& t) {
    out << "i,d_i\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        out << i << ',' << format_double(t[i]) << '\n';
}

void write_kernel_error_csv(std::ostream& out, const KernelErrorReport& r) {
    out << "i,eps_abs\n";
    for (long i = 0; i <= r.max_index; ++i)
        out << i << ',' << format_double(r.eps[i]) << '\n';
}

void write_snapshot_csv(std::ostream& out, const ProblemSpec& spec, const StateField& f) {
    out << "x,g1,g2\n";
    const double h = spec.h();
    for (int k = 0; k < spec.grid_m; ++k)
        out << format_double((k + 1) * h) << ',' << format_double(f.g1[k]) << ','
            << format_double(f.g2[k]) << '\n';
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& r) {
    out << "tau,E1,rate1,E2,rate2,seconds\n";
    for (const auto& row : r.rows)
        out << format_double(row.tau) << ',' << format_double(row.e1) << ','
            << format_double(row.rate1) << ',' << format_double(row.e2) << ','
            << format_double(row.rate2) << ',' << format_double(row.seconds) << '\n';
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "scheme,N,seconds_loop,seconds_setup\n";
    for (const auto& r : rows)
        out << r.scheme << ',' << r.n_steps << ',' << format_double(r.seconds_loop) << ','
            << format_double(r.seconds_setup) << '\n';
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(split(line, ','));
    }
    return rows;
}

}  // namespace fraq
