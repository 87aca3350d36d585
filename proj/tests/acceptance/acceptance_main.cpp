// Acceptance suite: one numbered criterion per function, one PASS/FAIL line
// each. Exit code is the number of failed criteria. --skip-slow omits the
// long drift study (criterion 8); --only N runs a single criterion.
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fraq/bench.hpp"
#include "fraq/fpfp.hpp"
#include "fraq/gauss_jacobi.hpp"

using namespace fraq;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool slow;
    std::function<bool(std::ostringstream&)> fn;
};

bool close_rel(double got, double want, double rel) {
    return std::abs(got - want) <= rel * std::abs(want);
}

// Independent series-power oracle (J.C.P. Miller recurrence).
std::vector<double> series_pow(const std::vector<double>& p, double alpha, long n_max) {
    std::vector<double> q(n_max + 1, 0.0);
    q[0] = std::pow(p[0], alpha);
    for (long n = 1; n <= n_max; ++n) {
        double s = 0.0;
        for (long k = 1; k <= std::min<long>(n, long(p.size()) - 1); ++k)
            s += (alpha * k - (n - k)) * p[k] * q[n - k];
        q[n] = s / (double(n) * p[0]);
    }
    return q;
}

// --------------------------------------------------------------------------
// 1. Weight oracle equivalence
bool crit1(std::ostringstream& log) {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> ua(0.02, 0.999), ut(-3.5, 0.5);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = ua(rng), tau = std::pow(10.0, ut(rng));
        const double scale = std::pow(tau, -alpha);
        const WeightTable be = be_weights(alpha, tau, 500);
        const WeightTable sbd = sbd_weights(alpha, tau, 500);
        const auto obe = series_pow({1.0, -1.0}, alpha, 500);
        const auto osbd = series_pow({1.5, -2.0, 0.5}, alpha, 500);
        for (long i = 0; i <= 500; ++i) {
            const double r1 = std::abs(be[i] - scale * obe[i]) / std::max(scale * std::abs(obe[i]), 1e-300);
            const double r2 = std::abs(sbd[i] - scale * osbd[i]) / std::max(scale * std::abs(osbd[i]), 1e-300);
            worst = std::max({worst, r1, r2});
        }
    }
    ok = worst <= 1e-12;
    log << "max relative deviation from the series-power oracle = " << worst
        << " (tol 1e-12, 20 random (alpha,tau), i <= 500)";
    return ok;
}

// --------------------------------------------------------------------------
// 2. BE exactness window
bool crit2(std::ostringstream& log) {
    bool ok = true;
    double worst = 0.0;
    for (double alpha : {0.2, 0.5, 0.8}) {
        const double tau = 1e-3, tol = 1e-14 * std::pow(tau, -alpha);
        for (int np : {16, 64}) {
            const FastKernelBE k = build_be_kernel(alpha, tau, np);
            const WeightTable d = be_weights(alpha, tau, 2 * np + 1);
            for (long i = 2; i <= 2 * np + 1; ++i) {
                const double e = std::abs(k.reconstruct(i) - d[i]);
                worst = std::max(worst, e / std::pow(tau, -alpha));
                if (e > tol) ok = false;
            }
        }
    }
    log << "max |reconstruction - classical| over the window = " << worst
        << " * tau^-alpha (tol 1e-14)";
    return ok;
}

// --------------------------------------------------------------------------
// 3. SBD kernel error curve (benchmark configurations)
bool crit3(std::ostringstream& log) {
    struct Cfg {
        double alpha;
        int np1, np2, ns;
        double frozen_max;  // from the oversampled-oracle run recorded here
    };
    // Frozen thresholds fixed by the 500-point oversampled-quadrature oracle:
    // max_{ns <= i <= 1000} eps, absolute, tau = 1/1000.
    const Cfg cfgs[] = {{0.3, 31, 31, 15, 3.950380e-5}, {0.8, 41, 41, 17, 6.389989e-6}};
    bool ok = true;
    for (const Cfg& c : cfgs) {
        const double tau = 1e-3;
        const FastKernelSBD k = build_sbd_kernel(c.alpha, tau, c.np1, c.np2, c.ns);
        const KernelErrorReport rep = kernel_error_report(k, 1000);
        // (a) report vs the classical-table oracle, frozen value to 2 digits
        const bool hit_frozen = close_rel(rep.max_eps, c.frozen_max, 5e-2);
        // (b) certified against the independent 500-point oversampled rule
        const FastKernelSBD k500 = build_sbd_kernel(c.alpha, tau, 500, 500, c.ns);
        double max_vs_oracle = 0.0;
        for (long i = c.ns; i <= 1000; ++i)
            max_vs_oracle = std::max(max_vs_oracle, std::abs(k.reconstruct(i) - k500.reconstruct(i)));
        const bool oracle_agrees = close_rel(max_vs_oracle, rep.max_eps, 5e-2);
        // (c) qualitative shape: raw reconstruction is much worse below ns
        const WeightTable d = sbd_weights(c.alpha, tau, c.ns);
        double head_raw = 0.0;
        for (long i = 3; i < c.ns; ++i)
            head_raw = std::max(head_raw, std::abs(k.reconstruct(i) - d[i]));
        const bool shape = head_raw >= 3.0 * rep.max_eps;
        for (long i = 0; i < c.ns; ++i)
            if (rep.eps[i] != 0.0) ok = false;  // head eps identically zero
        ok = ok && hit_frozen && oracle_agrees && shape;
        log << "[alpha=" << c.alpha << "] max eps[" << c.ns << "..1000]=" << rep.max_eps
            << " frozen=" << c.frozen_max << " oracle=" << max_vs_oracle
            << " head_raw=" << head_raw << "; ";
    }
    return ok;
}

// --------------------------------------------------------------------------
// 4. History recursion fidelity
bool crit4(std::ostringstream& log) {
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> ua(0.05, 0.95), ug(-1.0, 1.0), ul(0.5, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double alpha = ua(rng);
        const double tau = std::pow(10.0, -3.0 * ua(rng));
        const long len = 20 + long(180 * ua(rng));
        const bool sbd = trial % 2;
        if (!sbd) {
            const int np = 8 + int(24 * ua(rng));
            const FastKernelBE k = build_be_kernel(alpha, tau, np);
            BeHistory h(k, HistoryVariant::standalone, 1);
            std::vector<double> g;
            std::vector<double> recon = {0.0, 0.0};  // d~_i cache
            for (long i = 2; i <= len; ++i) recon.push_back(k.reconstruct(i));
            for (long n = 0; n < len; ++n) {
                g.push_back(ug(rng));
                h.push(std::span<const double>(&g.back(), 1));
                if (n < 1) continue;
                double fast;
                h.derivative(std::span<double>(&fast, 1));
                double direct = k.head[0] * g[n] + k.head[1] * g[n - 1];
                for (long i = 0; i <= n - 2; ++i) direct += recon[n - i] * g[i];
                const double scale = std::max(std::abs(direct), std::pow(tau, -alpha));
                worst = std::max(worst, std::abs(fast - direct) / scale);
            }
        } else {
            const int np = 8 + int(24 * ua(rng));
            const int ns = 3 + int(12 * ua(rng));
            const FastKernelSBD k = build_sbd_kernel(alpha, tau, np, np + 3, ns);
            SbdHistory h(k, HistoryVariant::standalone, 1);
            std::vector<double> g;
            std::vector<double> recon(len + 1, 0.0);
            for (long i = 3; i <= len; ++i) recon[i] = k.reconstruct(i);
            for (long n = 0; n < len; ++n) {
                g.push_back(ug(rng));
                h.push(std::span<const double>(&g.back(), 1));
                double fast;
                h.derivative(std::span<double>(&fast, 1));
                double direct = 0.0;
                for (long i = 0; i <= std::min<long>(k.n_head - 1, n); ++i)
                    direct += k.head[i] * g[n - i];
                for (long i = k.n_head; i <= n; ++i) direct += recon[i] * g[n - i];
                const double scale = std::max(std::abs(direct), std::pow(tau, -alpha));
                worst = std::max(worst, std::abs(fast - direct) / scale);
            }
        }
    }
    log << "max relative recursion error over 100 random sequences = " << worst
        << " (tol 1e-13)";
    return worst <= 1e-13;
}

// --------------------------------------------------------------------------
// 5. Mode-space oracle (compact copy of the test-side oracle)
struct ModeBasis {
    int m;
    double h;
    std::vector<double> lambda, vecs;
    explicit ModeBasis(int grid_m) : m(grid_m), h(1.0 / (grid_m + 1)) {
        lambda.resize(m);
        vecs.resize(std::size_t(m) * m);
        for (int k = 0; k < m; ++k) {
            const double s = std::sin((k + 1) * std::numbers::pi * h / 2.0);
            lambda[k] = 4.0 / (h * h) * s * s;
            for (int j = 0; j < m; ++j)
                vecs[std::size_t(k) * m + j] = std::sin((k + 1) * std::numbers::pi * (j + 1) * h);
        }
    }
};

void solve2x2(double a11, double a12, double a21, double a22, double r1, double r2, double& x1,
              double& x2) {
    const double det = a11 * a22 - a12 * a21;
    x1 = (r1 * a22 - a12 * r2) / det;
    x2 = (a11 * r2 - a21 * r1) / det;
}

bool crit5(std::ostringstream& log) {
    std::mt19937 rng(505);
    std::uniform_real_distribution<double> ua(0.12, 0.88);
    const int m = 31;
    const long N = 64;
    const ModeBasis basis(m);
    KernelConfig kconf;
    kconf.auto_size = false;
    kconf.be_points = 20;
    kconf.sbd_points_1 = kconf.sbd_points_2 = 20;
    kconf.sbd_head = 9;
    double worst = 0.0;
    for (double a : {-1.0, 0.0, 2.0}) {
        ProblemSpec spec;
        spec.alpha1 = ua(rng);
        spec.alpha2 = ua(rng);
        spec.coupling_a = a;
        spec.grid_m = m;
        spec.t_final = 0.5;
        spec.n_steps = N;
        spec.initial = InitialData::poly_sin;
        const double tau = spec.tau();
        const double o1 = 1.0 - spec.alpha1, o2 = 1.0 - spec.alpha2;
        for (Scheme scheme : {Scheme::BE, Scheme::FastBE, Scheme::SBD, Scheme::FastSBD}) {
            // effective weights
            std::vector<double> w1(N + 1), w2(N + 1);
            if (scheme == Scheme::BE || scheme == Scheme::FastBE) {
                const WeightTable t1 = be_weights(o1, tau, N), t2 = be_weights(o2, tau, N);
                for (long i = 0; i <= N; ++i) {
                    w1[i] = t1[i];
                    w2[i] = t2[i];
                }
                if (scheme == Scheme::FastBE) {
                    const FastKernelBE k1 = build_be_kernel(o1, tau, kconf.be_points);
                    const FastKernelBE k2 = build_be_kernel(o2, tau, kconf.be_points);
                    for (long i = 2; i <= N; ++i) {
                        w1[i] = k1.reconstruct(i);
                        w2[i] = k2.reconstruct(i);
                    }
                }
            } else {
                const WeightTable t1 = sbd_weights(o1, tau, N), t2 = sbd_weights(o2, tau, N);
                for (long i = 0; i <= N; ++i) {
                    w1[i] = t1[i];
                    w2[i] = t2[i];
                }
                if (scheme == Scheme::FastSBD) {
                    const FastKernelSBD k1 =
                        build_sbd_kernel(o1, tau, kconf.sbd_points_1, kconf.sbd_points_2, kconf.sbd_head);
                    const FastKernelSBD k2 =
                        build_sbd_kernel(o2, tau, kconf.sbd_points_1, kconf.sbd_points_2, kconf.sbd_head);
                    for (long i = kconf.sbd_head; i <= N; ++i) {
                        w1[i] = k1.reconstruct(i);
                        w2[i] = k2.reconstruct(i);
                    }
                }
            }
            // scalar recursion per mode
            const StateField f0 = initial_field(spec);
            std::vector<double> c1(m, 0.0), c2(m, 0.0);
            for (int k = 0; k < m; ++k) {
                double a1 = 0.0, a2 = 0.0;
                for (int j = 0; j < m; ++j) {
                    a1 += basis.vecs[std::size_t(k) * m + j] * f0.g1[j];
                    a2 += basis.vecs[std::size_t(k) * m + j] * f0.g2[j];
                }
                c1[k] = 2.0 / (m + 1) * a1;
                c2[k] = 2.0 / (m + 1) * a2;
            }
            std::vector<double> e1(m), e2(m);
            const bool is_sbd = scheme_is_sbd(scheme);
            for (int k = 0; k < m; ++k) {
                const double lam = basis.lambda[k];
                std::vector<double> u = {c1[k]}, v = {c2[k]};
                for (long n = 1; n <= N; ++n) {
                    double x1, x2;
                    if (!is_sbd) {
                        double s1 = 0.0, s2 = 0.0;
                        for (long i = 1; i <= n - 1; ++i) {
                            s1 += w1[i] * u[n - i];
                            s2 += w2[i] * v[n - i];
                        }
                        solve2x2(1.0 / tau + w1[0] * (a + lam), -a * w2[0], -a * w1[0],
                                 1.0 / tau + w2[0] * (a + lam), u[n - 1] / tau - (a + lam) * s1 + a * s2,
                                 v[n - 1] / tau - (a + lam) * s2 + a * s1, x1, x2);
                    } else if (n == 1) {
                        solve2x2(1.0 / tau + 2.0 / 3.0 * w1[0] * (a + lam), -2.0 / 3.0 * a * w2[0],
                                 -2.0 / 3.0 * a * w1[0], 1.0 / tau + 2.0 / 3.0 * w2[0] * (a + lam),
                                 u[0] / tau - w1[0] / 3.0 * (a + lam) * u[0] + a * w2[0] / 3.0 * v[0],
                                 v[0] / tau - w2[0] / 3.0 * (a + lam) * v[0] + a * w1[0] / 3.0 * u[0],
                                 x1, x2);
                    } else {
                        double s1 = 0.5 * w1[n - 1] * u[0], s2 = 0.5 * w2[n - 1] * v[0];
                        for (long i = 1; i <= n - 1; ++i) {
                            s1 += w1[i] * u[n - i];
                            s2 += w2[i] * v[n - i];
                        }
                        solve2x2(1.5 / tau + w1[0] * (a + lam), -a * w2[0], -a * w1[0],
                                 1.5 / tau + w2[0] * (a + lam),
                                 (2.0 * u[n - 1] - 0.5 * u[n - 2]) / tau - (a + lam) * s1 + a * s2,
                                 (2.0 * v[n - 1] - 0.5 * v[n - 2]) / tau - (a + lam) * s2 + a * s1,
                                 x1, x2);
                    }
                    u.push_back(x1);
                    v.push_back(x2);
                }
                e1[k] = u[N];
                e2[k] = v[N];
            }
            // reconstruct and compare
            const RunResult rr = run(spec, scheme, kconf);
            double num = 0.0, den = 0.0;
            for (int j = 0; j < m; ++j) {
                double o1v = 0.0, o2v = 0.0;
                for (int k = 0; k < m; ++k) {
                    o1v += e1[k] * basis.vecs[std::size_t(k) * m + j];
                    o2v += e2[k] * basis.vecs[std::size_t(k) * m + j];
                }
                num = std::max({num, std::abs(rr.final_state.g1[j] - o1v),
                                std::abs(rr.final_state.g2[j] - o2v)});
                den = std::max({den, std::abs(o1v), std::abs(o2v)});
            }
            worst = std::max(worst, num / den);
        }
    }
    log << "max relative deviation from the per-mode recursion = " << worst << " (tol 1e-10)";
    return worst <= 1e-10;
}

// --------------------------------------------------------------------------
// Table-comparison helper for criteria 6 and 7
struct TableTarget {
    std::vector<double> e1, e2, rate1;  // target values, coarse tau first
};

struct TableOutcome {
    bool ok = true;
    std::string detail;
};

TableOutcome check_table(const ConvergenceReport& rep, const TableTarget& target, double e_band,
                         double rate_band) {
    TableOutcome out;
    std::ostringstream d;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const bool ok1 = close_rel(rep.rows[i].e1, target.e1[i], e_band);
        const bool ok2 = close_rel(rep.rows[i].e2, target.e2[i], e_band);
        if (!ok1 || !ok2) out.ok = false;
        d << "  tau=" << format_double(rep.rows[i].tau) << " E1=" << rep.rows[i].e1 << " (target "
          << target.e1[i] << (ok1 ? " ok" : " OFF") << ") E2=" << rep.rows[i].e2 << " (target "
          << target.e2[i] << (ok2 ? " ok" : " OFF") << ")";
        if (i >= 1) {
            const bool okr = std::abs(rep.rows[i].rate1 - target.rate1[i - 1]) <= rate_band;
            if (!okr) out.ok = false;
            d << " rate1=" << rep.rows[i].rate1 << " (target " << target.rate1[i - 1]
              << (okr ? " ok" : " OFF") << ")";
        }
        d << "\n";
    }
    out.detail = d.str();
    return out;
}

// 6. BE convergence table reproduction
bool crit6(std::ostringstream& log) {
    ExperimentConfig cfg;
    cfg.schemes = {Scheme::BE, Scheme::FastBE};
    cfg.alpha1 = 0.3;
    cfg.alpha2 = 0.6;
    cfg.coupling_a = 2.0;
    cfg.grid_m = 255;
    cfg.t_final = 1.0;
    cfg.taus = {1.0 / 100, 1.0 / 200, 1.0 / 400, 1.0 / 800, 1.0 / 1600};
    cfg.ref_tau = 1.0 / 3200;
    cfg.initial = InitialData::poly_sin;
    const auto reports = run_convergence(cfg);

    const TableTarget target{{8.434e-6, 4.141e-6, 2.001e-6, 9.335e-7, 4.000e-7},
                             {1.347e-4, 6.609e-5, 3.193e-5, 1.489e-5, 6.379e-6},
                             {1.0263, 1.0489, 1.1003, 1.2228}};
    const TableOutcome cls = check_table(reports[0], target, 0.25, 0.1);
    const TableOutcome fst = check_table(reports[1], target, 0.25, 0.1);
    bool agree = true;
    double worst_pair = 0.0;
    for (std::size_t i = 0; i < cfg.taus.size(); ++i) {
        worst_pair = std::max({worst_pair,
                               std::abs(reports[0].rows[i].e1 - reports[1].rows[i].e1) /
                                   reports[0].rows[i].e1,
                               std::abs(reports[0].rows[i].e2 - reports[1].rows[i].e2) /
                                   reports[0].rows[i].e2});
    }
    agree = worst_pair <= 0.01;
    log << "BE-vs-FastBE max E deviation = " << worst_pair << (agree ? " (<=1% ok)" : " (OFF)")
        << "\nBE rows:\n"
        << cls.detail << "FastBE rows:\n"
        << fst.detail;
    return cls.ok && fst.ok && agree;
}

// 7. SBD convergence table reproduction
bool crit7(std::ostringstream& log) {
    bool all_ok = true;
    struct Case {
        double a1, a2;
        InitialData init;
        TableTarget target;
        const char* label;
    };
    const Case cases[] = {
        {0.2, 0.4, InitialData::indicator,
         {{3.262e-6, 7.860e-7, 1.910e-7, 4.511e-8, 8.992e-9},
          {5.178e-6, 1.246e-6, 3.024e-7, 7.139e-8, 1.422e-8},
          {2.0534, 2.0412, 2.0817, 2.3269}},
         "(0.2,0.4) data (b)"},
        {0.3, 0.4, InitialData::poly_sin,
         {{9.445e-6, 2.274e-6, 5.521e-7, 1.304e-7, 2.598e-8},
          {3.976e-5, 9.551e-6, 2.317e-6, 5.467e-7, 1.090e-7},
          {2.0546, 2.0419, 2.0825, 2.3273}},
         "(0.3,0.4) data (a)"},
    };
    for (const Case& c : cases) {
        ExperimentConfig cfg;
        cfg.schemes = {Scheme::SBD, Scheme::FastSBD};
        cfg.alpha1 = c.a1;
        cfg.alpha2 = c.a2;
        cfg.coupling_a = -1.0;
        cfg.grid_m = 1023;
        cfg.t_final = 1.0;
        cfg.taus = {1.0 / 20, 1.0 / 40, 1.0 / 80, 1.0 / 160, 1.0 / 320};
        cfg.ref_tau = 1.0 / 640;
        cfg.initial = c.init;
        const auto reports = run_convergence(cfg);
        const TableOutcome cls = check_table(reports[0], c.target, 0.25, 0.15);
        const TableOutcome fst = check_table(reports[1], c.target, 0.25, 0.15);
        all_ok = all_ok && cls.ok && fst.ok;
        log << c.label << " SBD rows:\n" << cls.detail << c.label << " FastSBD rows:\n"
            << fst.detail;
    }
    return all_ok;
}

// --------------------------------------------------------------------------
// 8. Fast-vs-classical drift bound at the long-horizon configuration (slow)
bool crit8(std::ostringstream& log) {
    bool ok = true;
    for (const auto& [a1, a2] : {std::pair{0.3, 0.8}, {0.4, 0.7}, {0.5, 0.6}}) {
        ProblemSpec spec;
        spec.alpha1 = a1;
        spec.alpha2 = a2;
        spec.coupling_a = -1.0;
        spec.grid_m = 1023;
        spec.t_final = 10.0;
        spec.n_steps = 20000;
        spec.initial = InitialData::poly_sin;
        const double h = spec.h();

        const RunResult fast = run(spec, Scheme::FastSBD);
        const RunResult classical = run(spec, Scheme::SBD);

        ProblemSpec ref_spec = spec;
        ref_spec.n_steps = 40000;  // tau = 1/4000
        const RunResult ref = run(ref_spec, Scheme::FastSBD);

        const StateField f0 = initial_field(spec);
        const double data_norm = l2_norm(f0.g1, h) + l2_norm(f0.g2, h);
        const double max_eps = std::max(fast.kernel_eps1, fast.kernel_eps2);
        const double bound = 10.0 * double(spec.n_steps) * max_eps * data_norm;

        std::vector<double> d(spec.grid_m);
        auto norm_diff = [&](const std::vector<double>& x, const std::vector<double>& y) {
            for (int j = 0; j < spec.grid_m; ++j) d[j] = x[j] - y[j];
            return l2_norm(d, h);
        };
        const double drift = norm_diff(fast.final_state.g1, classical.final_state.g1) +
                             norm_diff(fast.final_state.g2, classical.final_state.g2);
        const double e1_fast = norm_diff(fast.final_state.g1, ref.final_state.g1);
        const double e2_fast = norm_diff(fast.final_state.g2, ref.final_state.g2);
        const double e1_cls = norm_diff(classical.final_state.g1, ref.final_state.g1);
        const double e2_cls = norm_diff(classical.final_state.g2, ref.final_state.g2);

        const bool drift_ok = drift <= bound;
        const bool err_ok = e1_fast <= 3.0 * e1_cls && e2_fast <= 3.0 * e2_cls;
        ok = ok && drift_ok && err_ok;
        log << "(" << a1 << "," << a2 << "): drift=" << drift << " bound=" << bound
            << (drift_ok ? " ok" : " OFF") << "; E1 fast/cls=" << e1_fast << "/" << e1_cls
            << " E2 fast/cls=" << e2_fast << "/" << e2_cls << (err_ok ? " ok" : " OFF")
            << " [cls loop " << classical.loop_seconds << "s, fast loop " << fast.loop_seconds
            << "s]\n  (E values are limited by the shared tau/2 reference; the drift bound is "
               "the reference-free check)\n";
    }
    return ok;
}

// --------------------------------------------------------------------------
// 9. Complexity shape
bool crit9(std::ostringstream& log) {
    ExperimentConfig cfg;
    cfg.schemes = {Scheme::FastBE, Scheme::FastSBD, Scheme::BE, Scheme::SBD};
    cfg.alpha1 = 0.3;
    cfg.alpha2 = 0.6;
    cfg.coupling_a = 2.0;
    cfg.grid_m = 255;
    cfg.t_final = 1.0;
    cfg.initial = InitialData::poly_sin;
    // fixed kernel size across N: the O(N * Np) shape claim is per kernel,
    // and auto-sizing would grow Np with the horizon
    cfg.kernel.auto_size = false;
    cfg.kernel.be_points = 64;
    cfg.kernel.sbd_points_1 = cfg.kernel.sbd_points_2 = 41;
    const std::vector<long> ns = {100, 200, 400, 800, 1600};
    // best-of-3: wall-clock noise at the small step counts would otherwise
    // dominate the fit
    auto rows = timing_sweep(cfg, ns);
    for (int rep = 0; rep < 2; ++rep) {
        const auto again = timing_sweep(cfg, ns);
        for (std::size_t i = 0; i < rows.size(); ++i)
            rows[i].seconds_loop = std::min(rows[i].seconds_loop, again[i].seconds_loop);
    }

    auto fit_resid = [&](const std::vector<double>& t, bool quadratic) {
        // least squares c for t ~ c*x with x = N or N^2; returns (SSE, R^2)
        double sxx = 0.0, sxt = 0.0, mean = 0.0;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const double x = quadratic ? double(ns[i]) * double(ns[i]) : double(ns[i]);
            sxx += x * x;
            sxt += x * t[i];
            mean += t[i] / double(ns.size());
        }
        const double c = sxt / sxx;
        double sse = 0.0, sst = 0.0;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const double x = quadratic ? double(ns[i]) * double(ns[i]) : double(ns[i]);
            sse += (t[i] - c * x) * (t[i] - c * x);
            sst += (t[i] - mean) * (t[i] - mean);
        }
        return std::pair{sse, 1.0 - sse / sst};
    };

    bool ok = true;
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
        std::vector<double> t;
        for (std::size_t i = 0; i < ns.size(); ++i) t.push_back(rows[s * ns.size() + i].seconds_loop);
        const auto [sse_lin, r2_lin] = fit_resid(t, false);
        const auto [sse_quad, r2_quad] = fit_resid(t, true);
        const bool fast = scheme_is_fast(cfg.schemes[s]);
        bool this_ok;
        if (fast) {
            this_ok = r2_lin >= 0.98;
            log << scheme_name(cfg.schemes[s]) << ": R2(linear)=" << r2_lin
                << (this_ok ? " ok; " : " OFF; ");
        } else {
            this_ok = sse_quad < sse_lin;
            log << scheme_name(cfg.schemes[s]) << ": SSE(quad)=" << sse_quad
                << " < SSE(lin)=" << sse_lin << (this_ok ? " ok; " : " OFF; ");
        }
        ok = ok && this_ok;
    }
    return ok;
}

// --------------------------------------------------------------------------
// 10. Property suites, compact
bool crit10(std::ostringstream& log) {
    bool ok = true;
    // quadrature exactness sample
    {
        std::mt19937 rng(1001);
        std::uniform_real_distribution<double> ua(-0.9, 2.0), ub(-0.9, 3.0);
        for (int trial = 0; trial < 10 && ok; ++trial) {
            const double a = ua(rng), b = ub(rng);
            const int n = 1 + int(trial * 3.9);
            const JacobiRule r = gauss_jacobi(a, b, n);
            const double mu0 = jacobi_moment0(a, b);
            for (int k = 0; k <= 2 * n - 1; ++k) {
                double q = 0.0;
                for (int j = 0; j < n; ++j) q += r.weights[j] * std::pow(r.nodes[j], k);
                if (std::abs(q - jacobi_moment(a, b, k)) > 1e-12 * mu0) ok = false;
            }
        }
        log << (ok ? "quadrature ok; " : "quadrature OFF; ");
    }
    // scaling law and sign pattern
    {
        bool w_ok = true;
        const WeightTable unit = be_weights(0.37, 1.0, 80);
        const WeightTable scaled = be_weights(0.37, 0.013, 80);
        const double s = std::pow(0.013, -0.37);
        for (long i = 0; i <= 80; ++i) {
            if (std::abs(scaled[i] - s * unit[i]) > 1e-13 * std::abs(s * unit[i])) w_ok = false;
            if (i >= 1 && scaled[i] >= 0.0) w_ok = false;
        }
        ok = ok && w_ok;
        log << (w_ok ? "weights ok; " : "weights OFF; ");
    }
    // linearity and determinism
    {
        bool s_ok = true;
        ProblemSpec spec;
        spec.alpha1 = 0.35;
        spec.alpha2 = 0.65;
        spec.coupling_a = -1.0;
        spec.grid_m = 31;
        spec.t_final = 0.2;
        spec.n_steps = 24;
        spec.initial = InitialData::poly_sin;
        for (Scheme scheme : {Scheme::FastBE, Scheme::FastSBD}) {
            const RunResult r1 = run(spec, scheme);
            const RunResult r2 = run(spec, scheme);
            for (int j = 0; j < spec.grid_m; ++j)
                if (r1.final_state.g1[j] != r2.final_state.g1[j]) s_ok = false;
            ProblemSpec sc = spec;
            sc.initial = InitialData::custom;
            const StateField f0 = initial_field(spec);
            sc.custom_g1 = f0.g1;
            sc.custom_g2 = f0.g2;
            for (auto& v : sc.custom_g1) v *= 2.0;
            for (auto& v : sc.custom_g2) v *= 2.0;
            const RunResult r3 = run(sc, scheme);
            for (int j = 0; j < spec.grid_m; ++j)
                if (std::abs(r3.final_state.g1[j] - 2.0 * r1.final_state.g1[j]) >
                    1e-12 * std::abs(2.0 * r1.final_state.g1[j]) + 1e-300)
                    s_ok = false;
        }
        ok = ok && s_ok;
        log << (s_ok ? "solver ok; " : "solver OFF; ");
    }
    // CSV round-trip and rate formula
    {
        bool c_ok = true;
        const WeightTable t = sbd_weights(0.61, 0.007, 25);
        std::ostringstream out;
        write_weights_csv(out, t);
        std::istringstream in(out.str());
        const auto rows = read_csv(in);
        for (std::size_t i = 0; i < t.size(); ++i)
            if (std::stod(rows[i + 1][1]) != t[i]) c_ok = false;
        const auto r = compute_rates({{0.5, 8.0}, {0.25, 2.0}});
        if (std::abs(r[0] - 2.0) > 1e-12) c_ok = false;
        ok = ok && c_ok;
        log << (c_ok ? "csv+rates ok" : "csv+rates OFF");
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    bool skip_slow = false;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--skip-slow") == 0) skip_slow = true;
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    const std::vector<Criterion> criteria = {
        {1, "weight oracle equivalence", false, crit1},
        {2, "BE exactness window", false, crit2},
        {3, "SBD kernel error curve", false, crit3},
        {4, "history recursion fidelity", false, crit4},
        {5, "mode-space oracle", false, crit5},
        {6, "BE convergence table", false, crit6},
        {7, "SBD convergence tables", false, crit7},
        {8, "fast-vs-classical drift bound", true, crit8},
        {9, "complexity shape", false, crit9},
        {10, "property suites", false, crit10},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (only && c.id != only) continue;
        if (!only && skip_slow && c.slow) {
            std::printf("SKIP criterion %2d (%s): slow suite\n", c.id, c.name.c_str());
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        std::ostringstream log;
        bool ok = false;
        try {
            ok = c.fn(log);
        } catch (const std::exception& e) {
            log << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %2d (%s) [%.1fs]\n  %s\n", ok ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), secs, log.str().c_str());
        if (!ok) ++failures;
    }
    return failures;
}
