#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fraq/block_solver.hpp"
#include "fraq/fast_kernel.hpp"

namespace fraq {

enum class Scheme { BE, FastBE, SBD, FastSBD };

Scheme scheme_from_name(const std::string& name);
std::string scheme_name(Scheme s);
bool scheme_is_fast(Scheme s);
bool scheme_is_sbd(Scheme s);

enum class InitialData { poly_sin, indicator, custom };

/// The two-state problem: orders alpha1, alpha2 in (0,1) (the quadrature
/// acts at exponents 1-alpha1, 1-alpha2), coupling constant a, uniform grid
/// with grid_m interior points on [0, length], n_steps of size
/// t_final/n_steps.
struct ProblemSpec {
    double alpha1 = 0.5;
    double alpha2 = 0.5;
    double coupling_a = 0.0;
    int grid_m = 255;
    double length = 1.0;
    double t_final = 1.0;
    long n_steps = 100;
    InitialData initial = InitialData::poly_sin;
    std::vector<double> custom_g1, custom_g2;  // used when initial == custom

    double tau() const { return t_final / double(n_steps); }
    double h() const { return length / double(grid_m + 1); }
};

struct StateField {
    std::vector<double> g1, g2;
    long step = 0;
};

/// Kernel parameters for the fast schemes. With auto_size the point counts
/// (and the SBD head) grow until the certified compression error over the
/// run horizon meets eps_tol (in units of tau^-alpha), within the rule cap.
struct KernelConfig {
    int be_points = 64;
    int sbd_points_1 = 41;
    int sbd_points_2 = 41;
    int sbd_head = 0;  // 0: default by alpha (15 / 17)
    double eps_tol = 1e-12;
    bool auto_size = true;
};

struct RunResult {
    StateField final_state;
    double loop_seconds = 0.0;
    double setup_seconds = 0.0;
    double kernel_eps1 = 0.0;  // certified max compression error per order
    double kernel_eps2 = 0.0;
};

/// Samples the initial data at the interior nodes. Indicator data uses open
/// intervals; the value at x = 1/2 is 0.
StateField initial_field(const ProblemSpec& spec);

/// Discrete L2 norm sqrt(h * sum v_k^2).
double l2_norm(std::span<const double> v, double h);

/// Advances the whole problem with the chosen scheme. Classical schemes
/// retain the full history (the O(N^2) baseline); fast schemes carry
/// per-node accumulators. The observer, when set, sees every accepted step.
RunResult run(const ProblemSpec& spec, Scheme scheme, const KernelConfig& kconf = {},
              const std::function<void(long, const StateField&)>& observer = nullptr);

// --- single-step entry points (state carries the needed history) ---

/// Classical stepper workspace: full solution history plus factored blocks.
class ClassicalStepper {
public:
    ClassicalStepper(const ProblemSpec& spec, bool sbd);
    void step();  // advances by one time level
    const StateField& state() const { return state_; }
    long step_index() const { return state_.step; }

private:
    void step_be();
    void step_sbd();

    const ProblemSpec spec_;
    bool sbd_;
    DiscreteLaplacian lap_;
    WeightTable d1_, d2_;
    std::optional<BlockSystem> sys_first_, sys_;
    std::vector<std::vector<double>> hist1_, hist2_;  // full history
    StateField state_;
};

/// Fast stepper workspace: exact heads, geometric accumulators, factored
/// blocks, running reconstructed correction weights (SBD).
class FastStepper {
public:
    FastStepper(const ProblemSpec& spec, bool sbd, const KernelConfig& kconf);
    void step();
    const StateField& state() const { return state_; }
    long step_index() const { return state_.step; }
    double kernel_eps1() const { return eps1_; }
    double kernel_eps2() const { return eps2_; }

private:
    void step_be();
    void step_sbd();

    // Running node powers ratio^e, advanced one multiply per step, backing
    // the reconstructed correction weight d_{2,n-1} once n-1 leaves the head.
    struct CorrPowers {
        std::vector<double> p1, p2;
        long exponent = 0;
        double value_at(const FastKernelSBD& k, long e);
    };

    const ProblemSpec spec_;
    bool sbd_;
    DiscreteLaplacian lap_;
    double eps1_ = 0.0, eps2_ = 0.0;
    // BE
    std::optional<FastKernelBE> bk1_, bk2_;
    std::optional<BeHistory> bh1_, bh2_;
    // SBD
    std::optional<FastKernelSBD> sk1_, sk2_;
    std::optional<SbdHistory> sh1_, sh2_;
    CorrPowers corr1_, corr2_;
    std::vector<double> init_g1_, init_g2_;  // G^0 outlives the lag ring
    std::optional<BlockSystem> sys_first_, sys_;
    StateField state_;
};

}  // namespace fraq
