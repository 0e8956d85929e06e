#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "stomatch/blackbox.hpp"
#include "stomatch/calibration.hpp"
#include "stomatch/instance.hpp"
#include "stomatch/lp.hpp"
#include "stomatch/parallel.hpp"
#include "stomatch/simulator.hpp"

namespace stomatch {

struct RunOptions {
  bool two_sided = false;
  double epsilon = 0.05;
  std::size_t inner_trials = 2000;
  /// Star estimates; one is created from `cache_seed` when null.
  std::shared_ptr<StarEstimateCache> cache;
  std::uint64_t cache_seed = 0;
};

/// One online run of `framework` over n rounds. attn2/attn3 need a
/// calibrated table; two-sided mode is limited to attn1. Throws
/// std::invalid_argument for mismatched inputs before simulating.
TrialRecord run_online(const Instance& instance, const LpSolution& lp, const BlackBox& box, Framework framework,
                       const AttenuationTable& table, Rng& rng, const RunOptions& options = {});

/// K independent runs; trial k uses make_stream(seed, {k}). The serial and
/// parallel paths return identical records.
std::vector<TrialRecord> run_trials(const Instance& instance, const LpSolution& lp, const BlackBox& box,
                                    Framework framework, const AttenuationTable& table, std::size_t trials,
                                    std::uint64_t seed, const RunOptions& options, Execution exec);

// Analytic competitive ratios (n -> infinity).

/// 1 - exp(-alpha).
double ratio_attn1(double alpha);
/// Integral over [0,1] of e^{-x} R(e^{-x}), Gauss-Kronrod to 1e-10.
double ratio_attn2(const std::function<double(double)>& ratio);
/// 1 - h(1) for h' = -h R(h), h(0) = 1, classical RK4 with step 1e-4.
double ratio_attn3(const std::function<double(double)>& ratio);
/// alpha * exp(-alpha).
double ratio_two_sided(double alpha);
/// Solution of h' = -h R(h), h(0) = 1 at x in [0, 1] (same integrator).
double attn3_curve(const std::function<double(double)>& ratio, double x);

/// 1 - (1 - 1/n)^n: the per-vertex match probability cap on gap_instance(n).
double lower_bound_check(int n);

/// Finite-n fraction of f_e each edge is guaranteed to be probed with:
/// attn1 1 - (1 - alpha/n)^n; attn2 sum_t (1/n) g_t R(g_t) with
/// g_t = (1 - 1/n)^(t-1); attn3 sum_t gamma_t alpha_t / n; attn1 two-sided
/// sum_t (alpha/n)(1 - alpha/n)^(t-1)(1 - alpha (t-1)/n).
double guaranteed_fraction(const BlackBoxProfile& profile, int n, Framework framework, bool two_sided);

/// Lower bound on Pr[u safe at round t] for two-sided attn1:
/// (1 - alpha/n)^(t-1) (1 - alpha (t-1)/n).
double two_sided_safe_bound(double alpha, int n, int t);

}  // namespace stomatch
