#include "stomatch/frameworks.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint/integrate/integrate_n_steps.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

namespace stomatch {

namespace {

std::shared_ptr<StarEstimateCache> cache_for(const RunOptions& options) {
  if (options.cache) return options.cache;
  return std::make_shared<StarEstimateCache>(options.cache_seed, options.inner_trials);
}

void check_run(const Instance& instance, const LpSolution& lp, Framework framework, const AttenuationTable& table,
               const RunOptions& options) {
  if (options.two_sided && framework != Framework::attn1) {
    throw std::invalid_argument("two-sided timeouts are only supported with attn1");
  }
  if (lp.flow.size() != instance.edges.size()) throw std::invalid_argument("LP solution does not match the instance");
  check_table(table, instance, framework, true);
}

}  // namespace

TrialRecord run_online(const Instance& instance, const LpSolution& lp, const BlackBox& box, Framework framework,
                       const AttenuationTable& table, Rng& rng, const RunOptions& options) {
  check_run(instance, lp, framework, table, options);
  const OnlineSimulator sim(instance, lp, box, table, cache_for(options), {options.two_sided, options.epsilon});
  return sim.run_trial(rng);
}

std::vector<TrialRecord> run_trials(const Instance& instance, const LpSolution& lp, const BlackBox& box,
                                    Framework framework, const AttenuationTable& table, std::size_t trials,
                                    std::uint64_t seed, const RunOptions& options, Execution exec) {
  check_run(instance, lp, framework, table, options);
  const OnlineSimulator sim(instance, lp, box, table, cache_for(options), {options.two_sided, options.epsilon});
  std::vector<TrialRecord> out(trials);
  for_each_index(trials, exec, [&](std::size_t k) {
    Rng rng = make_stream(seed, {k});
    out[k] = sim.run_trial(rng);
  });
  return out;
}

double ratio_attn1(double alpha) { return 1.0 - std::exp(-alpha); }

double ratio_attn2(const std::function<double(double)>& ratio) {
  auto integrand = [&](double x) { return std::exp(-x) * ratio(std::exp(-x)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-12);
}

double attn3_curve(const std::function<double(double)>& ratio, double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("attn3_curve: x must lie in [0,1]");
  namespace odeint = boost::numeric::odeint;
  constexpr double kStep = 1e-4;
  double h = 1.0;
  const auto steps = static_cast<long>(std::llround(x / kStep));
  if (steps == 0) return h;
  odeint::runge_kutta4<double> stepper;
  odeint::integrate_n_steps(stepper, [&](double y, double& dy, double) { dy = -y * ratio(y); }, h, 0.0,
                            x / static_cast<double>(steps), static_cast<std::size_t>(steps));
  return h;
}

double ratio_attn3(const std::function<double(double)>& ratio) { return 1.0 - attn3_curve(ratio, 1.0); }

double ratio_two_sided(double alpha) { return alpha * std::exp(-alpha); }

double lower_bound_check(int n) {
  if (n < 1) throw std::invalid_argument("lower_bound_check: n must be >= 1");
  return 1.0 - std::pow(1.0 - 1.0 / n, n);
}

double two_sided_safe_bound(double alpha, int n, int t) {
  return std::pow(1.0 - alpha / n, t - 1) * (1.0 - alpha * (t - 1) / n);
}

double guaranteed_fraction(const BlackBoxProfile& profile, int n, Framework framework, bool two_sided) {
  if (n < 1) throw std::invalid_argument("guaranteed_fraction: n must be >= 1");
  if (two_sided) {
    if (framework != Framework::attn1) throw std::invalid_argument("two-sided timeouts are only supported with attn1");
    double s = 0.0;
    for (int t = 1; t <= n; ++t) s += profile.alpha / n * two_sided_safe_bound(profile.alpha, n, t);
    return s;
  }
  if (framework == Framework::attn1) return 1.0 - std::pow(1.0 - profile.alpha / n, n);
  const Schedule s = target_schedule(profile, n, framework);
  double sum = 0.0;
  for (int t = 0; t < n; ++t) sum += s.gamma[t] * s.alpha[t];
  return sum / n;
}

}  // namespace stomatch
