// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "qmeas/correlations.hpp"
#include "qmeas/measured_qubit.hpp"
#include "qmeas/nonmarkov.hpp"
#include "qmeas/sweep.hpp"
#include "qmeas/tradeoff.hpp"
#include "qmeas/xstate_model.hpp"

using namespace qmeas;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? " ok" : " FAILED");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

MeasuredQubitConfig resonant(double V0, double lambda_t) {
  MeasuredQubitConfig c;
  c.E1 = 0.0;
  c.E2 = 1.0;
  c.E = 0.0;
  c.tau = 1.0;
  c.Er = lambda_t > 0.0 ? std::sqrt(1.0 / (2.0 * lambda_t)) : 1e300;
  c.V0 = V0;
  c.omega = 1.0;
  return c;
}

MeasurementAttributes attrs(double theta, double p, double t) {
  MeasurementAttributes a;
  a.theta = theta;
  a.p = p;
  a.t = t;
  return a;
}

std::vector<double> witness_thetas() {
  std::vector<double> th;
  for (int k = 1; k <= 181; ++k) th.push_back(std::numbers::pi / 2.0 * k / 181.0);
  return th;
}

const std::vector<double> kWitnessP{0.0, 0.05, 0.2, 0.5, 0.7, 1.0};

Outcome rabi_limit() {
  Outcome o;
  const DerivedDynamics d = derive(resonant(0.8, 0.0));
  double err_p11 = 0.0, err_sum = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 2000.0;
    const SurvivalProbabilities p = survival_probabilities(d, t);
    err_p11 = std::max(err_p11, std::abs(p.P11 - std::cos(0.8 * t) * std::cos(0.8 * t)));
    err_sum = std::max(err_sum, std::abs(p.P11 + p.P10 - 1.0));
  }
  o.check(d.lambda_t == 0.0, "lambda_t = 0");
  o.check(err_p11 <= 1e-12, "max|P11 - cos^2| = " + num(err_p11));
  o.check(err_sum <= 1e-12, "max|P11 + P10 - 1| = " + num(err_sum));
  return o;
}

Outcome dynamics_oracle() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int coherent = 0, incoherent = 0;
  for (int draw = 0; draw < 100; ++draw) {
    const double lt = 0.1 + 7.9 * u(rng);
    const double ratio = draw % 2 == 0 ? 1.05 + 2.0 * u(rng) : 0.05 + 0.9 * u(rng);
    const double V0 = ratio * lt / 4.0;
    const double t = 3.0 * u(rng);
    const MeasuredQubitConfig c = resonant(V0, lt);
    const DerivedDynamics d = derive(c);
    (classify(d) == Regime::Coherent ? coherent : incoherent)++;
    const SurvivalProbabilities p = survival_probabilities(d, t);
    const auto psi = oracle::rk4({c.E1, c.E2, d.lambda1, d.lambda2, c.V0, c.omega}, {Complex(0.0), Complex(1.0)}, t);
    worst = std::max({worst, std::abs(p.P11 - std::norm(psi[1])), std::abs(p.P10 - std::norm(psi[0]))});
  }
  o.check(worst <= 1e-6, "RK4 max deviation " + num(worst) + " over 100 draws");
  o.check(coherent > 0 && incoherent > 0,
          "regimes covered (" + std::to_string(coherent) + " coherent, " + std::to_string(incoherent) + " incoherent)");

  double jump = 0.0, midpoint = 0.0, step6 = 0.0;
  for (double lt : {0.4, 1.0, 4.0}) {
    const double V0 = lt / 4.0;
    for (double t : {0.3, 1.0, 2.5}) {
      const SurvivalProbabilities at = survival_probabilities(derive(resonant(V0, lt)), t);
      const SurvivalProbabilities hi = survival_probabilities(derive(resonant(V0 + 1e-9, lt)), t);
      const SurvivalProbabilities lo = survival_probabilities(derive(resonant(V0 - 1e-9, lt)), t);
      jump = std::max({jump, std::abs(hi.P11 - at.P11), std::abs(lo.P11 - at.P11), std::abs(hi.P10 - at.P10),
                       std::abs(lo.P10 - at.P10)});
      const SurvivalProbabilities hi6 = survival_probabilities(derive(resonant(V0 + 1e-6, lt)), t);
      const SurvivalProbabilities lo6 = survival_probabilities(derive(resonant(V0 - 1e-6, lt)), t);
      midpoint = std::max({midpoint, std::abs(0.5 * (hi6.P11 + lo6.P11) - at.P11),
                           std::abs(0.5 * (hi6.P10 + lo6.P10) - at.P10)});
      step6 = std::max({step6, std::abs(hi6.P11 - lo6.P11), std::abs(hi6.P10 - lo6.P10)});
    }
  }
  o.check(jump <= 1e-8, "exceptional-point one-sided limits within " + num(jump));
  o.check(midpoint <= 1e-8, "+-1e-6 midpoint within " + num(midpoint) + " (raw +-1e-6 spread " + num(step6) + ")");
  return o;
}

Outcome channel_equivalence() {
  Outcome o;
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double entry = 0.0, spec = 0.0;
  for (int draw = 0; draw < 200; ++draw) {
    XStateParams p = XStateParams::from_g(u(rng), 2.0 * u(rng) - 1.0, 2.0 * u(rng));
    const double t = 3.0 * u(rng);
    const auto direct = x_state(p, t);
    const auto kraus = phase_flip_apply(x_state(p, 0.0), p.gamma, t);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) entry = std::max(entry, std::abs(direct(i, j) - kraus(i, j)));
    const Spectrum<4> analytic = x_state_spectrum(p, t);
    const Eigen::VectorXd ref = oracle::eigenvalues(oracle::to_eigen(direct));
    for (int k = 0; k < 4; ++k) spec = std::max(spec, std::abs(analytic.values[k] - ref(k)));
  }
  o.check(entry <= 1e-12, "Kraus entrywise max " + num(entry));
  o.check(spec <= 1e-10, "spectrum vs eigensolver max " + num(spec));
  return o;
}

struct BellScan {
  std::size_t violated = 0;
  double mean_t = 0.0, mean_c = 0.0;
  double min_c_at_t1 = 2.0;
};

BellScan bell_scan(double g) {
  BellScan s;
  for (int ic = 0; ic <= 100; ++ic)
    for (int it = 0; it <= 100; ++it) {
      const double c = ic / 100.0, t = it / 100.0;
      if (!bell_chsh(XStateParams::from_g(c, critical_c3(c, g, t), g), t).violated) continue;
      ++s.violated;
      s.mean_t += t;
      s.mean_c += c;
      if (it == 100) s.min_c_at_t1 = std::min(s.min_c_at_t1, c);
    }
  if (s.violated) {
    s.mean_t /= static_cast<double>(s.violated);
    s.mean_c /= static_cast<double>(s.violated);
  }
  return s;
}

Outcome bell_surface() {
  Outcome o;
  const double b = bell_chsh(XStateParams::from_g(1.0, 0.0, 0.7), 0.0).B;
  o.check(std::abs(b - 2.0 * std::numbers::sqrt2) <= 1e-12, "B(0, 1, 0) - 2 sqrt2 = " + num(b - 2.0 * std::numbers::sqrt2));
  for (double g : {0.7, 0.05}) {
    const BellScan s = bell_scan(g);
    o.check(s.violated > 0 && s.mean_t < 0.5 && s.mean_c > 0.5,
            "g=" + num(g) + " violated cells " + std::to_string(s.violated) + " at mean t " + num(s.mean_t) +
                ", mean c " + num(s.mean_c));
    if (g == 0.7)
      o.check(s.min_c_at_t1 >= 0.35 - 0.01,
              "t=1 threshold c " + (s.min_c_at_t1 > 1.0 ? std::string("none on [0,1]") : num(s.min_c_at_t1)));
  }
  return o;
}

Outcome correlation_orderings() {
  Outcome o;
  const std::vector<double> ps{0.0, 0.05, 0.2, 0.5};
  for (auto [c, c3] : {std::pair{0.2, 0.6}, std::pair{0.1, 0.7}}) {
    const XStateParams xs = XStateParams::from_g(c, c3, 0.6);
    double worst_c = 0.0, worst_d = 0.0;
    std::vector<std::vector<CorrelationResult>> r(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k)
      for (int it = 0; it <= 100; ++it)
        r[k].push_back(quantum_discord(xs, attrs(0.0, ps[k], it / 100.0), ReductionMode::FirstPrinciples));
    for (std::size_t k = 1; k < ps.size(); ++k)
      for (int it = 0; it <= 100; ++it) {
        worst_c = std::max(worst_c, r[k][it].classical - r[k - 1][it].classical);
        worst_d = std::max(worst_d, r[k - 1][it].discord - r[k][it].discord);
      }
    const double sep_c = r[0][100].classical - r[3][100].classical;
    const double sep_d = r[3][100].discord - r[0][100].discord;
    const std::string tag = "(" + num(c) + ", " + num(c3) + ")";
    o.check(worst_c <= 0.0, tag + " C nonincreasing (max rise " + num(worst_c) + ")");
    o.check(worst_d <= 0.0, tag + " D nondecreasing (max drop " + num(worst_d) + ")");
    o.check(sep_c > 1e-6 && sep_d > 1e-6, tag + " t=1 separation C " + num(sep_c) + ", D " + num(sep_d));
  }
  return o;
}

Outcome discord_identity() {
  Outcome o;
  double identity = 0.0, min_c = 1.0, min_d = 1.0;
  std::size_t points = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k) {
        const double c = (i + 0.5) / 20.0;
        const double c3 = -1.0 + (2.0 - 2.0 * c) * (j + 0.5) / 10.0;
        const double g = 0.2 * k;
        const double t = (i + j + k) % 3 * 0.5;
        const XStateParams xs = XStateParams::from_g(c, c3, g);
        if (!psd_check(x_state(xs, t)).is_psd) continue;
        ++points;
        const CorrelationResult r = quantum_discord(xs, attrs(0.0, 0.0, t), ReductionMode::FirstPrinciples);
        identity = std::max(identity, std::abs(r.discord - (r.mutual - r.classical)));
        min_c = std::min(min_c, r.classical);
        min_d = std::min(min_d, r.discord);
      }
  for (ReductionMode m : {ReductionMode::FirstPrinciples, ReductionMode::AsPublished})
    for (double p : {0.0, 0.2, 0.7})
      for (int it = 0; it <= 20; ++it) {
        const CorrelationResult r = quantum_discord(XStateParams::from_g(0.3, 0.4, 0.6), attrs(0.0, p, it / 20.0), m);
        identity = std::max(identity, std::abs(r.discord - (r.mutual - r.classical)));
      }
  o.check(points == 1000, std::to_string(points) + " physical points");
  o.check(identity <= 1e-12, "max|D - (I - C)| " + num(identity));
  o.check(min_c >= -1e-12 && min_d >= -1e-12, "min C " + num(min_c) + ", min D " + num(min_d));
  return o;
}

Outcome tradeoff_map_criterion() {
  Outcome o;
  const std::vector<double> grid = linspace(0.0, 1.0, 201);
  const double theta = std::numbers::pi / 2.0;
  const XStateParams b = XStateParams::from_g(0.4, 0.1, 0.5);
  const XStateParams a = XStateParams::from_g(0.1, 0.7, 0.5);
  const TradeoffMap mb = tradeoff_map(b, theta, grid, grid, ReductionMode::FirstPrinciples);
  const TradeoffMap ma = tradeoff_map(a, theta, grid, grid, ReductionMode::FirstPrinciples);
  const TradeoffMap pb = tradeoff_map(b, theta, grid, grid, ReductionMode::AsPublished);
  o.check(mb.violation_count() > 0, "(0.4, 0.1) negative gap cells " + std::to_string(mb.violation_count()) +
                                        ", min gap " + num(mb.min_gap()) + " [as-published: " +
                                        std::to_string(pb.violation_count()) + " cells]");
  o.check(ma.min_gap() >= -1e-10, "(0.1, 0.7) min gap " + num(ma.min_gap()));
  bool zero = true;
  for (ReductionMode m : {ReductionMode::FirstPrinciples, ReductionMode::AsPublished})
    for (const XStateParams& xs : {a, b}) zero = zero && tradeoff_point(xs, theta, 0.0, 0.0, m).gap == 0.0;
  o.check(zero, "gap(0, 0) == 0");
  return o;
}

Outcome witness() {
  Outcome o;
  const std::vector<double> ts = linspace(0.0, 1.0, 101);
  const std::vector<double> ths = witness_thetas();
  double at_zero = 0.0;
  for (auto [c, c3] : {std::pair{0.1, 0.8}, std::pair{0.4, 0.1}})
    for (double p : kWitnessP)
      for (double th : ths)
        for (ReductionMode m : {ReductionMode::FirstPrinciples, ReductionMode::AsPublished})
          at_zero = std::max(at_zero,
                             std::abs(fidelity_difference(XStateParams::from_g(c, c3, 0.1), attrs(th, p, 0.0), 0.0, 0.1, m).delta));
  o.check(at_zero == 0.0, "max|Delta(0, tau)| " + num(at_zero));

  auto map = [&](double c, double c3, double p) {
    return nonmarkov_map(XStateParams::from_g(c, c3, 0.1), p, ts, ths, 0.1, ReductionMode::FirstPrinciples);
  };
  double min_p0 = 1.0;
  for (auto [c, c3] : {std::pair{0.1, 0.8}, std::pair{0.4, 0.1}}) {
    const NonMarkovMap m0 = map(c, c3, 0.0);
    for (const NonMarkovPoint& pt : m0.points) min_p0 = std::min(min_p0, pt.value.delta);
  }
  o.check(min_p0 >= -1e-10, "p=0 min Delta " + num(min_p0));

  std::string areas;
  bool monotone = true, nonempty = false;
  std::size_t prev = 0;
  for (double p : kWitnessP) {
    const std::size_t n = map(0.1, 0.8, p).summary.negative_cells;
    areas += (areas.empty() ? "" : ",") + std::to_string(n);
    monotone = monotone && n >= prev;
    nonempty = nonempty || n > 0;
    prev = n;
  }
  o.check(nonempty && monotone, "(0.1, 0.8) areas " + areas);

  std::size_t edge = 0, middle = 0;
  for (double p : kWitnessP) {
    const NonMarkovMap m = map(0.4, 0.1, p);
    for (const NonMarkovPoint& pt : m.points) {
      if (!pt.value.non_markovian) continue;
      const double deg = pt.theta * 180.0 / std::numbers::pi;
      (deg < 15.0 || deg > 75.0 ? edge : middle)++;
    }
  }
  o.check(edge > 0 && middle == 0, "(0.4, 0.1) negative cells " + std::to_string(edge) + " at theta<15 or >75, " +
                                       std::to_string(middle) + " between");
  return o;
}

Outcome fidelity_consistency() {
  Outcome o;
  std::mt19937_64 rng(99);
  double closed = 0.0, lib = 0.0, bound = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const auto r1 = oracle::random_density<2>(rng);
    const auto r2 = oracle::random_density<2>(rng);
    const double ref = oracle::fidelity(oracle::to_eigen(r1), oracle::to_eigen(r2));
    const double f = fidelity(r1, r2).value;
    closed = std::max(closed, std::abs(fidelity_closed_form(r1, r2) - ref));
    lib = std::max(lib, std::abs(f - ref));
    const double t = trace_distance(r1, r2);
    bound = std::max({bound, (1.0 - std::sqrt(f)) - t, t - std::sqrt(std::max(0.0, 1.0 - f))});
  }
  o.check(closed <= 1e-10, "closed form vs sqrt definition max " + num(closed));
  o.check(lib <= 1e-10, "fidelity() vs sqrt definition max " + num(lib));
  o.check(bound <= 1e-12, "Fuchs-van de Graaf worst excess " + num(bound));
  return o;
}

Outcome mode_audit() {
  Outcome o;
  double diff = 0.0;
  std::string detail;
  for (auto [c, c3] : {std::pair{0.2, 0.6}, std::pair{0.1, 0.7}, std::pair{0.3, 0.4}, std::pair{0.4, 0.2}}) {
    const XStateParams xs = XStateParams::from_g(c, c3, 0.6);
    const CorrelationResult fp = quantum_discord(xs, attrs(0.0, 0.0, 0.0), ReductionMode::FirstPrinciples);
    const CorrelationResult ap = quantum_discord(xs, attrs(0.0, 0.0, 0.0), ReductionMode::AsPublished);
    diff = std::max({diff, std::abs(fp.classical - ap.classical), std::abs(fp.discord - ap.discord)});
    if (c == 0.2) detail = " (at (0.2, 0.6): C " + num(ap.classical) + " vs " + num(fp.classical) + ")";
  }
  o.check(diff <= 1e-10, "p=0, t=0 coincidence max diff " + num(diff) + detail);

  const SweepGrid grid({Axis::list("p", {0.0, 0.05, 0.2, 0.5}), Axis::range("t", 0.0, 1.0, 101)},
                       {{"c", 0.2}, {"c3", 0.6}, {"g", 0.6}});
  bool ok = true;
  std::string msg;
  try {
    const AuditReport rep = audit_report(grid);
    const std::string json = audit_json(rep, "audit.csv");
    ok = rep.summary.points == grid.size() && std::isfinite(rep.summary.max_abs_diff_C) &&
         std::isfinite(rep.summary.max_abs_diff_D) && json.find("\"max_abs_diff_C\"") != std::string::npos;
    msg = "audit over " + std::to_string(rep.summary.points) + " points, max |dC| " + num(rep.summary.max_abs_diff_C) +
          ", max |dD| " + num(rep.summary.max_abs_diff_D);
  } catch (const std::exception& e) {
    ok = false;
    msg = std::string("audit threw: ") + e.what();
  }
  o.check(ok, msg);
  return o;
}

std::vector<std::vector<std::string>> figure_invocations() {
  std::vector<std::vector<std::string>> runs;
  std::vector<fs::path> scripts;
  for (const auto& e : fs::directory_iterator(fs::path(QMEAS_SOURCE_DIR) / "figures"))
    if (e.path().extension() == ".sh") scripts.push_back(e.path());
  std::sort(scripts.begin(), scripts.end());
  for (const fs::path& s : scripts) {
    std::ifstream in(s);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.starts_with("run ")) continue;
      std::istringstream words(line.substr(4));
      std::vector<std::string> args;
      for (std::string w; words >> w;) args.push_back(w);
      runs.push_back(args);
    }
  }
  return runs;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// name -> CSV bytes for every table one pass writes
std::map<std::string, std::string> figure_pass(const std::vector<std::vector<std::string>>& runs, const fs::path& dir,
                                               const std::string& threads, bool& ok) {
  fs::create_directories(dir);
  for (const auto& r : runs) {
    std::vector<std::string> args(r.begin() + 1, r.end());
    args.insert(args.end(), {"-o", (dir / (r[0] + ".csv")).string(), "--threads", threads});
    std::ostringstream out, err;
    if (cli::parse_and_run(args, {}, out, err) != 0) {
      ok = false;
      std::fprintf(stderr, "invocation %s failed: %s", r[0].c_str(), err.str().c_str());
    }
  }
  std::map<std::string, std::string> tables;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") tables[e.path().filename().string()] = slurp(e.path());
  return tables;
}

Outcome determinism() {
  Outcome o;
  const auto runs = figure_invocations();
  std::random_device rd;
  const fs::path root = fs::temp_directory_path() / ("qmeas_acceptance_" + std::to_string(rd()));
  bool ok = true;
  const auto first = figure_pass(runs, root / "a", "1", ok);
  const auto second = figure_pass(runs, root / "b", "1", ok);
  const auto eight = figure_pass(runs, root / "c", "8", ok);
  std::error_code ec;
  fs::remove_all(root, ec);
  o.check(ok && runs.size() >= 12, std::to_string(runs.size()) + " figure invocations ran");
  o.check(!first.empty() && first == second, std::to_string(first.size()) + " tables identical across two runs");
  o.check(!first.empty() && first == eight, "identical at threads 1 and 8");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Rabi limit", rabi_limit},
      {"dynamics oracle", dynamics_oracle},
      {"channel equivalence", channel_equivalence},
      {"Bell surface", bell_surface},
      {"correlation orderings", correlation_orderings},
      {"discord identity and positivity", discord_identity},
      {"tradeoff map", tradeoff_map_criterion},
      {"non-Markovianity witness", witness},
      {"fidelity and trace distance", fidelity_consistency},
      {"mode audit", mode_audit},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    failed += !o.pass;
    std::printf("criterion %2zu %s: %s | %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria pass\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
