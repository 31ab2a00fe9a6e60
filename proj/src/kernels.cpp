#include <cmath>
#include <limits>
#include <numbers>

#include "qmeas/measured_qubit.hpp"
#include "qmeas/nonmarkov.hpp"
#include "qmeas/sweep.hpp"
#include "qmeas/tradeoff.hpp"

namespace qmeas {

namespace {

ColumnSpec real(std::string name) { return {std::move(name), ColumnKind::Real, {}}; }
ColumnSpec boolean(std::string name) { return {std::move(name), ColumnKind::Boolean, {}}; }
ColumnSpec mode_column() { return {"mode", ColumnKind::Label, {"as-published", "first-principles"}}; }

double mode_index(ReductionMode m) { return m == ReductionMode::AsPublished ? 0.0 : 1.0; }

XStateParams xparams(double c, double c3, double g) { return XStateParams::from_g(c, c3, g); }

double effective_c3(bool critical, double c, double c3, double g, double t) {
  return critical ? critical_c3(c, g, t) : c3;
}

class BellKernel final : public SweepKernel {
 public:
  explicit BellKernel(bool critical) : critical_(critical) {}
  std::string name() const override { return "bell"; }
  std::vector<std::string> parameters() const override { return {"g", "c", "c3", "t"}; }
  std::map<std::string, double> defaults() const override {
    if (critical_) return {{"c3", std::numeric_limits<double>::quiet_NaN()}};
    return {};
  }
  std::vector<ColumnSpec> columns() const override {
    return {real("t"), real("c"), real("c3"), real("B1"), real("B2"), real("B"), boolean("violated")};
  }
  std::uint32_t evaluate(std::span<const double> in, std::span<double> out) const override {
    const double g = in[0], c = in[1], t = in[3];
    const double c3 = effective_c3(critical_, c, in[2], g, t);
    const BellResult b = bell_chsh(xparams(c, c3, g), t);
    out[0] = t;
    out[1] = c;
    out[2] = c3;
    out[3] = b.B1;
    out[4] = b.B2;
    out[5] = b.B;
    out[6] = b.violated;
    return 0;
  }

 private:
  bool critical_;
};

class CorrelationsKernel final : public SweepKernel {
 public:
  explicit CorrelationsKernel(const KernelOptions& o) : opts_(o) {}
  std::string name() const override { return "correlations"; }
  std::vector<std::string> parameters() const override { return {"p", "c", "c3", "g", "t"}; }
  std::map<std::string, double> defaults() const override {
    if (opts_.critical_c3) return {{"c3", std::numeric_limits<double>::quiet_NaN()}};
    return {};
  }
  std::vector<ColumnSpec> columns() const override {
    return {real("t"),         real("p"), real("g"), real("c"), real("c3"), mode_column(),
            real("theta_opt"), real("C"), real("D"), real("I"), boolean("clamped_flag")};
  }
  std::uint32_t evaluate(std::span<const double> in, std::span<double> out) const override {
    const double p = in[0], c = in[1], g = in[3], t = in[4];
    const double c3 = effective_c3(opts_.critical_c3, c, in[2], g, t);
    MeasurementAttributes a;
    a.p = p;
    a.t = t;
    const CorrelationResult r = quantum_discord(xparams(c, c3, g), a, opts_.mode, opts_.optimizer);
    out[0] = t;
    out[1] = p;
    out[2] = g;
    out[3] = c;
    out[4] = c3;
    out[5] = mode_index(opts_.mode);
    out[6] = r.theta_opt;
    out[7] = r.classical;
    out[8] = r.discord;
    out[9] = r.mutual;
    out[10] = r.clamped;
    return (r.clamped ? kFlagClamped : 0u) | (r.nonphysical ? kFlagNonphysical : 0u) |
           (r.undefined ? kFlagUndefined : 0u);
  }

 private:
  KernelOptions opts_;
};

class TradeoffKernel final : public SweepKernel {
 public:
  explicit TradeoffKernel(ReductionMode mode) : mode_(mode) {}
  std::string name() const override { return "tradeoff"; }
  std::vector<std::string> parameters() const override { return {"c", "c3", "g", "theta", "t", "p"}; }
  std::map<std::string, double> defaults() const override { return {{"theta", std::numbers::pi / 2.0}}; }
  std::vector<ColumnSpec> columns() const override {
    return {real("t"),   real("p"),   real("Di"),        real("nu"),
            real("gain"), real("gap"), boolean("violated"), boolean("projected_flag")};
  }
  std::uint32_t evaluate(std::span<const double> in, std::span<double> out) const override {
    const TradeoffPoint pt = tradeoff_point(xparams(in[0], in[1], in[2]), in[3], in[4], in[5], mode_);
    out[0] = pt.t;
    out[1] = pt.p;
    out[2] = pt.disturbance;
    out[3] = pt.nu;
    out[4] = pt.info_gain;
    out[5] = pt.gap;
    out[6] = pt.violated;
    out[7] = pt.projected;
    return pt.projected ? kFlagProjected : 0u;
  }

 private:
  ReductionMode mode_;
};

class NonMarkovKernel final : public SweepKernel {
 public:
  explicit NonMarkovKernel(ReductionMode mode) : mode_(mode) {}
  std::string name() const override { return "nonmarkov"; }
  std::vector<std::string> parameters() const override {
    return {"c", "c3", "g", "p", "step_tau", "t", "theta"};
  }
  std::map<std::string, double> defaults() const override { return {{"step_tau", 0.1}}; }
  std::vector<ColumnSpec> columns() const override {
    return {real("t"), real("theta_rad"), real("theta_deg"), real("delta"), boolean("non_markovian")};
  }
  std::uint32_t evaluate(std::span<const double> in, std::span<double> out) const override {
    const double t = in[5], theta = in[6];
    const WitnessValue w = fidelity_difference(xparams(in[0], in[1], in[2]),
                                               MeasurementAttributes{theta, 0.0, in[3], 0.0, 1.0}, t, in[4], mode_);
    out[0] = t;
    out[1] = theta;
    out[2] = theta * 180.0 / std::numbers::pi;
    out[3] = w.delta;
    out[4] = w.non_markovian;
    return (w.undefined ? kFlagUndefined : 0u) | (w.projected ? kFlagProjected : 0u);
  }

 private:
  ReductionMode mode_;
};

class QubitDynamicsKernel final : public SweepKernel {
 public:
  std::string name() const override { return "qubit-dynamics"; }
  std::vector<std::string> parameters() const override {
    return {"E1", "E2", "E", "Er", "tau", "V0", "omega", "t"};
  }
  // omega = NaN selects the resonant drive omega = E2 - E1.
  std::map<std::string, double> defaults() const override {
    return {{"E1", 0.0}, {"E2", 1.0}, {"E", 0.0},   {"Er", 1.0},
            {"tau", 1.0}, {"V0", 1.0}, {"omega", std::numeric_limits<double>::quiet_NaN()}};
  }
  std::vector<ColumnSpec> columns() const override {
    return {real("t"),   real("V0"),  real("lambda_t"),  real("P11"),
            real("P10"), real("norm_loss"), {"regime", ColumnKind::Label, {"coherent", "incoherent", "exceptional"}}};
  }
  std::uint32_t evaluate(std::span<const double> in, std::span<double> out) const override {
    MeasuredQubitConfig cfg;
    cfg.E1 = in[0];
    cfg.E2 = in[1];
    cfg.E = in[2];
    cfg.Er = in[3];
    cfg.tau = in[4];
    cfg.V0 = in[5];
    cfg.omega = std::isnan(in[6]) ? cfg.E2 - cfg.E1 : in[6];
    const double t = in[7];
    const DerivedDynamics d = derive(cfg);
    double loss = 0.0;
    SurvivalProbabilities p;
    if (is_resonant(d)) {
      p = survival_probabilities(d, t);
      loss = norm_loss(d, t);
    } else {
      p = transition_probabilities(d, t);
      loss = 1.0 - p.P11 - p.P10;
    }
    out[0] = t;
    out[1] = cfg.V0;
    out[2] = d.lambda_t;
    out[3] = p.P11;
    out[4] = p.P10;
    out[5] = loss;
    out[6] = static_cast<double>(classify(d));
    return 0;
  }
};

class AuditKernel final : public SweepKernel {
 public:
  explicit AuditKernel(const KernelOptions& o) : opts_(o) {}
  std::string name() const override { return "audit"; }
  std::vector<std::string> parameters() const override { return {"p", "c", "c3", "g", "t"}; }
  std::map<std::string, double> defaults() const override {
    if (opts_.critical_c3) return {{"c3", std::numeric_limits<double>::quiet_NaN()}};
    return {};
  }
  std::vector<ColumnSpec> columns() const override {
    return {real("t"),
            real("p"),
            real("g"),
            real("c"),
            real("c3"),
            real("C_as_published"),
            real("C_first_principles"),
            real("abs_diff_C"),
            real("D_as_published"),
            real("D_first_principles"),
            real("abs_diff_D"),
            boolean("clamped_flag")};
  }
  std::uint32_t evaluate(std::span<const double> in, std::span<double> out) const override {
    const double p = in[0], c = in[1], g = in[3], t = in[4];
    const double c3 = effective_c3(opts_.critical_c3, c, in[2], g, t);
    MeasurementAttributes a;
    a.p = p;
    a.t = t;
    const XStateParams xs = xparams(c, c3, g);
    const CorrelationResult ap = quantum_discord(xs, a, ReductionMode::AsPublished, opts_.optimizer);
    const CorrelationResult fp = quantum_discord(xs, a, ReductionMode::FirstPrinciples, opts_.optimizer);
    out[0] = t;
    out[1] = p;
    out[2] = g;
    out[3] = c;
    out[4] = c3;
    out[5] = ap.classical;
    out[6] = fp.classical;
    out[7] = std::abs(ap.classical - fp.classical);
    out[8] = ap.discord;
    out[9] = fp.discord;
    out[10] = std::abs(ap.discord - fp.discord);
    out[11] = ap.clamped || fp.clamped;
    return (ap.clamped || fp.clamped ? kFlagClamped : 0u) | (ap.nonphysical ? kFlagNonphysical : 0u) |
           (ap.undefined || fp.undefined ? kFlagUndefined : 0u);
  }

 private:
  KernelOptions opts_;
};

}  // namespace

std::vector<std::string> kernel_names() {
  return {"bell", "correlations", "tradeoff", "nonmarkov", "qubit-dynamics", "audit"};
}

std::unique_ptr<SweepKernel> make_kernel(std::string_view name, const KernelOptions& options) {
  if (name == "bell") return std::make_unique<BellKernel>(options.critical_c3);
  if (name == "correlations") return std::make_unique<CorrelationsKernel>(options);
  if (name == "tradeoff") return std::make_unique<TradeoffKernel>(options.mode);
  if (name == "nonmarkov") return std::make_unique<NonMarkovKernel>(options.mode);
  if (name == "qubit-dynamics") return std::make_unique<QubitDynamicsKernel>();
  if (name == "audit") return std::make_unique<AuditKernel>(options);
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

}  // namespace qmeas
