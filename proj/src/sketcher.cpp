#include "pacsketch/sketcher.hpp"

#include <limits>
#include <stdexcept>

namespace pacsketch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ScoredTruth {
  double score = 0.0;
  bool truth = false;
};

std::vector<ScoredTruth> score_all(const ir::Spec& spec, std::span<const ir::Valuation> data,
                                   const ir::ComponentRegistry& reg, ExecPolicy policy) {
  std::vector<ScoredTruth> out(data.size());
  parallel_for(data.size(), policy, [&](std::size_t i) {
    out[i].truth = ir::to_bool(ir::eval_train(spec.spec, data[i], reg));
    out[i].score = ir::to_real(ir::eval_test(spec.score, data[i], reg));
  });
  return out;
}

}  // namespace

ScoreSample build_threshold_samples(const ir::Spec& spec, std::span<const ir::Valuation> data,
                                    const ir::ComponentRegistry& reg, ExecPolicy policy) {
  const auto scored = score_all(spec, data, reg, policy);
  ScoreSample z;
  z.reserve(scored.size());
  for (const auto& s : scored) {
    if (spec.mode == ir::GuaranteeMode::conditional) {
      if (s.truth) z.push_back(s.score);
    } else {
      z.push_back(s.truth ? s.score : -kInf);
    }
  }
  return z;
}

BitSample build_eps_samples(const ir::Spec& spec, std::span<const ir::Valuation> data,
                            const ir::ComponentRegistry& reg, ExecPolicy policy) {
  if (!spec.threshold) throw std::invalid_argument("build_eps_samples: threshold is a hole");
  const double c = *spec.threshold;
  const auto scored = score_all(spec, data, reg, policy);
  BitSample z;
  z.reserve(scored.size());
  for (const auto& s : scored) {
    const bool ok = s.score <= c;
    if (spec.mode == ir::GuaranteeMode::conditional) {
      if (s.truth) z.push_back(ok ? 1 : 0);
    } else {
      z.push_back(!s.truth || ok ? 1 : 0);
    }
  }
  return z;
}

bool SketchReport::any_starved() const {
  for (const auto& h : holes) {
    if (h.starved) return true;
  }
  return false;
}

SketchReport sketch(const SketchJob& job) {
  if (job.program.empty()) throw std::invalid_argument("sketch: empty program");
  ir::validate(job.program, *job.registry);
  if (!ir::is_full_sketch(job.program)) {
    throw std::invalid_argument(
        "sketch: program has a fully concrete specification; its existing threshold and eps "
        "cannot be certified");
  }
  const ir::SpecPartition parts = ir::collect_specs(job.program);
  std::vector<ir::Path> holed = parts.threshold_holed;
  holed.insert(holed.end(), parts.eps_holed.begin(), parts.eps_holed.end());
  const auto order = ir::bottom_up_order(std::move(holed));

  SketchReport report;
  report.completed = job.program;
  if (order.empty()) return report;

  const double share = job.delta / static_cast<double>(order.size());
  for (const ir::Path& path : order) {
    const ir::Spec& spec = ir::spec_at(report.completed, path);
    HoleRecord rec;
    rec.path = path;
    rec.delta_share = share;
    if (!spec.threshold) {
      rec.kind = HoleKind::threshold;
      rec.spec_eps = *spec.eps;
      const ScoreSample z = build_threshold_samples(spec, job.data, *job.registry, job.policy);
      EstimatorConfig cfg;
      cfg.epsilon = *spec.eps;
      cfg.delta = share;
      cfg.rule = job.rule;
      const ThresholdEstimate est = threshold_estimate_detailed(z, cfg);
      rec.value = est.threshold;
      rec.n = est.n;
      rec.k = est.k;
      rec.starved = est.threshold == kInf;
      report.completed = ir::fill_threshold(report.completed, path, rec.value);
    } else {
      rec.kind = HoleKind::eps;
      const BitSample z = build_eps_samples(spec, job.data, *job.registry, job.policy);
      rec.n = z.size();
      rec.nu_hat = z.empty() ? 0.0 : lower_bound_estimate(z, share);
      rec.value = 1.0 - rec.nu_hat;
      rec.starved = rec.value >= 1.0;
      report.completed = ir::fill_eps(report.completed, path, rec.value);
    }
    report.holes.push_back(std::move(rec));
  }
  return report;
}

}  // namespace pacsketch
