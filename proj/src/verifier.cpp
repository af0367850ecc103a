#include "pacsketch/verifier.hpp"

#include <stdexcept>

#include "pacsketch/sketcher.hpp"

namespace pacsketch {

VerifyReport verify(const ir::Expr& program, std::span<const ir::Valuation> data, double delta,
                    const ir::ComponentRegistry& reg, ExecPolicy policy) {
  if (program.empty()) throw std::invalid_argument("verify: empty program");
  ir::validate(program, reg);
  if (!ir::is_complete(program)) throw std::invalid_argument("verify: program has holes");
  const ir::SpecPartition parts = ir::collect_specs(program);

  VerifyReport report;
  if (parts.all.empty()) return report;
  report.delta_share = delta / static_cast<double>(parts.all.size());
  for (const ir::Path& path : parts.all) {
    const ir::Spec& spec = ir::spec_at(program, path);
    const BitSample z = build_eps_samples(spec, data, reg, policy);
    SpecVerdict v;
    v.path = path;
    v.mode = spec.mode;
    v.eps = *spec.eps;
    v.n = z.size();
    for (auto bit : z) v.violations += bit == 0 ? 1 : 0;
    if (v.eps < 1.0) {
      v.k = compute_k(v.n, v.eps, report.delta_share);
      v.pass = verify_indicator(z, v.eps, report.delta_share);
    } else {
      v.pass = true;  // eps = 1 claims nothing
    }
    report.accepted = report.accepted && v.pass;
    report.specs.push_back(std::move(v));
  }
  return report;
}

bool passert_check(const ir::Expr& assertion, std::span<const ir::Valuation> data, double delta,
                   const ir::ComponentRegistry& reg) {
  if (assertion.empty() || !std::holds_alternative<ir::Spec>(assertion.node().v)) {
    throw std::invalid_argument("passert_check: assertion must be a specification expression");
  }
  return verify(assertion, data, delta, reg, ExecPolicy::serial).accepted;
}

void MonitorConfig::validate() const {
  if (refresh_every == 0 || min_window == 0 || max_age == 0) {
    throw std::invalid_argument("monitor: K, N and T must be positive");
  }
  if (min_window > max_age) throw std::invalid_argument("monitor: N must not exceed T");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("monitor: delta must lie in (0,1)");
}

std::optional<MonitorVerdict> monitor_record(MonitorState& state, const MonitorConfig& cfg,
                                             ir::Valuation example, const ir::Expr& program,
                                             const ir::ComponentRegistry& reg) {
  cfg.validate();
  ++state.arrivals;
  ++state.since_check;
  state.window.emplace_back(state.arrivals, std::move(example));
  while (state.window.size() > cfg.max_age) state.window.pop_front();

  if (state.window.size() < cfg.min_window) return std::nullopt;
  if (state.checked_once && state.since_check < cfg.refresh_every) return std::nullopt;

  std::vector<ir::Valuation> snapshot;
  snapshot.reserve(state.window.size());
  for (const auto& entry : state.window) snapshot.push_back(entry.second);

  MonitorVerdict verdict;
  verdict.timestamp = state.arrivals;
  verdict.window_size = snapshot.size();
  verdict.report = verify(program, snapshot, cfg.delta, reg, ExecPolicy::serial);
  state.checked_once = true;
  state.since_check = 0;
  return verdict;
}

}  // namespace pacsketch
