#include "pacsketch/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pacsketch {

using dsl::NodeKind;
using dsl::Op;
using dsl::Prog;

double SymbolicError::evaluate(const std::vector<double>& errs) const {
  double total = 0.0;
  for (const auto& [occ, a] : coeffs) {
    if (static_cast<std::size_t>(occ) >= errs.size()) {
      throw std::invalid_argument("error budget missing for " + dsl::occurrence_name(occ));
    }
    total += a * errs[occ];
  }
  return total;
}

bool SymbolicError::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const auto& kv) { return kv.second == 0.0; });
}

std::string SymbolicError::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [occ, a] : coeffs) {
    if (a == 0.0) continue;
    if (!first) os << " + ";
    first = false;
    if (a != 1.0) os << a << "·";
    os << "e_" << dsl::occurrence_name(occ);
  }
  return first ? "0" : os.str();
}

namespace {

SymbolicError plus(const SymbolicError& a, const SymbolicError& b) {
  SymbolicError out = a;
  for (const auto& [occ, c] : b.coeffs) out.coeffs[occ] += c;
  return out;
}

SymbolicError pointwise_max(const SymbolicError& a, const SymbolicError& b) {
  SymbolicError out = a;
  for (const auto& [occ, c] : b.coeffs) {
    auto [it, inserted] = out.coeffs.emplace(occ, c);
    if (!inserted) it->second = std::max(it->second, c);
  }
  return out;
}

std::size_t count_rec(const Prog& p, int occ, std::size_t N) {
  switch (p->kind) {
    case NodeKind::Input:
    case NodeKind::IntConst:
      return 0;
    case NodeKind::Comp:
      return p->occ >= 0 && p->occ == occ ? 1 : 0;
    case NodeKind::Fold:
      return N * count_rec(p->kids[0], occ, N) + count_rec(p->kids[1], occ, N) +
             count_rec(p->kids[2], occ, N);
    case NodeKind::Map:
    case NodeKind::Filter:
      return N * count_rec(p->kids[0], occ, N) + count_rec(p->kids[1], occ, N);
    case NodeKind::App:
    case NodeKind::Slice:
    case NodeKind::Length: {
      std::size_t total = 0;
      for (const auto& k : p->kids) total += count_rec(k, occ, N);
      return total;
    }
  }
  return 0;
}

// First-order values carry a linear form; functions are a component with the
// forms of the arguments supplied so far.
struct ErrAbs {
  bool is_fn = false;
  SymbolicError value;
  Op op = Op::Add;
  int occ = -1;
  std::vector<SymbolicError> pre;
};

SymbolicError apply_component(Op op, int occ, const std::vector<SymbolicError>& args) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return plus(args[0], args[1]);
    case Op::Max:
      return pointwise_max(args[0], args[1]);
    case Op::Le:
    case Op::Eq:
    case Op::Ge:
    case Op::CondLe:
    case Op::CondGe:
      return {};
    case Op::PredictFloat: {
      SymbolicError e;
      e.coeffs[occ] = 1.0;
      return e;
    }
    case Op::PredictInt:
    case Op::CondFlip:
      return args[0];
  }
  return {};
}

SymbolicError call(const ErrAbs& f, std::vector<SymbolicError> rest) {
  std::vector<SymbolicError> args = f.pre;
  for (auto& r : rest) args.push_back(std::move(r));
  if (args.size() != dsl::arity(f.op)) throw std::invalid_argument("error_bound: arity mismatch");
  return apply_component(f.op, f.occ, args);
}

ErrAbs abs_rec(const Prog& p, int N) {
  ErrAbs out;
  switch (p->kind) {
    case NodeKind::Input:
    case NodeKind::IntConst:
    case NodeKind::Length:
      return out;
    case NodeKind::Comp:
      out.is_fn = true;
      out.op = p->op;
      out.occ = p->occ;
      return out;
    case NodeKind::App: {
      ErrAbs f = abs_rec(p->kids[0], N);
      ErrAbs x = abs_rec(p->kids[1], N);
      f.pre.push_back(x.value);
      if (f.pre.size() < dsl::arity(f.op)) return f;
      out.value = apply_component(f.op, f.occ, f.pre);
      return out;
    }
    case NodeKind::Fold: {
      const ErrAbs f = abs_rec(p->kids[0], N);
      const SymbolicError elem = abs_rec(p->kids[1], N).value;
      SymbolicError acc = abs_rec(p->kids[2], N).value;
      SymbolicError best = acc;
      for (int n = 1; n <= N; ++n) {
        acc = call(f, {elem, acc});
        best = pointwise_max(best, acc);
      }
      out.value = best;
      return out;
    }
    case NodeKind::Map: {
      const ErrAbs f = abs_rec(p->kids[0], N);
      out.value = call(f, {abs_rec(p->kids[1], N).value});
      return out;
    }
    case NodeKind::Filter:
      return abs_rec(p->kids[1], N);
    case NodeKind::Slice:
      return abs_rec(p->kids[0], N);
  }
  return out;
}

void check_N(int N) {
  if (N < 1) throw std::invalid_argument("list length bound N must be at least 1");
}

}  // namespace

std::size_t count_occurrences(const dsl::Prog& p, int occ, int N) {
  check_N(N);
  return count_rec(p, occ, static_cast<std::size_t>(N));
}

std::vector<std::size_t> count_all(const dsl::Prog& p, int N) {
  const std::size_t m = dsl::occurrence_count(p);
  std::vector<std::size_t> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = count_occurrences(p, static_cast<int>(i), N);
  return out;
}

SymbolicError error_bound(const dsl::Prog& p, int N) {
  check_N(N);
  ErrAbs a = abs_rec(p, N);
  if (a.is_fn) throw std::invalid_argument("error_bound: program is a function");
  for (auto it = a.value.coeffs.begin(); it != a.value.coeffs.end();) {
    it = it->second == 0.0 ? a.value.coeffs.erase(it) : std::next(it);
  }
  return a.value;
}

std::vector<std::vector<double>> simplex_grid(std::size_t d, const GridSpec& grid) {
  if (d > kMaxGridDimension) {
    throw std::invalid_argument("grid dimension " + std::to_string(d) + " exceeds the limit of " +
                                std::to_string(kMaxGridDimension));
  }
  if (d == 0) return {{}};
  if (grid.single_point) return {std::vector<double>(d, 1.0 / static_cast<double>(d))};
  if (grid.levels.empty()) throw std::invalid_argument("grid has no levels");
  for (double l : grid.levels) {
    if (!(l > 0.0)) throw std::invalid_argument("grid levels must be positive");
  }

  std::vector<std::vector<double>> out;
  std::set<std::vector<long long>> seen;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    std::vector<double> x(d);
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) sum += (x[i] = grid.levels[idx[i]]);
    std::vector<long long> key(d);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] /= sum;
      key[i] = std::llround(x[i] * 1e12);
    }
    if (seen.insert(key).second) out.push_back(std::move(x));

    std::size_t pos = d;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < grid.levels.size()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

std::vector<std::vector<double>> candidate_eps(const dsl::Prog& p, double eps_total, int N,
                                               const GridSpec& grid) {
  if (!(eps_total > 0.0 && eps_total < 1.0)) {
    throw std::invalid_argument("eps must lie in (0,1)");
  }
  const auto counts = count_all(p, N);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) active.push_back(i);
  }
  std::vector<std::vector<double>> out;
  for (const auto& x : simplex_grid(active.size(), grid)) {
    std::vector<double> eps(counts.size(), 1.0);
    double used = 0.0;
    for (std::size_t j = 0; j < active.size(); ++j) {
      const std::size_t f = active[j];
      eps[f] = x[j] * eps_total / static_cast<double>(counts[f]);
      used += static_cast<double>(counts[f]) * eps[f];
    }
    if (!active.empty() && std::abs(used - eps_total) > 1e-12) {
      throw std::logic_error("candidate_eps: allocation does not exhaust eps");
    }
    out.push_back(std::move(eps));
  }
  return out;
}

std::vector<std::vector<double>> candidate_errs(const dsl::Prog& p, double e_total, int N,
                                                const GridSpec& grid) {
  if (!(e_total >= 0.0)) throw std::invalid_argument("error budget must be nonnegative");
  const std::size_t m = dsl::occurrence_count(p);
  const SymbolicError form = error_bound(p, N);
  std::vector<int> active;
  for (const auto& [occ, a] : form.coeffs) active.push_back(occ);
  std::vector<std::vector<double>> out;
  for (const auto& x : simplex_grid(active.size(), grid)) {
    std::vector<double> errs(m, 0.0);
    for (std::size_t j = 0; j < active.size(); ++j) {
      const int f = active[j];
      errs[f] = x[j] * e_total / form.coeffs.at(f);
    }
    if (form.evaluate(errs) > e_total * (1.0 + 1e-12) + 1e-12) {
      throw std::logic_error("candidate_errs: allocation exceeds the error budget");
    }
    out.push_back(std::move(errs));
  }
  return out;
}

}  // namespace pacsketch
