#pragma once

// Monte Carlo logical error rate of a gadget under independent depolarizing faults. Each
// location of a chosen regime fails with probability eps; a failed gate location applies a
// uniformly random non-identity Pauli on its qubits, a failed wait a random Pauli on its qubit
// and a failed routing SWAP a random Pauli on one of its two qubits.
// The gadget is simulated exactly from the first faulty point, ideal decoders are applied, and
// the trial counts as a logical failure with probability one minus the weight left in the
// ideal output span.

#include "gcq/ft_verify.hpp"
#include "gcq/locations.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace gcq::mc {

/// One location as seen by the simulator: for each of its qubits, the gate index after which
/// a fault there acts (-1 means on the input).
struct Site {
  std::vector<std::pair<int, int>> parts;  ///< (qubit, after)
  /// Routing SWAPs stand for control-unit motion past one qubit at a time, so their faults
  /// are single-qubit.
  bool one_qubit = false;
};

/// Maps every location of `L` (same index) onto positions of the unscheduled gate list.
inline std::vector<Site> sites_of(const LocationList& L) {
  std::vector<std::vector<std::size_t>> per_step(L.steps);
  for (std::size_t i = 0; i < L.locs.size(); ++i) per_step.at(L.locs[i].step).push_back(i);
  std::vector<int> last(L.n_qubits, -1);
  std::vector<Site> out(L.locs.size());
  for (int s = 0; s < L.steps; ++s) {
    for (std::size_t i : per_step[s]) {
      const Location& l = L.locs[i];
      Site& site = out[i];
      if (l.op < 0) {
        site.parts.push_back({l.qubit, last[l.qubit]});
      } else {
        const auto& op = L.ops[l.op];
        site.one_qubit = op.routing;
        for (int q : op.gate.q) {
          // A routing SWAP only moves control; its fault lands after the qubit's previous gate.
          int after = op.routing ? last[q] : op.origin;
          if (!op.routing) last[q] = op.origin;
          site.parts.push_back({q, after});
        }
      }
    }
  }
  return out;
}

/// Number of distinct non-identity faults at a location.
inline std::uint64_t fault_count(const Site& s) {
  const std::uint64_t n = s.parts.size();
  return s.one_qubit ? 3 * n : (std::uint64_t{1} << (2 * n)) - 1;
}

/// Fault number `code` (1..fault_count) of a location. For an ordinary location the code holds
/// a Pauli letter per qubit, two bits each in the order of `Site::parts` (0 = I, 1 = X, 2 = Y,
/// 3 = Z); for a single-qubit location it picks one qubit and one letter.
inline std::vector<std::pair<int, Pauli>> site_faults(const Site& s, std::uint64_t code) {
  if (code < 1 || code > fault_count(s)) throw std::out_of_range("fault code out of range");
  std::vector<std::pair<int, Pauli>> f;
  if (s.one_qubit) {
    const auto& [q, after] = s.parts[(code - 1) / 3];
    f.push_back({after, Pauli::single(q, "XYZ"[(code - 1) % 3])});
    return f;
  }
  for (std::size_t j = 0; j < s.parts.size(); ++j) {
    char p = "IXYZ"[(code >> (2 * j)) & 3];
    if (p != 'I') f.push_back({s.parts[j].second, Pauli::single(s.parts[j].first, p)});
  }
  return f;
}

struct Result {
  double eps = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double failures = 0;  ///< expected failures summed over trials before the final draw
  std::uint64_t failed = 0;
  std::size_t locations = 0;
  double estimate = 0;
  double stderr_ = 0;
};

/// Trial generator derived from (seed, trial index) alone, so any split of the trials agrees.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t i) {
  std::seed_seq ss{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(i), std::uint32_t(i >> 32)};
  return std::mt19937_64(ss);
}

/// Precomputed clean run of a case, reused by every trial.
class Estimator {
 public:
  Estimator(ft::Case c, Regime regime, const CountOptions& o = {})
      : case_(std::move(c)), sites_(sites_of(enumerate_locations(case_.gadget, regime, o))) {
    sv::Mixture m(case_.input);
    for (auto& g : case_.gadget.circ.gates) {
      m.apply(g);
      after_.push_back(m);
    }
    clean_ = finish(after_.empty() ? sv::Mixture(case_.input) : after_.back(), case_.gadget.circ.gates.size());
  }

  std::size_t locations() const { return sites_.size(); }
  const std::vector<Site>& sites() const { return sites_; }

  /// Captured weight with the given faults, each placed after a gate index (-1: on the input).
  double fidelity_with(std::vector<std::pair<int, Pauli>> faults) const {
    return faults.empty() ? clean_ : run(std::move(faults));
  }
  double clean_fidelity() const { return clean_; }

  /// Probability that trial `i` fails, before the final Bernoulli draw, plus that draw.
  bool trial(double eps, std::uint64_t seed, std::uint64_t i, double* fail_prob = nullptr) const {
    auto rng = trial_rng(seed, i);
    std::vector<std::pair<int, Pauli>> faults;  // (after, single-qubit Pauli)
    if (eps > 0) {
      std::geometric_distribution<long long> gap(eps);
      for (long long k = gap(rng); k < static_cast<long long>(sites_.size()); k += 1 + gap(rng)) {
        std::uniform_int_distribution<std::uint64_t> pick(1, fault_count(sites_[k]));
        auto f = site_faults(sites_[k], pick(rng));
        faults.insert(faults.end(), f.begin(), f.end());
      }
    }
    double f = faults.empty() ? clean_ : run(faults);
    double pf = std::clamp(1.0 - f, 0.0, 1.0);
    if (pf < 1e-9) pf = 0;  // numerical noise of an exact recovery
    if (fail_prob) *fail_prob = pf;
    std::uniform_real_distribution<double> u(0, 1);
    return u(rng) < pf;
  }

  Result estimate(double eps, std::uint64_t trials, std::uint64_t seed) const {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    if (eps < 0 || eps >= 1) throw std::invalid_argument("eps must lie in [0, 1)");
    Result r;
    r.eps = eps;
    r.trials = trials;
    r.seed = seed;
    r.locations = sites_.size();
    for (std::uint64_t i = 0; i < trials; ++i) {
      double pf = 0;
      r.failed += trial(eps, seed, i, &pf);
      r.failures += pf;
    }
    r.estimate = double(r.failed) / double(trials);
    r.stderr_ = std::sqrt(r.estimate * (1 - r.estimate) / double(trials));
    return r;
  }

 private:
  double finish(sv::Mixture m, std::size_t from) const {
    const auto& gs = case_.gadget.circ.gates;
    for (std::size_t i = from; i < gs.size(); ++i) m.apply(gs[i]);
    if (case_.decode) ft::decode_outputs(m, case_);
    return ft::captured_weight(m, case_.system, case_.targets);
  }

  double run(std::vector<std::pair<int, Pauli>> faults) const {
    std::stable_sort(faults.begin(), faults.end(), [](auto& a, auto& b) { return a.first < b.first; });
    const int first = faults.front().first;
    sv::Mixture m = first < 0 ? sv::Mixture(case_.input) : after_[first];
    const auto& gs = case_.gadget.circ.gates;
    std::size_t fi = 0;
    for (; fi < faults.size() && faults[fi].first == first; ++fi) ft::apply_pauli(m, faults[fi].second);
    for (std::size_t i = static_cast<std::size_t>(first + 1); i < gs.size(); ++i) {
      m.apply(gs[i]);
      for (; fi < faults.size() && faults[fi].first == static_cast<int>(i); ++fi) ft::apply_pauli(m, faults[fi].second);
    }
    if (case_.decode) ft::decode_outputs(m, case_);
    return ft::captured_weight(m, case_.system, case_.targets);
  }

  ft::Case case_;
  std::vector<Site> sites_;
  std::vector<sv::Mixture> after_;
  double clean_ = 0;
};

/// Logical failure frequency of a case at physical rate `eps`.
inline Result mc_logical_error(const ft::Case& c, double eps, std::uint64_t trials, std::uint64_t seed,
                               Regime regime = Regime::NoMeasurement, const CountOptions& o = {}) {
  return Estimator(c, regime, o).estimate(eps, trials, seed);
}

}  // namespace gcq::mc
