#include "dgf/cutloss.hpp"

#include <cmath>

namespace dgf {

BlockHook make_hook(const DistanceMap& dm, const CutLossConfig& cfg, Phase phase,
                    std::mt19937_64& rng) {
  cfg.validate();
  if (dm.bb.empty()) throw std::invalid_argument("make_hook: empty distance map");

  bool armed = cfg.mode == CutMode::Always ||
               (cfg.mode == CutMode::ExploitationOnly && phase == Phase::Exploitation);
  if (!armed) {
    return [](BlockId) { return HookAction::Continue; };
  }
  return [&dm, cfg, &rng](BlockId b) {
    if (dm.bb[b].is_finite()) return HookAction::Continue;
    return should_terminate(rng, cfg) ? HookAction::Cut : HookAction::Continue;
  };
}

double prob_term_at(double p, std::uint64_t i) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("prob_term_at: p must be in [0, 1]");
  if (i == 0) throw std::invalid_argument("prob_term_at: i must be >= 1");
  return std::pow(1.0 - p, static_cast<double>(i - 1)) * p;
}

double prob_term_within(double p, std::uint64_t u) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("prob_term_within: p must be in [0, 1]");
  return 1.0 - std::pow(1.0 - p, static_cast<double>(u));
}

}  // namespace dgf
