#include "dgf/scheduler.hpp"

#include <algorithm>
#include <cmath>

namespace dgf {

double temperature(std::uint64_t now, const AnnealState& st) {
  if (st.t_x == 0) throw std::logic_error("temperature: t_x must be positive");
  double exponent = -static_cast<double>(now) / static_cast<double>(st.t_x);
  double t = std::pow(20.0, exponent);
  return std::clamp(t, 0.0, 1.0);
}

Phase phase_at(std::uint64_t now, const AnnealState& st) {
  return now >= st.t_x ? Phase::Exploitation : Phase::Exploration;
}

double energy_weight(double normalized_distance, double temp) {
  return (1.0 - normalized_distance) * (1.0 - temp) + 0.5 * temp;
}

std::uint64_t energy(const Seed& s, std::uint64_t now, const AnnealState& st,
                     std::uint64_t base_energy) {
  if (base_energy == 0) throw std::logic_error("energy: base_energy must be positive");
  if (!s.distance.is_finite()) return base_energy;  // excluded from the schedule

  Distance d_norm = normalize(s.distance, st.min_seen, st.max_seen);
  double w = energy_weight(d_norm.value(), temperature(now, st));
  double n = std::round(static_cast<double>(base_energy) * std::exp2(10.0 * (2.0 * w - 1.0)));
  double hi = static_cast<double>(4096 * base_energy);
  n = std::clamp(n, 1.0, hi);
  return static_cast<std::uint64_t>(n);
}

Seed& SeedQueue::admit(Seed s) {
  s.id = static_cast<std::uint32_t>(seeds_.size());
  seeds_.push_back(std::move(s));
  return seeds_.back();
}

Seed& SeedQueue::next() {
  if (seeds_.empty()) throw std::out_of_range("SeedQueue::next on empty queue");
  std::size_t ix = cursor_ % seeds_.size();
  cursor_ = ix + 1;  // seeds admitted mid-cycle join at the cycle's end
  Seed& s = seeds_[ix];
  ++s.fuzz_rounds;
  return s;
}

}  // namespace dgf
