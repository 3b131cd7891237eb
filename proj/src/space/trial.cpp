#include "mohpo/space/trial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mohpo/common/errors.hpp"

namespace mohpo::space {

std::string to_string(Direction direction) {
  return direction == Direction::maximize ? "maximize" : "minimize";
}

Direction parse_direction(std::string_view text) {
  if (text == "maximize") return Direction::maximize;
  if (text == "minimize") return Direction::minimize;
  throw ConfigError("unknown direction '" + std::string(text) + "'");
}

std::string to_string(Provenance provenance) {
  return provenance == Provenance::sampled ? "sampled" : "seeded";
}

Provenance parse_provenance(std::string_view text) {
  if (text == "sampled") return Provenance::sampled;
  if (text == "seeded") return Provenance::seeded;
  throw DataError("unknown provenance '" + std::string(text) + "'");
}

void ObservationDataset::append(Trial trial) {
  if (!trials_.empty()) {
    const Trial &last = trials_.back();
    if (trial.id <= last.id) {
      throw std::invalid_argument("trial ids must be strictly increasing (got " +
                                  std::to_string(trial.id) + " after " +
                                  std::to_string(last.id) + ")");
    }
    if (trial.objective_values.size() != last.objective_values.size()) {
      throw std::invalid_argument("trial " + std::to_string(trial.id) +
                                  " has a different number of objectives");
    }
    if (trial.provenance == Provenance::seeded) {
      const bool sampled_before =
          std::any_of(trials_.begin(), trials_.end(), [&](const Trial &t) {
            return t.stage == trial.stage && t.provenance == Provenance::sampled;
          });
      if (sampled_before) {
        throw std::invalid_argument("seeded trial " + std::to_string(trial.id) +
                                    " appended after sampled trials of stage " +
                                    std::to_string(trial.stage));
      }
    }
  }
  if (trial.stage < 0) throw std::invalid_argument("trial stage must be >= 0");
  for (double z : trial.objective_values) {
    if (!std::isfinite(z)) {
      throw std::invalid_argument("trial " + std::to_string(trial.id) +
                                  " has a non-finite objective value");
    }
  }
  trials_.push_back(std::move(trial));
}

std::size_t ObservationDataset::count(Provenance provenance) const {
  return static_cast<std::size_t>(std::count_if(
      trials_.begin(), trials_.end(), [&](const Trial &t) { return t.provenance == provenance; }));
}

const Trial *ObservationDataset::find(std::uint64_t id) const {
  auto it = std::lower_bound(trials_.begin(), trials_.end(), id,
                             [](const Trial &t, std::uint64_t v) { return t.id < v; });
  return it != trials_.end() && it->id == id ? &*it : nullptr;
}

bool dominates(std::span<const double> a, std::span<const double> b,
               std::span<const Direction> directions) {
  bool strictly = false;
  for (std::size_t m = 0; m < a.size(); ++m) {
    const double x = oriented(a[m], directions[m]);
    const double y = oriented(b[m], directions[m]);
    if (x < y) return false;
    if (x > y) strictly = true;
  }
  return strictly;
}

std::vector<Trial> pareto_front(const ObservationDataset &dataset,
                                std::span<const Direction> directions) {
  const auto &trials = dataset.trials();
  if (trials.empty()) return {};
  if (directions.size() != dataset.objective_count()) {
    throw std::invalid_argument("pareto_front: directions do not match objective count");
  }

  // Visit trials in lexicographically descending oriented order. A trial can
  // only be dominated by one visited before it, so comparing against the
  // accepted front is sufficient.
  std::vector<std::size_t> order(trials.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) {
    std::vector<double> k;
    for (std::size_t m = 0; m < directions.size(); ++m) {
      k.push_back(oriented(trials[i].objective_values[m], directions[m]));
    }
    return k;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) > key(b); });

  std::vector<std::size_t> front;
  for (std::size_t i : order) {
    const bool dominated = std::any_of(front.begin(), front.end(), [&](std::size_t f) {
      return dominates(trials[f].objective_values, trials[i].objective_values, directions);
    });
    if (!dominated) front.push_back(i);
  }
  std::sort(front.begin(), front.end());
  std::vector<Trial> out;
  out.reserve(front.size());
  for (std::size_t i : front) out.push_back(trials[i]);
  return out;
}

}  // namespace mohpo::space
