#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mohpo/space/direction.hpp"
#include "mohpo/space/search_space.hpp"

namespace mohpo::space {

enum class Provenance { sampled, seeded };

std::string to_string(Provenance provenance);
Provenance parse_provenance(std::string_view text);

struct Trial {
  std::uint64_t id = 0;
  int stage = 0;
  HPConfig config;
  std::vector<double> objective_values;
  Provenance provenance = Provenance::sampled;
};

/// Append-only record of evaluated trials (the observation dataset).
///
/// Invariants enforced on append: ids strictly increase, every trial carries
/// the same number of finite objective values, and seeded trials of a stage
/// precede that stage's sampled trials.
class ObservationDataset {
 public:
  ObservationDataset() = default;

  void append(Trial trial);

  const std::vector<Trial> &trials() const noexcept { return trials_; }
  std::size_t size() const noexcept { return trials_.size(); }
  bool empty() const noexcept { return trials_.empty(); }
  /// Number of objectives M, or 0 while empty.
  std::size_t objective_count() const noexcept {
    return trials_.empty() ? 0 : trials_.front().objective_values.size();
  }
  std::size_t count(Provenance provenance) const;
  const Trial *find(std::uint64_t id) const;

  auto begin() const { return trials_.begin(); }
  auto end() const { return trials_.end(); }

 private:
  std::vector<Trial> trials_;
};

/// True iff `a` dominates `b`: no worse on every objective and strictly better
/// on at least one, after orienting by `directions`.
bool dominates(std::span<const double> a, std::span<const double> b,
               std::span<const Direction> directions);

/// The non-dominated trials of `dataset`, ordered by trial id.
std::vector<Trial> pareto_front(const ObservationDataset &dataset,
                                std::span<const Direction> directions);

}  // namespace mohpo::space
