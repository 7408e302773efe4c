// Copyright 2026 The transmon-twin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twin/device.hpp"

namespace twin {

/// Outcome distribution over fixed-width bitstrings.
///
/// Outcome index x maps to a bitstring whose leftmost character is the
/// most significant bit of x, which is the lowest-index measured qubit.
/// A distribution is either exact (probabilities) or sampled (counts).
class ShotDistribution {
 public:
  ShotDistribution() = default;

  /// Probabilities must be non-negative and sum to 1 within 1e-9.
  static ShotDistribution exact(int width, std::vector<double> probabilities);
  static ShotDistribution from_counts(int width, std::vector<std::uint64_t> counts);

  int width() const { return width_; }
  std::size_t size() const { return std::size_t{1} << width_; }
  bool is_exact() const { return !shots_.has_value(); }
  std::uint64_t shots() const { return shots_.value_or(0); }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  double probability(std::size_t outcome) const;
  double probability(const std::string& bits) const;
  std::vector<double> probabilities() const;

  std::string bitstring(std::size_t outcome) const;
  std::optional<std::size_t> outcome_of(const std::string& bits) const;

  // Origin metadata carried through serialisation.
  std::string circuit_id;
  std::optional<std::uint64_t> seed;

 private:
  int width_ = 0;
  std::vector<double> probs_;
  std::vector<std::uint64_t> counts_;
  std::optional<std::uint64_t> shots_;
};

/// Total variation distance, 1/2 sum |p(x) - q(x)|. Counts are normalised.
double tvd(const ShotDistribution& p, const ShotDistribution& q);

/// Multinomial draw of `shots` outcomes from the (normalised) distribution,
/// reproducible per seed on every platform.
ShotDistribution sample(const ShotDistribution& dist, std::uint64_t shots,
                        std::uint64_t seed);

/// Applies one confusion matrix per bit (bit 0 = leftmost) to an exact
/// distribution, i.e. the Kronecker product of the matrices.
ShotDistribution apply_confusion(const ShotDistribution& dist,
                                 std::span<const ConfusionMatrix> matrices);

/// JSON text: {"circuit", "width", "shots", "seed", "counts" | "probabilities"}.
std::string to_json(const ShotDistribution& dist);
ShotDistribution distribution_from_json(const std::string& text,
                                        const std::string& source = "<string>");
ShotDistribution load_distribution(const std::filesystem::path& path);
void save_distribution(const ShotDistribution& dist,
                       const std::filesystem::path& path);

}  // namespace twin
