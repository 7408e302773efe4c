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

#include "twin/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "twin/channels.hpp"
#include "twin/errors.hpp"

namespace twin {

namespace {

constexpr int kMaxWidth = 24;

void check_width(int width) {
  if (width < 0 || width > kMaxWidth) {
    throw ValidationError("distribution width " + std::to_string(width) +
                          " outside [0, " + std::to_string(kMaxWidth) + "]");
  }
}

std::optional<std::size_t> parse_bits(const std::string& bits, int width) {
  if (static_cast<int>(bits.size()) != width) return std::nullopt;
  std::size_t x = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') return std::nullopt;
    x = (x << 1) | static_cast<std::size_t>(c == '1');
  }
  return x;
}

}  // namespace

ShotDistribution ShotDistribution::exact(int width, std::vector<double> probabilities) {
  check_width(width);
  ShotDistribution d;
  d.width_ = width;
  if (probabilities.size() != d.size()) {
    throw ValidationError("probability vector has wrong length for width " +
                          std::to_string(width));
  }
  double total = 0.0;
  for (double& p : probabilities) {
    if (p < 0.0 && p > -1e-12) p = 0.0;
    if (!(p >= 0.0)) throw ValidationError("negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("probabilities sum to " + std::to_string(total));
  }
  d.probs_ = std::move(probabilities);
  return d;
}

ShotDistribution ShotDistribution::from_counts(int width,
                                               std::vector<std::uint64_t> counts) {
  check_width(width);
  ShotDistribution d;
  d.width_ = width;
  if (counts.size() != d.size()) {
    throw ValidationError("count vector has wrong length for width " +
                          std::to_string(width));
  }
  const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw ValidationError("count distribution is empty");
  d.shots_ = total;
  d.probs_.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    d.probs_[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  d.counts_ = std::move(counts);
  return d;
}

double ShotDistribution::probability(std::size_t outcome) const {
  return outcome < probs_.size() ? probs_[outcome] : 0.0;
}

double ShotDistribution::probability(const std::string& bits) const {
  auto x = outcome_of(bits);
  if (!x) throw ValidationError("bitstring '" + bits + "' has the wrong width");
  return probability(*x);
}

std::vector<double> ShotDistribution::probabilities() const { return probs_; }

std::string ShotDistribution::bitstring(std::size_t outcome) const {
  std::string s(width_, '0');
  for (int b = 0; b < width_; ++b) {
    if ((outcome >> (width_ - 1 - b)) & 1U) s[b] = '1';
  }
  return s;
}

std::optional<std::size_t> ShotDistribution::outcome_of(const std::string& bits) const {
  return parse_bits(bits, width_);
}

double tvd(const ShotDistribution& p, const ShotDistribution& q) {
  if (p.width() != q.width()) {
    throw ValidationError("tvd: width mismatch (" + std::to_string(p.width()) +
                          " vs " + std::to_string(q.width()) + ")");
  }
  double total = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    total += std::abs(p.probability(x) - q.probability(x));
  }
  return 0.5 * total;
}

ShotDistribution sample(const ShotDistribution& dist, std::uint64_t shots,
                        std::uint64_t seed) {
  if (shots == 0) throw ValidationError("sample: shots must be >= 1");
  std::vector<double> cdf(dist.size());
  double running = 0.0;
  for (std::size_t x = 0; x < dist.size(); ++x) {
    running += dist.probability(x);
    cdf[x] = running;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> counts(dist.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * running;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t x = static_cast<std::size_t>(it - cdf.begin());
    if (x >= dist.size()) x = dist.size() - 1;
    ++counts[x];
  }
  auto out = ShotDistribution::from_counts(dist.width(), std::move(counts));
  out.circuit_id = dist.circuit_id;
  out.seed = seed;
  return out;
}

ShotDistribution apply_confusion(const ShotDistribution& dist,
                                 std::span<const ConfusionMatrix> matrices) {
  if (static_cast<int>(matrices.size()) != dist.width()) {
    throw ValidationError("apply_confusion: need one matrix per bit");
  }
  for (const auto& m : matrices) validate_confusion(m);
  std::vector<double> p = dist.probabilities();
  const int w = dist.width();
  for (int b = 0; b < w; ++b) {
    const std::size_t mask = std::size_t{1} << (w - 1 - b);
    const auto& c = matrices[b];
    for (std::size_t x = 0; x < p.size(); ++x) {
      if (x & mask) continue;
      const double p0 = p[x];
      const double p1 = p[x | mask];
      p[x] = c[0][0] * p0 + c[0][1] * p1;
      p[x | mask] = c[1][0] * p0 + c[1][1] * p1;
    }
  }
  double total = 0.0;
  for (double v : p) total += v;
  for (double& v : p) v /= total;
  auto out = ShotDistribution::exact(w, std::move(p));
  out.circuit_id = dist.circuit_id;
  return out;
}

std::string to_json(const ShotDistribution& dist) {
  nlohmann::ordered_json j;
  j["circuit"] = dist.circuit_id;
  j["width"] = dist.width();
  if (dist.is_exact()) {
    j["shots"] = "exact";
  } else {
    j["shots"] = dist.shots();
  }
  if (dist.seed) {
    j["seed"] = *dist.seed;
  } else {
    j["seed"] = nullptr;
  }
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (std::size_t x = 0; x < dist.size(); ++x) {
    if (dist.is_exact()) {
      if (dist.probability(x) > 0.0) values[dist.bitstring(x)] = dist.probability(x);
    } else if (dist.counts()[x] > 0) {
      values[dist.bitstring(x)] = dist.counts()[x];
    }
  }
  j[dist.is_exact() ? "probabilities" : "counts"] = std::move(values);
  return j.dump(2) + "\n";
}

ShotDistribution distribution_from_json(const std::string& text,
                                        const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(source + ": " + err.what());
  }
  try {
    const bool has_counts = j.contains("counts");
    const bool has_probs = j.contains("probabilities");
    if (has_counts == has_probs) {
      throw ParseError(source + ": need exactly one of 'counts' or 'probabilities'");
    }
    const auto& values = has_counts ? j["counts"] : j["probabilities"];
    int width = -1;
    if (j.contains("width")) width = j["width"].get<int>();
    for (auto it = values.begin(); it != values.end() && width < 0; ++it) {
      width = static_cast<int>(it.key().size());
    }
    if (width < 0) throw ParseError(source + ": cannot determine width");
    check_width(width);
    const std::size_t n = std::size_t{1} << width;
    ShotDistribution out;
    if (has_counts) {
      std::vector<std::uint64_t> counts(n, 0);
      for (auto it = values.begin(); it != values.end(); ++it) {
        auto x = parse_bits(it.key(), width);
        if (!x) throw ParseError(source + ": bad bitstring '" + it.key() + "'");
        counts[*x] += it.value().get<std::uint64_t>();
      }
      out = ShotDistribution::from_counts(width, std::move(counts));
    } else {
      std::vector<double> probs(n, 0.0);
      for (auto it = values.begin(); it != values.end(); ++it) {
        auto x = parse_bits(it.key(), width);
        if (!x) throw ParseError(source + ": bad bitstring '" + it.key() + "'");
        probs[*x] += it.value().get<double>();
      }
      out = ShotDistribution::exact(width, std::move(probs));
    }
    if (j.contains("circuit") && j["circuit"].is_string()) {
      out.circuit_id = j["circuit"].get<std::string>();
    }
    if (j.contains("seed") && j["seed"].is_number_unsigned()) {
      out.seed = j["seed"].get<std::uint64_t>();
    }
    return out;
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(source + ": " + err.what());
  } catch (const ValidationError& err) {
    throw ParseError(source + ": " + err.what());
  }
}

ShotDistribution load_distribution(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open distribution file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return distribution_from_json(buf.str(), path.string());
}

void save_distribution(const ShotDistribution& dist,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write distribution file: " + path.string());
  out << to_json(dist);
}

}  // namespace twin
