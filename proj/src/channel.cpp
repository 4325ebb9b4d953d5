// Copyright 2026 The QWDR Authors
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

#include "qwdr/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qwdr/errors.hpp"
#include "qwdr/rng.hpp"

namespace qwdr {

GainModel parse_gain_model(const std::string& name) {
  if (name == "power") return GainModel::kPower;
  if (name == "amplitude") return GainModel::kAmplitude;
  if (name == "fixed") return GainModel::kFixed;
  throw ConfigError("channel.gain_model: expected \"power\", \"amplitude\" or \"fixed\", got \"" +
                    name + "\"");
}

std::string to_string(GainModel model) {
  switch (model) {
    case GainModel::kPower:
      return "power";
    case GainModel::kAmplitude:
      return "amplitude";
    case GainModel::kFixed:
      return "fixed";
  }
  return "power";
}

double rate_from_gain(double gain, double sigma2) { return std::log1p(gain / sigma2); }

ChannelModel::ChannelModel(std::vector<double> mean_gains, ChannelParams params)
    : mean_gains_(std::move(mean_gains)), params_(params) {
  if (!(params_.sigma2 > 0.0)) throw ConfigError("channel.sigma2: must be > 0");
  if (!(params_.truncation_factor > 0.0)) {
    throw ConfigError("channel.gamma_truncation_factor: must be > 0");
  }
  for (double g : mean_gains_) {
    if (!std::isfinite(g) || g < 0.0) throw ConfigError("links: mean gain must be finite and >= 0");
  }
}

double ChannelModel::gain_cap(std::size_t link) const {
  if (params_.model == GainModel::kFixed) return mean_gains_[link];
  return params_.truncation_factor * mean_gains_[link];
}

double ChannelModel::max_rate() const {
  double best = 0.0;
  for (std::size_t l = 0; l < mean_gains_.size(); ++l) {
    best = std::max(best, rate_from_gain(gain_cap(l), params_.sigma2));
  }
  return best;
}

double ChannelModel::draw_gain(std::size_t link, std::uint64_t review_index) const {
  const double mean = mean_gains_[link];
  if (mean == 0.0 || params_.model == GainModel::kFixed) return mean;
  StreamRng rng(params_.seed, StreamDomain::kChannel, link, review_index);
  const double u = rng.uniform();
  const double cap = gain_cap(link);
  if (params_.model == GainModel::kPower) {
    // Inverse CDF of Exp(mean) conditioned on [0, cap].
    const double mass = -std::expm1(-cap / mean);
    return std::min(cap, -mean * std::log1p(-u * mass));
  }
  // Rayleigh with the requested mean, conditioned on [0, cap].
  const double scale = mean / std::sqrt(std::numbers::pi / 2.0);
  const double mass = -std::expm1(-(cap * cap) / (2.0 * scale * scale));
  return std::min(cap, scale * std::sqrt(-2.0 * std::log1p(-u * mass)));
}

ChannelState draw_channel(const ChannelModel& model, std::uint64_t review_index) {
  ChannelState state;
  state.gains.reserve(model.num_links());
  state.rates.reserve(model.num_links());
  for (std::size_t l = 0; l < model.num_links(); ++l) {
    const double gain = model.draw_gain(l, review_index);
    state.gains.push_back(gain);
    state.rates.push_back(rate_from_gain(gain, model.params().sigma2));
  }
  return state;
}

std::vector<double> mean_gains_from_positions(
    const NetworkModel& network, const std::map<NodeId, std::pair<double, double>>& positions,
    double gain_scale) {
  std::vector<double> gains;
  gains.reserve(network.links().size());
  for (std::size_t l = 0; l < network.links().size(); ++l) {
    const Link& link = network.links()[l];
    const auto a = positions.find(link.from);
    const auto b = positions.find(link.to);
    if (a == positions.end() || b == positions.end()) {
      throw ConfigError("links[" + std::to_string(l) + "]: no mean_gain and no coordinates for " +
                        std::to_string(a == positions.end() ? link.from : link.to));
    }
    const double dx = a->second.first - b->second.first;
    const double dy = a->second.second - b->second.second;
    const double d2 = dx * dx + dy * dy;
    if (!(d2 > 0.0)) {
      throw ConfigError("links[" + std::to_string(l) + "]: endpoints share coordinates");
    }
    gains.push_back(gain_scale / d2);
  }
  return gains;
}

}  // namespace qwdr
