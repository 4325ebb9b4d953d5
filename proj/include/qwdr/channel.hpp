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

#ifndef QWDR_CHANNEL_HPP_
#define QWDR_CHANNEL_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qwdr/network.hpp"

namespace qwdr {

enum class GainModel {
  kPower,      // power gain ~ exponential (squared Rayleigh envelope)
  kAmplitude,  // gain ~ Rayleigh envelope
  kFixed,      // gain equals its mean every review
};

GainModel parse_gain_model(const std::string& name);
std::string to_string(GainModel model);

struct ChannelParams {
  double sigma2 = 1.0;
  double truncation_factor = 10.0;  // gamma_max = factor * mean gain
  GainModel model = GainModel::kPower;
  std::uint64_t seed = 1;
};

// Gains and rates for one review period, indexed like NetworkModel::links().
struct ChannelState {
  std::vector<double> gains;
  std::vector<double> rates;
};

// mu = log(1 + gamma / sigma^2), natural log.
double rate_from_gain(double gain, double sigma2);

// Slow-fading channel: one i.i.d. truncated draw per link per review period.
// Each link owns its own random stream.
class ChannelModel {
 public:
  ChannelModel() = default;
  ChannelModel(std::vector<double> mean_gains, ChannelParams params);

  const ChannelParams& params() const { return params_; }
  std::size_t num_links() const { return mean_gains_.size(); }
  double mean_gain(std::size_t link) const { return mean_gains_[link]; }
  double gain_cap(std::size_t link) const;
  // log(1 + gamma_max / sigma^2) over all links.
  double max_rate() const;

  double draw_gain(std::size_t link, std::uint64_t review_index) const;

 private:
  std::vector<double> mean_gains_;
  ChannelParams params_;
};

ChannelState draw_channel(const ChannelModel& model, std::uint64_t review_index);

// Mean gain scale / d^2 for each link from node coordinates.
std::vector<double> mean_gains_from_positions(
    const NetworkModel& network, const std::map<NodeId, std::pair<double, double>>& positions,
    double gain_scale);

}  // namespace qwdr

#endif  // QWDR_CHANNEL_HPP_
