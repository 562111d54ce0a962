#pragma once

#include <span>
#include <string>

#include "radarloc/eval.hpp"

namespace radarloc::app {

/// Three-panel plot: ground-truth and estimated trajectories overlaid, then
/// histograms of position and heading error. Coordinates are printed with a
/// fixed precision so the output is byte-reproducible.
std::string render_evaluation_svg(std::span<const TimedPose> estimate,
                                  std::span<const TimedPose> truth,
                                  std::span<const PosePair> pairs);

}  // namespace radarloc::app
