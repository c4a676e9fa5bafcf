#include "breachsim/segmentation/behavior.hpp"

namespace breachsim::segmentation {

BehaviorVerdict check_behavior(BehaviorProfile& bp, const sim::Flow& f) {
  if (!f.credential) return BehaviorVerdict::Normal;
  auto& hist = bp.credentials[*f.credential];
  const bool warm = hist.flows >= bp.warmup;
  ++hist.flows;
  const bool novel = hist.seen.emplace(f.dst, f.channel).second;
  return warm && novel ? BehaviorVerdict::Anomalous : BehaviorVerdict::Normal;
}

}  // namespace breachsim::segmentation
