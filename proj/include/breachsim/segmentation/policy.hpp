#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "breachsim/segmentation/behavior.hpp"
#include "breachsim/sim/world.hpp"

namespace breachsim::segmentation {

enum class PolicyKind { FlatVlan, ZeroTrust };

std::string_view to_string(PolicyKind k);
std::optional<PolicyKind> parse_policy_kind(std::string_view s);

/// One allow entry of the zero-trust matrix. Anything not listed is denied.
struct AuthzEntry {
  std::string credential;
  std::string src_segment;
  std::string dst_segment;
  std::string channel;

  auto operator<=>(const AuthzEntry&) const = default;
};

struct SegmentationPolicy {
  PolicyKind kind = PolicyKind::FlatVlan;
  std::set<std::pair<std::string, std::string>> vlan_allow;  ///< directed (src segment, dst segment)
  bool credential_bypass = true;
  std::set<AuthzEntry> matrix;
  bool monitor_all = false;  ///< always in effect under zero-trust

  bool monitors_everything() const { return monitor_all || kind == PolicyKind::ZeroTrust; }
};

struct PolicyDecision {
  bool allow = false;
  std::string reason;
  bool monitored = false;
};

/// Flat VLAN: routable and (same segment, allowlisted pair, or bypass with a
/// credential valid on the destination). Zero trust: routable and an exact
/// matrix entry.
PolicyDecision evaluate_flow(const SegmentationPolicy& p, const sim::FlowContext& ctx);

/// Admission gate used by the world: policy decision plus optional profiling.
class PolicyGate final : public sim::FlowGate {
 public:
  explicit PolicyGate(SegmentationPolicy policy, std::optional<BehaviorProfile> profile = std::nullopt);

  sim::GateDecision admit(const sim::FlowContext& ctx) override;

  const SegmentationPolicy& policy() const noexcept { return policy_; }
  const std::optional<BehaviorProfile>& profile() const noexcept { return profile_; }

 private:
  SegmentationPolicy policy_;
  std::optional<BehaviorProfile> profile_;
};

}  // namespace breachsim::segmentation
