#include "breachsim/segmentation/policy.hpp"

namespace breachsim::segmentation {

std::string_view to_string(PolicyKind k) { return k == PolicyKind::FlatVlan ? "flat-vlan" : "zero-trust"; }

std::optional<PolicyKind> parse_policy_kind(std::string_view s) {
  if (s == "flat-vlan") return PolicyKind::FlatVlan;
  if (s == "zero-trust") return PolicyKind::ZeroTrust;
  return std::nullopt;
}

PolicyDecision evaluate_flow(const SegmentationPolicy& p, const sim::FlowContext& ctx) {
  PolicyDecision d;
  d.monitored = p.monitors_everything();
  const std::string& src = ctx.src.segment;
  const std::string& dst = ctx.dst.segment;
  if (!ctx.routable) {
    d.reason = "no-route";
    return d;
  }
  if (p.kind == PolicyKind::ZeroTrust) {
    if (ctx.flow.credential && p.matrix.contains(AuthzEntry{*ctx.flow.credential, src, dst, ctx.flow.channel})) {
      d.allow = true;
      d.reason = "authz-matrix";
    } else {
      d.reason = "default-deny";
    }
    return d;
  }
  if (src == dst) {
    d.allow = true;
    d.reason = "same-segment";
  } else if (p.vlan_allow.contains({src, dst})) {
    d.allow = true;
    d.reason = "vlan-allow";
  } else if (p.credential_bypass && ctx.credential_valid) {
    d.allow = true;
    d.reason = "credential-bypass";
  } else {
    d.reason = "vlan-deny";
  }
  return d;
}

PolicyGate::PolicyGate(SegmentationPolicy policy, std::optional<BehaviorProfile> profile)
    : policy_(std::move(policy)), profile_(std::move(profile)) {}

sim::GateDecision PolicyGate::admit(const sim::FlowContext& ctx) {
  PolicyDecision d = evaluate_flow(policy_, ctx);
  sim::GateDecision g;
  g.outcome = d.allow ? sim::FlowOutcome::Delivered : sim::FlowOutcome::Denied;
  g.reason = std::move(d.reason);
  g.monitored = d.monitored;
  if (profile_) g.anomalous = check_behavior(*profile_, ctx.flow) == BehaviorVerdict::Anomalous;
  return g;
}

}  // namespace breachsim::segmentation
