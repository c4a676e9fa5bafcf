#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "breachsim/alerts/alert.hpp"

namespace breachsim::alerts {

class MalformedDocument : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingField : public std::runtime_error {
 public:
  explicit MissingField(const std::string& field) : std::runtime_error("alert document lacks " + field), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// One alert per document, canonical two-space indentation. Covers the alert
/// schema fields; handling and escalation state are not part of the document.
std::string serialize_alert_xml(const Alert& a);

/// Accepts any well-formed document in the alert schema (attribute order and
/// whitespace between elements are free). Severity and alert-type are
/// required; other fields default when absent.
Alert parse_alert_xml(std::string_view text);

}  // namespace breachsim::alerts
