#include "breachsim/payment/tokenization.hpp"

namespace breachsim::payment {

namespace {

constexpr std::string_view kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

bool has_digit_run(const std::string& s, std::size_t n) {
  std::size_t run = 0;
  for (char c : s) {
    run = (c >= '0' && c <= '9') ? run + 1 : 0;
    if (run >= n) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(TokenState s) {
  switch (s) {
    case TokenState::Active: return "active";
    case TokenState::Redeemed: return "redeemed";
    case TokenState::Nullified: return "nullified";
  }
  return "?";
}

std::string_view to_string(RedeemVerdict v) {
  switch (v) {
    case RedeemVerdict::Approved: return "approved";
    case RedeemVerdict::RejectedWrongMerchant: return "rejected-wrong-merchant";
    case RedeemVerdict::RejectedReused: return "rejected-reused";
    case RedeemVerdict::RejectedNullified: return "rejected-nullified";
  }
  return "?";
}

Token AcquirerLedger::tokenize(const CardRecord& card, const std::string& merchant, sim::Rng& rng,
                               sim::Minutes now) {
  std::string id;
  do {
    id.clear();
    for (std::size_t i = 0; i < kTokenLength; ++i) id.push_back(kAlphabet[rng.below(kAlphabet.size())]);
  } while (has_digit_run(id, 4) || entries_.contains(id));
  entries_.emplace(id, Entry{card, merchant, TokenState::Active});
  return Token{id, merchant, TokenState::Active, now};
}

AcquirerLedger::Entry& AcquirerLedger::entry(const std::string& id) {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw UnknownToken(id);
  return it->second;
}

RedeemVerdict AcquirerLedger::redeem(const std::string& token_id, const std::string& merchant) {
  Entry& e = entry(token_id);
  if (e.state == TokenState::Nullified) return RedeemVerdict::RejectedNullified;
  if (e.state == TokenState::Redeemed) return RedeemVerdict::RejectedReused;
  if (e.merchant != merchant) return RedeemVerdict::RejectedWrongMerchant;
  e.state = TokenState::Redeemed;
  return RedeemVerdict::Approved;
}

bool AcquirerLedger::nullify(const std::string& token_id) {
  Entry& e = entry(token_id);
  if (e.state != TokenState::Active) return false;
  e.state = TokenState::Nullified;
  return true;
}

TokenState AcquirerLedger::state(const std::string& token_id) const {
  auto it = entries_.find(token_id);
  if (it == entries_.end()) throw UnknownToken(token_id);
  return it->second.state;
}

}  // namespace breachsim::payment
