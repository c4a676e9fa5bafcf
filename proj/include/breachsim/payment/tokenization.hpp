#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "breachsim/payment/card.hpp"
#include "breachsim/sim/rng.hpp"
#include "breachsim/sim/vocab.hpp"

namespace breachsim::payment {

inline constexpr std::size_t kTokenLength = 16;

enum class TokenState { Active, Redeemed, Nullified };
enum class RedeemVerdict { Approved, RejectedWrongMerchant, RejectedReused, RejectedNullified };

std::string_view to_string(TokenState s);
std::string_view to_string(RedeemVerdict v);

/// What the merchant holds in place of the card.
struct Token {
  std::string id;
  std::string merchant;
  TokenState state = TokenState::Active;
  sim::Minutes issued = 0;
};

class UnknownToken : public std::runtime_error {
 public:
  explicit UnknownToken(const std::string& id) : std::runtime_error("unknown token: " + id) {}
};

/// Acquirer-side vault mapping one-time tokens back to cards. Merchants only
/// ever see Token values.
class AcquirerLedger {
 public:
  /// Issues a fresh active token bound to `merchant`. The id is drawn from
  /// `rng` alone and never contains a run of 4 or more digits.
  Token tokenize(const CardRecord& card, const std::string& merchant, sim::Rng& rng, sim::Minutes now = 0);

  /// Approves once, for the bound merchant, while active.
  /// Precedence when several rules apply: nullified, reused, wrong merchant.
  RedeemVerdict redeem(const std::string& token_id, const std::string& merchant);

  /// Active -> nullified. Returns false if the token was not active.
  bool nullify(const std::string& token_id);

  TokenState state(const std::string& token_id) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    CardRecord card;
    std::string merchant;
    TokenState state = TokenState::Active;
  };
  Entry& entry(const std::string& id);

  std::map<std::string, Entry> entries_;
};

/// Line a merchant token store keeps per transaction.
inline std::string token_store_entry(const Token& t) { return "<tok:" + t.id + "|" + t.merchant + ">"; }

}  // namespace breachsim::payment
