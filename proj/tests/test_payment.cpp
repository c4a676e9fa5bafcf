#include <map>
#include <regex>
#include <set>

#include "breachsim/payment/card.hpp"
#include "breachsim/payment/luhn.hpp"
#include "breachsim/payment/tokenization.hpp"
#include "breachsim/sim/rng.hpp"
#include "doctest.h"

using namespace breachsim;
using namespace breachsim::payment;

namespace {

// Reference mod-10: double every second digit from the right via a lookup table.
bool oracle_luhn(const std::string& s) {
  static const int doubled[10] = {0, 2, 4, 6, 8, 1, 3, 5, 7, 9};
  if (s.size() < 13 || s.size() > 19) return false;
  int sum = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const char c = s[s.size() - 1 - k];
    if (c < '0' || c > '9') return false;
    sum += (k % 2 == 1) ? doubled[c - '0'] : (c - '0');
  }
  return sum % 10 == 0;
}

std::string random_digits(sim::Rng& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.below(10)));
  return s;
}

}  // namespace

TEST_CASE("known Luhn vectors") {
  CHECK(luhn_valid("4111111111111111"));
  CHECK(luhn_valid("5555555555554444"));
  CHECK(luhn_valid("4539578763621486"));
  CHECK_FALSE(luhn_valid("4111111111111112"));
  CHECK_FALSE(luhn_valid("79927398713"));  // valid checksum but too short for a PAN
  CHECK_FALSE(luhn_valid("4111-1111-1111-1111"));
  CHECK_FALSE(luhn_valid(""));
}

TEST_CASE("check digit agrees with the reference on random bodies") {
  sim::Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const std::string body = random_digits(rng, 12 + rng.below(7));
    const std::string full = body + luhn_check_digit(body);
    CHECK(oracle_luhn(full));
    CHECK(luhn_valid(full));
    const char wrong = static_cast<char>('0' + (full.back() - '0' + 1 + rng.below(9)) % 10);
    CHECK_FALSE(luhn_valid(body + wrong));
  }
}

TEST_CASE("luhn_valid matches the reference on random strings") {
  sim::Rng rng(6);
  for (int i = 0; i < 5000; ++i) {
    const std::string s = random_digits(rng, 13 + rng.below(7));
    CHECK(luhn_valid(s) == oracle_luhn(s));
  }
}

TEST_CASE("10,000 generated cards") {
  sim::Rng rng(2013);
  const std::regex track(R"((\d{16})=(\d{4})(\d{3})(\d+))");
  for (int i = 0; i < 10'000; ++i) {
    const CardRecord c = generate_card(rng);
    REQUIRE(oracle_luhn(c.pan));
    CHECK(c.pan.size() == 16);
    const bool visa = c.pan[0] == '4';
    const bool mc = c.pan[0] == '5' && c.pan[1] >= '1' && c.pan[1] <= '5';
    CHECK((visa || mc));
    CHECK(c.track2().size() <= kMaxTrack2);
    CHECK(framed_track(c).size() <= kMaxFramedTrack);
    CHECK(std::regex_match(c.track2(), track));
    const int month = std::stoi(c.expiry.substr(2));
    CHECK((month >= 1 && month <= 12));
  }
}

TEST_CASE("pan runs are maximal digit runs") {
  const std::string s = "x4111111111111111y 94111111111111111 5555555555554444";
  auto runs = find_pan_runs({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  REQUIRE(runs.size() == 2);  // the 17-digit run fails the check as a whole
  CHECK(runs[0].offset == 1);
  CHECK(runs[0].length == 16);
  CHECK(runs[1].offset == s.size() - 16);
}

TEST_CASE("tokens: format") {
  sim::Rng rng(9);
  AcquirerLedger ledger;
  const CardRecord card = generate_card(rng);
  std::set<std::string> ids;
  const std::regex digits4(R"(\d{4})");
  for (int i = 0; i < 5000; ++i) {
    Token t = ledger.tokenize(card, "target", rng, i);
    CHECK(t.id.size() == kTokenLength);
    CHECK_FALSE(std::regex_search(t.id, digits4));
    CHECK(t.id.find(card.pan.substr(0, 6)) == std::string::npos);
    CHECK(ids.insert(t.id).second);
    CHECK(t.state == TokenState::Active);
  }
  CHECK(ledger.size() == 5000);
  CHECK(token_store_entry(Token{"abc", "m", TokenState::Active, 0}) == "<tok:abc|m>");
}

TEST_CASE("tokens: single redemption, merchant binding, nullification") {
  sim::Rng rng(1);
  AcquirerLedger l;
  const CardRecord card = generate_card(rng);
  auto t = l.tokenize(card, "target", rng);
  CHECK(l.redeem(t.id, "other") == RedeemVerdict::RejectedWrongMerchant);
  CHECK(l.redeem(t.id, "target") == RedeemVerdict::Approved);
  CHECK(l.redeem(t.id, "target") == RedeemVerdict::RejectedReused);
  CHECK(l.redeem(t.id, "other") == RedeemVerdict::RejectedReused);
  CHECK_FALSE(l.nullify(t.id));

  auto u = l.tokenize(card, "target", rng);
  CHECK(l.nullify(u.id));
  CHECK(l.redeem(u.id, "target") == RedeemVerdict::RejectedNullified);
  CHECK(l.state(u.id) == TokenState::Nullified);
  CHECK_THROWS_AS(l.redeem("nope", "target"), UnknownToken);
  CHECK_THROWS_AS(l.nullify("nope"), UnknownToken);
}

TEST_CASE("tokens: 10,000 random operations against a model") {
  struct Model {
    std::string merchant;
    TokenState state = TokenState::Active;
  };
  sim::Rng rng(77);
  AcquirerLedger ledger;
  std::map<std::string, Model> model;
  std::vector<std::string> ids;
  const std::vector<std::string> merchants{"target", "acme", "corner-shop"};
  const CardRecord card = generate_card(rng);
  std::map<RedeemVerdict, int> tally;

  for (int op = 0; op < 10'000; ++op) {
    const auto pick = rng.below(10);
    if (ids.empty() || pick < 3) {
      const std::string& m = merchants[rng.below(merchants.size())];
      Token t = ledger.tokenize(card, m, rng, op);
      model[t.id] = {m, TokenState::Active};
      ids.push_back(t.id);
    } else if (pick < 8) {
      const std::string& id = ids[rng.below(ids.size())];
      const std::string& m = merchants[rng.below(merchants.size())];
      Model& want = model[id];
      RedeemVerdict expect = RedeemVerdict::Approved;
      if (want.state == TokenState::Nullified) expect = RedeemVerdict::RejectedNullified;
      else if (want.state == TokenState::Redeemed) expect = RedeemVerdict::RejectedReused;
      else if (want.merchant != m) expect = RedeemVerdict::RejectedWrongMerchant;
      if (expect == RedeemVerdict::Approved) want.state = TokenState::Redeemed;
      const RedeemVerdict got = ledger.redeem(id, m);
      REQUIRE(got == expect);
      ++tally[got];
    } else {
      const std::string& id = ids[rng.below(ids.size())];
      Model& want = model[id];
      const bool expect = want.state == TokenState::Active;
      if (expect) want.state = TokenState::Nullified;
      REQUIRE(ledger.nullify(id) == expect);
    }
  }
  for (const auto& [id, m] : model) CHECK(ledger.state(id) == m.state);
  // every verdict should actually have been exercised
  CHECK(tally.size() == 4);
}
