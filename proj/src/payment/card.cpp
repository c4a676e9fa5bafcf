#include "breachsim/payment/card.hpp"

#include "breachsim/payment/luhn.hpp"

namespace breachsim::payment {

namespace {

void append_digits(std::string& s, std::size_t n, sim::Rng& rng) {
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.below(10)));
}

std::string two_digits(std::uint64_t v) {
  return std::string{static_cast<char>('0' + v / 10), static_cast<char>('0' + v % 10)};
}

}  // namespace

CardRecord generate_card(sim::Rng& rng) {
  CardRecord c;
  if (rng.chance(0.5)) {
    c.pan = "4";
  } else {
    c.pan = "5";
    c.pan.push_back(static_cast<char>('1' + rng.below(5)));
  }
  append_digits(c.pan, 15 - c.pan.size(), rng);
  c.pan.push_back(luhn_check_digit(c.pan));

  c.expiry = two_digits(14 + rng.below(6)) + two_digits(1 + rng.below(12));
  static constexpr const char* kServiceCodes[] = {"101", "120", "201", "221"};
  c.service_code = kServiceCodes[rng.below(4)];
  append_digits(c.discretionary, 5, rng);
  return c;
}

}  // namespace breachsim::payment
