#include "breachsim/payment/luhn.hpp"

#include <stdexcept>

namespace breachsim::payment {

namespace {

bool digit(char c) { return c >= '0' && c <= '9'; }

int mod10_sum(std::string_view digits, bool double_first_from_right) {
  int sum = 0;
  bool dbl = double_first_from_right;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    int v = *it - '0';
    if (dbl) {
      v *= 2;
      if (v > 9) v -= 9;
    }
    sum += v;
    dbl = !dbl;
  }
  return sum;
}

}  // namespace

bool luhn_valid(std::string_view pan) {
  if (pan.size() < 13) return false;
  for (char c : pan) {
    if (!digit(c)) return false;
  }
  return mod10_sum(pan, false) % 10 == 0;
}

char luhn_check_digit(std::string_view partial) {
  for (char c : partial) {
    if (!digit(c)) throw std::invalid_argument("luhn_check_digit: non-digit input");
  }
  // the check digit will sit at the rightmost position, so the last partial digit gets doubled
  const int sum = mod10_sum(partial, true);
  return static_cast<char>('0' + (10 - sum % 10) % 10);
}

std::vector<DigitRun> find_pan_runs(std::span<const std::uint8_t> bytes) {
  std::vector<DigitRun> out;
  std::size_t i = 0;
  while (i < bytes.size()) {
    if (!digit(static_cast<char>(bytes[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < bytes.size() && digit(static_cast<char>(bytes[j]))) ++j;
    const std::size_t len = j - i;
    if (len >= 13 && len <= 19) {
      std::string_view run(reinterpret_cast<const char*>(bytes.data() + i), len);
      if (luhn_valid(run)) out.push_back({i, len});
    }
    i = j;
  }
  return out;
}

}  // namespace breachsim::payment
